// hardylab: experiment runner for Hardy-inequality stability on model manifolds.
//
//   hardylab run --config experiment.json [--out PATH] [--format csv|json]
//                [--seed INT] [--tol-abs X] [--tol-rel X]
//   hardylab verify [--seed INT] [--scale quick|full] [--out PATH]
//
// Exit codes: 0 all checks pass, 2 an inequality check failed, 1 config or
// numeric error. HARDYLAB_THREADS caps sweep parallelism.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <random>

#include "hardylab/hardy.hpp"
#include "hardylab/serialize.hpp"
#include "hardylab/transfer.hpp"
#include "hardylab/verify.hpp"

using nlohmann::json;
using namespace hardylab;

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Cell {
    std::vector<std::pair<std::string, std::string>> cols;
    bool pass = true;
    void add(const std::string& k, double v) { cols.push_back({k, fmt(v)}); }
    void add(const std::string& k, const std::string& v) { cols.push_back({k, v}); }
    void flag(const std::string& k, bool ok) {
        cols.push_back({k, ok ? "1" : "0"});
        pass = pass && ok;
    }
};

struct Table {
    std::vector<Cell> rows;
    bool pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

void write_table(const Table& t, std::ostream& os, const std::string& format) {
    if (t.rows.empty()) return;
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : t.rows) {
            json row = json::object();
            for (const auto& [k, v] : r.cols) row[k] = v;
            arr.push_back(row);
        }
        os << arr.dump(2) << "\n";
        return;
    }
    for (size_t i = 0; i < t.rows[0].cols.size(); ++i)
        os << (i ? "," : "") << t.rows[0].cols[i].first;
    os << "\n";
    for (const auto& r : t.rows) {
        for (size_t i = 0; i < r.cols.size(); ++i) os << (i ? "," : "") << r.cols[i].second;
        os << "\n";
    }
}

int sweep_threads(size_t cells) {
    const char* env = std::getenv("HARDYLAB_THREADS");
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned cap = env ? unsigned(std::max(1, std::atoi(env))) : hw;
    return int(std::min<size_t>(std::min(hw, cap), cells));
}

// ordered parallel map over sweep cells; rows are emitted in index order
template <typename F>
std::vector<Cell> parallel_cells(size_t n, F&& fn) {
    std::vector<Cell> out(n);
    if (sweep_threads(n) <= 1) {
        for (size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::future<Cell>> futs;
    futs.reserve(n);
    for (size_t i = 0; i < n; ++i)
        futs.push_back(std::async(std::launch::async, [&fn, i]() { return fn(i); }));
    for (size_t i = 0; i < n; ++i) out[i] = futs[i].get();
    return out;
}

struct Config {
    ModelManifold manifold{3, WarpingSpec::euclidean()};
    std::string kind_name = "euclidean";
    std::string experiment;
    json function;  // catalog name, inline object, or null
    std::vector<double> eps_list;
    std::vector<int> k_list;
    int seeds = 0;
    std::uint64_t seed = 42;
    double window_scale = 1e-8;
    double window_cutoff = 0.1;
    std::string out_path;
    std::string format = "csv";
};

Config parse_config(const json& j) {
    static const std::set<std::string> known{"schema", "manifold", "experiment",
                                             "function", "sweep", "tolerances",
                                             "window", "output", "seed"};
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (!known.count(key))
            throw std::domain_error("config: unknown field '" + key + "'");
    }
    Config cfg;
    if (!j.contains("schema") || j.at("schema").get<int>() != 1)
        throw std::domain_error("config: field 'schema' must be 1");
    if (!j.contains("manifold")) throw std::domain_error("config: missing 'manifold'");
    const json& mj = j.at("manifold");
    if (!mj.contains("dim")) throw std::domain_error("config: manifold missing 'dim'");
    const int dim = mj.at("dim").get<int>();
    if (dim < 3) throw std::domain_error("config: field 'dim' must be >= 3");
    json wj = mj;
    wj.erase("dim");
    WarpingSpec spec = warping_from_json(wj);
    cfg.kind_name = to_string(spec.kind());
    cfg.manifold = ModelManifold(dim, spec);
    if (!j.contains("experiment")) throw std::domain_error("config: missing 'experiment'");
    cfg.experiment = j.at("experiment").get<std::string>();
    if (j.contains("function")) cfg.function = j.at("function");
    if (j.contains("sweep")) {
        const json& sj = j.at("sweep");
        if (sj.contains("eps")) cfg.eps_list = sj.at("eps").get<std::vector<double>>();
        if (sj.contains("k")) cfg.k_list = sj.at("k").get<std::vector<int>>();
        if (sj.contains("seeds")) cfg.seeds = sj.at("seeds").get<int>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("window")) {
        cfg.window_scale = j.at("window").value("scale", 1e-8);
        cfg.window_cutoff = j.at("window").value("cutoff", 0.1);
    }
    if (j.contains("output")) {
        cfg.out_path = j.at("output").value("path", "");
        cfg.format = j.at("output").value("format", "csv");
    }
    return cfg;
}

SectorFunction config_function(const Config& cfg, const char* fallback) {
    if (cfg.function.is_null()) return catalog_function(cfg.manifold, fallback);
    if (cfg.function.is_string())
        return catalog_function(cfg.manifold, cfg.function.get<std::string>());
    return sector_function_from_json(cfg.manifold, cfg.function);
}

void lead_columns(Cell& row, const Config& cfg, const char* experiment) {
    row.add("experiment", experiment);
    row.add("kind", cfg.kind_name);
    row.add("N", double(cfg.manifold.dim()));
}

Table run_validate(const Config& cfg) {
    Table t;
    auto rep = validate_warping(cfg.manifold.warping(), 10.0, 128);
    for (const auto& chk : rep.checks) {
        Cell row;
        lead_columns(row, cfg, "validate");
        row.add("check", chk.name);
        row.add("violation", chk.violation);
        row.add("tolerance", rep.tolerance);
        row.flag("pass", chk.pass);
        t.rows.push_back(row);
    }
    return t;
}

Table run_deficit(const Config& cfg) {
    Table t;
    auto u = config_function(cfg, "bump");
    auto d = hardy::hardy_deficit(u);
    Cell row;
    lead_columns(row, cfg, "deficit");
    row.add("grad_energy", d.grad_energy);
    row.add("hardy_term", d.hardy_term);
    row.add("deficit", d.deficit);
    row.add("quad_error", d.quad_error);
    row.add("rayleigh_quotient", d.grad_energy / d.hardy_term);
    row.add("hardy_constant", hardy::hardy_constant(cfg.manifold.dim()));
    row.flag("nonnegative", d.deficit >= -d.quad_error - 1e-8);
    t.rows.push_back(row);
    return t;
}

Table run_sharpness(const Config& cfg) {
    std::vector<double> eps = cfg.eps_list;
    if (eps.empty()) eps = {0.2, 0.1, 0.05, 0.025};
    const double ch = hardy::hardy_constant(cfg.manifold.dim());
    std::vector<double> quotients(eps.size());
    auto probe = parallel_cells(eps.size(), [&](size_t i) {
        quotients[i] = hardy::sharpness_quotient(cfg.manifold, eps[i], cfg.window_scale,
                                                 cfg.window_cutoff);
        return Cell{};
    });
    (void)probe;
    Table t;
    for (size_t i = 0; i < eps.size(); ++i) {
        Cell row;
        lead_columns(row, cfg, "sharpness");
        row.add("eps", eps[i]);
        row.add("quotient", quotients[i]);
        row.add("C_H", ch);
        row.add("gap", quotients[i] - ch);
        row.flag("above_C_H", quotients[i] >= ch - 1e-9);
        row.flag("decreasing",
                 i == 0 || !(eps[i] < eps[i - 1]) || quotients[i] < quotients[i - 1]);
        t.rows.push_back(row);
    }
    return t;
}

Table run_stability(const Config& cfg) {
    Table t;
    const ModelManifold& m = cfg.manifold;
    if (cfg.seeds > 0) {
        auto cells = parallel_cells(size_t(cfg.seeds), [&](size_t i) {
            std::mt19937_64 rng(cfg.seed + i);
            auto uni = [&rng](double a, double b) {
                return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
            };
            std::vector<double> s{0.0}, v{uni(0.5, 2.0)};
            double x = 0.0;
            const int kpc = 3 + int(rng() % 4);
            for (int k = 0; k < kpc; ++k) {
                x += uni(0.3, 2.0);
                s.push_back(x);
                v.push_back(k + 1 == kpc ? 0.0 : v.back() * uni(0.2, 0.95));
            }
            auto phi = DecreasingProfile::piecewise_linear(s, v);
            auto rep = hardy::stability_pipeline(m, phi);
            Cell row;
            lead_columns(row, cfg, "stability");
            row.add("seed", double(cfg.seed + i));
            row.add("I", rep.I);
            row.add("D", rep.D);
            row.add("delta", rep.delta);
            row.add("identity_residual", rep.checks.identity_residual);
            row.add("first_term", rep.checks.first_term);
            row.add("tau_energy", rep.checks.tau_energy);
            row.add("tau_energy_bound", rep.checks.tau_energy_bound);
            row.flag("bound_ok", rep.bound_ok);
            row.flag("chain_ok",
                     rep.checks.identity_residual <= 1e-6 &&
                         rep.checks.first_term >= 1.0 - 1e-6 &&
                         rep.checks.tau_energy <= rep.checks.tau_energy_bound + 1e-8);
            return row;
        });
        t.rows = cells;
        return t;
    }
    auto u = config_function(cfg, "poly_bump");
    auto ustar = decreasing_rearrangement(u);
    auto phi = hardy::to_euclidean_profile(m, ustar);
    auto rep = hardy::stability_pipeline(m, phi);
    rep.nu = hardy::nu_distance(m, ustar);
    rep.d_M = hardy::stability_distance(u);
    rep.implied_C = hardy::verify_stability_theorem(u);
    Cell row;
    lead_columns(row, cfg, "stability");
    row.add("I", rep.I);
    row.add("D", rep.D);
    row.add("delta", rep.delta);
    row.add("nu", rep.nu);
    row.add("nu_delta_factor", hardy::nu_to_delta_factor(m));
    row.add("d_M", rep.d_M);
    row.add("implied_C", rep.implied_C);
    row.add("identity_residual", rep.checks.identity_residual);
    row.flag("bound_ok", rep.bound_ok);
    row.flag("implied_C_positive", rep.implied_C > 0.0);
    t.rows.push_back(row);
    return t;
}

Table run_embedding(const Config& cfg) {
    Table t;
    auto u = config_function(cfg, "bump");
    auto rep = transfer::embedding_ratio(u);
    Cell row;
    lead_columns(row, cfg, "embedding");
    row.add("ratio", rep.ratio);
    row.add("sharp_constant", rep.sharp_constant);
    row.add("gap", rep.gap);
    row.flag("within_bound", rep.gap >= -1e-6);
    t.rows.push_back(row);
    if (!cfg.k_list.empty()) {
        ModelManifold flat(cfg.manifold.dim(), WarpingSpec::euclidean());
        auto bump = RadialProfile::bump(1.0, 1.0);
        const double flat_ratio = transfer::scaling_sequence_ratio(flat, bump, 1);
        auto cells = parallel_cells(cfg.k_list.size(), [&](size_t i) {
            Cell r2;
            lead_columns(r2, cfg, "embedding_scaling");
            const double rk =
                transfer::scaling_sequence_ratio(cfg.manifold, bump, cfg.k_list[i]);
            r2.add("k", double(cfg.k_list[i]));
            r2.add("ratio_k", rk);
            r2.add("flat_ratio", flat_ratio);
            r2.add("rel_gap", std::fabs(rk - flat_ratio) / flat_ratio);
            r2.flag("within_sharp",
                    rk <= transfer::alvino_constant(cfg.manifold.dim()) + 1e-6);
            return r2;
        });
        for (auto& r2 : cells) t.rows.push_back(r2);
    }
    return t;
}

Table run_transfer(const Config& cfg) {
    Table t;
    const ModelManifold& m = cfg.manifold;
    const int N = m.dim();
    auto T = transfer::transport_map(m);
    double worst_match = 0.0, worst_h = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = 1e-3 * std::pow(1e4, i / 99.0);
        const double rho = T.r_to_rho(r);
        worst_match = std::max(
            worst_match, std::fabs(m.volume(r) - m.sphere_area() * std::pow(rho, N) / N) /
                             std::max(m.volume(r), 1e-300));
        worst_h = std::max(worst_h, T.h(r) - 1.0);
    }
    auto push_check = [&t, &cfg](const std::string& name, double value, bool ok) {
        Cell row;
        lead_columns(row, cfg, "transfer");
        row.add("check", name);
        row.add("value", value);
        row.flag("pass", ok);
        t.rows.push_back(row);
    };
    push_check("volume_matching_residual", worst_match, worst_match <= 1e-9);
    push_check("h_le_1_excess", worst_h, worst_h <= 1e-10);

    auto u = config_function(cfg, "two_sector");
    auto v = transfer::transport_function(u);
    const double p = 2.0 * N / (N - 2.0);
    const double nu_m = lorentz_norm(u, p, 2.0);
    const double nu_f = lorentz_norm(v, p, 2.0);
    push_check("lorentz_isometry_rel_diff", std::fabs(nu_m - nu_f) / std::max(nu_m, 1e-300),
               std::fabs(nu_m - nu_f) <= 1e-6 * std::max(nu_m, 1e-300));

    auto [md, fd] = transfer::manifold_to_euclid_deficit(u);
    push_check("manifold_to_euclid_slack", md - fd,
               md - fd >= -1e-8 * std::max(1.0, std::fabs(fd)));

    ModelManifold flat(N, WarpingSpec::euclidean());
    auto uf = catalog_function(flat, "bump");
    auto [fd2, md2] = transfer::euclid_to_manifold_deficit(m, uf);
    push_check("euclid_to_manifold_slack", fd2 - md2,
               fd2 - md2 >= -1e-8 * std::max(1.0, std::fabs(md2)));

    auto [wl, wr] = transfer::weighted_manifold_hardy_check(m, RadialProfile::bump(1.0, 2.0));
    push_check("weighted_manifold_hardy_slack", wr - wl, wl <= wr + 1e-10);

    const ModelManifold& mm = m;
    auto [el, er] = transfer::weighted_euclidean_hardy_check(
        N, [&mm](double r) { return r > 0.0 ? mm.psi(r) / r : 1.0; },
        RadialProfile::bump(1.0, 2.0));
    push_check("weighted_euclidean_hardy_slack", er - el, el <= er + 1e-10);
    return t;
}

Table run_verify_experiment(const Config& cfg) {
    auto rep = verify::run_all(cfg.seed, false);
    Table t;
    for (const auto& row : rep.rows) {
        Cell c;
        lead_columns(c, cfg, "verify");
        c.add("property", row.name);
        c.add("instances", double(row.instances));
        c.add("failures", double(row.failures));
        c.add("worst_violation", row.worst);
        c.flag("pass", row.failures == 0);
        t.rows.push_back(c);
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardylab: Hardy-inequality stability laboratory on model manifolds"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "", scale = "quick";
    std::uint64_t seed = 42;
    double tol_abs = -1.0, tol_rel = -1.0;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_path, "result file path (overrides config)");
    run->add_option("--format", format, "csv or json (overrides config)")
        ->check(CLI::IsMember({"", "csv", "json"}));
    run->add_option("--seed", seed, "seed override");
    run->add_option("--tol-abs", tol_abs, "absolute tolerance override");
    run->add_option("--tol-rel", tol_rel, "relative tolerance override");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the seeded property suite");
    verify_cmd->add_option("--seed", seed, "RNG seed");
    verify_cmd->add_option("--scale", scale, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify_cmd->add_option("--out", out_path, "report file path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) {
            auto rep = verify::run_all(seed, scale == "full");
            verify::write_report(rep, std::cout);
            if (!out_path.empty()) {
                std::ofstream f(out_path, std::ios::binary);
                verify::write_report(rep, f);
            }
            return rep.pass ? 0 : 2;
        }

        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config '" << config_path << "'\n";
            return 1;
        }
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            std::cerr << "error: config parse failure: " << e.what() << "\n";
            return 1;
        }
        Config cfg = parse_config(j);
        if (run->count("--seed")) cfg.seed = seed;
        if (!format.empty()) cfg.format = format;
        if (!out_path.empty()) cfg.out_path = out_path;

        Table t;
        if (cfg.experiment == "validate")
            t = run_validate(cfg);
        else if (cfg.experiment == "deficit")
            t = run_deficit(cfg);
        else if (cfg.experiment == "sharpness")
            t = run_sharpness(cfg);
        else if (cfg.experiment == "stability")
            t = run_stability(cfg);
        else if (cfg.experiment == "embedding")
            t = run_embedding(cfg);
        else if (cfg.experiment == "transfer")
            t = run_transfer(cfg);
        else if (cfg.experiment == "verify")
            t = run_verify_experiment(cfg);
        else
            throw std::domain_error("config: unknown experiment '" + cfg.experiment + "'");

        std::ostringstream body;
        write_table(t, body, cfg.format);
        if (!cfg.out_path.empty()) {
            std::ofstream f(cfg.out_path, std::ios::binary);
            f << body.str();
        } else {
            std::cout << body.str();
        }
        const bool pass = t.pass();
        std::cout << "hardylab " << cfg.experiment << ": " << t.rows.size() << " rows, "
                  << (pass ? "all checks passed" : "CHECK FAILURES") << "\n";
        return pass ? 0 : 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
