#include "hardylab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "hardylab/hardy.hpp"
#include "hardylab/transfer.hpp"

namespace hardylab::verify {
namespace {

double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
}

RadialProfile random_decreasing(std::mt19937_64& rng) {
    const int k = 3 + int(rng() % 4);
    std::vector<double> r{0.0}, v;
    double val = uniform(rng, 0.5, 2.0);
    v.push_back(val);
    double x = 0.0;
    for (int i = 0; i < k; ++i) {
        x += uniform(rng, 0.2, 1.5);
        val = (i + 1 == k) ? 0.0 : val * uniform(rng, 0.2, 0.95);
        r.push_back(x);
        v.push_back(val);
    }
    return RadialProfile::piecewise_linear(r, v);
}

RadialProfile random_profile(std::mt19937_64& rng) {
    const int k = 3 + int(rng() % 4);
    std::vector<double> r{0.0}, v{uniform(rng, 0.0, 1.5)};
    double x = 0.0;
    for (int i = 0; i < k; ++i) {
        x += uniform(rng, 0.2, 1.2);
        r.push_back(x);
        v.push_back(i + 1 == k ? 0.0 : uniform(rng, 0.0, 2.0));
    }
    return RadialProfile::piecewise_linear(r, v);
}

DecreasingProfile random_decreasing_phi(std::mt19937_64& rng) {
    const int k = 3 + int(rng() % 4);
    std::vector<double> s{0.0}, v;
    double val = uniform(rng, 0.5, 2.0);
    v.push_back(val);
    double x = 0.0;
    for (int i = 0; i < k; ++i) {
        x += uniform(rng, 0.3, 2.0);
        val = (i + 1 == k) ? 0.0 : val * uniform(rng, 0.2, 0.95);
        s.push_back(x);
        v.push_back(val);
    }
    return DecreasingProfile::piecewise_linear(s, v);
}

SectorFunction random_two_sector(std::mt19937_64& rng, const ModelManifold& m) {
    const double w = uniform(rng, 0.2, 0.8) * m.sphere_area();
    return SectorFunction(m, {Sector{w, random_profile(rng)},
                              Sector{m.sphere_area() - w, random_profile(rng)}});
}

WarpingSpec random_kind(std::mt19937_64& rng) {
    switch (rng() % 3) {
        case 0: return WarpingSpec::euclidean();
        case 1: return WarpingSpec::hyperbolic();
        default: return WarpingSpec::scaled_sinh(uniform(rng, 0.3, 2.0));
    }
}

class Checker {
public:
    Checker(Report& rep, std::string name, int instances)
        : rep_(rep), result_{std::move(name), instances, 0, 0.0} {}
    ~Checker() {
        rep_.rows.push_back(result_);
        if (result_.failures > 0) rep_.pass = false;
    }
    /// violation <= 0 passes; the magnitude is recorded either way
    void record(double violation) {
        result_.worst = std::max(result_.worst, violation);
        if (violation > 0.0) ++result_.failures;
    }

private:
    Report& rep_;
    PropertyResult result_;
};

}  // namespace

Report run_all(std::uint64_t seed, bool full) {
    Report rep;
    rep.seed = seed;
    rep.full = full;
    const int n = full ? 100 : 10;
    const int n_small = full ? 20 : 4;
    const int n_heavy = full ? 6 : 2;

    {
        Checker c(rep, "manifold.volume_monotone_inverse", n);
        std::mt19937_64 rng(seed ^ 0x11);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            double r1 = std::pow(10.0, uniform(rng, -3.0, 1.0));
            double r2 = r1 * (1.0 + uniform(rng, 0.1, 3.0));
            double viol = m.volume(r1) >= m.volume(r2) ? 1.0 : 0.0;
            for (double r : {r1, r2})
                viol = std::max(viol, std::fabs(m.inverse_volume(m.volume(r)) - r) / r - 1e-9);
            c.record(viol);
        }
    }
    {
        Checker c(rep, "manifold.flat_volume_bounds", n);
        std::mt19937_64 rng(seed ^ 0x12);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            const int N = m.dim();
            const double r = std::pow(10.0, uniform(rng, -3.0, 1.0));
            const double flat = m.sphere_area() * std::pow(r, N) / N;
            double viol = (flat - m.volume(r)) / std::max(flat, 1.0) - 1e-10;
            const double s = std::pow(10.0, uniform(rng, -3.0, 3.0));
            viol = std::max(viol, m.inverse_volume(s) /
                                          std::pow(N * s / m.sphere_area(), 1.0 / N) -
                                      1.0 - 1e-10);
            c.record(viol);
        }
    }
    {
        Checker c(rep, "manifold.inverse_doubling", n);
        std::mt19937_64 rng(seed ^ 0x13);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            const double s = std::pow(10.0, uniform(rng, -3.0, 3.0));
            const double kap = 1.0 + 9.0 * uniform(rng, 0.0, 1.0);
            c.record(m.inverse_volume(kap * s) / (kap * m.inverse_volume(s)) - 1.0 - 1e-10);
        }
    }
    {
        Checker c(rep, "manifold.jacobian_nondecreasing", n);
        std::mt19937_64 rng(seed ^ 0x14);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            double t1 = std::pow(10.0, uniform(rng, -6.0, 4.0));
            double t2 = std::pow(10.0, uniform(rng, -6.0, 4.0));
            if (t1 > t2) std::swap(t1, t2);
            c.record(m.jacobian(t1) - m.jacobian(t2) - 1e-12);
        }
    }
    {
        Checker c(rep, "manifold.psi_ratio_monotone", n);
        std::mt19937_64 rng(seed ^ 0x15);
        for (int i = 0; i < n; ++i) {
            WarpingSpec spec = random_kind(rng);
            const double r2 = std::pow(10.0, uniform(rng, -3.0, 1.0));
            const double r1 = r2 * (1.0 + uniform(rng, 0.0, 5.0));
            c.record(r1 / r2 - spec.psi(r1) / spec.psi(r2) - 1e-10);
        }
    }
    {
        Checker c(rep, "quadrature.additivity", n);
        std::mt19937_64 rng(seed ^ 0x21);
        for (int i = 0; i < n; ++i) {
            const double w = uniform(rng, 0.5, 4.0);
            Fn f = [w](double t) { return std::cos(w * t) * std::exp(-0.3 * t * t); };
            const double a = uniform(rng, -2.0, 0.0);
            const double cc = uniform(rng, 1.0, 4.0);
            const double b = uniform(rng, a + 0.1, cc - 0.05);
            auto whole = integrate(f, a, cc);
            auto left = integrate(f, a, b);
            auto right = integrate(f, b, cc);
            c.record(std::fabs(whole.value - left.value - right.value) -
                     (whole.abs_error + left.abs_error + right.abs_error + 1e-12));
        }
    }
    {
        Checker c(rep, "quadrature.invert_identity", n);
        std::mt19937_64 rng(seed ^ 0x22);
        for (int i = 0; i < n; ++i) {
            const double a = uniform(rng, 0.1, 2.0), b = uniform(rng, 0.0, 1.0);
            const double d = uniform(rng, 0.0, 1.0);
            Fn f = [a, b, d](double x) { return a * x * x * x + b * x + d; };
            const double x0 = uniform(rng, 0.0, 5.0);
            c.record(std::fabs(monotone_invert(f, f(x0), 0.0, 5.0) - x0) /
                         std::max(x0, 1.0) -
                     1e-9);
        }
    }
    {
        Checker c(rep, "quadrature.minimize_grid_dominance", n);
        std::mt19937_64 rng(seed ^ 0x23);
        for (int i = 0; i < n; ++i) {
            const double w = uniform(rng, 1.0, 6.0);
            Fn f = [w](double x) { return std::sin(w * x) + 0.1 * x * x; };
            auto mres = minimize_scalar(f, -3.0, 3.0, 64);
            double viol = -kInf;
            for (int k = 0; k <= 64; ++k)
                viol = std::max(viol, mres.value - f(-3.0 + 6.0 * k / 64.0) - 1e-12);
            c.record(viol);
        }
    }
    {
        Checker c(rep, "rearrange.equimeasurable_schwarz", n_small);
        std::mt19937_64 rng(seed ^ 0x31);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = random_two_sector(rng, m);
            auto s = schwarz(u);
            double viol = -kInf;
            const double top = u.sup_value();
            for (int k = 1; k <= 50; ++k) {
                const double t = top * k / 51.0;
                viol = std::max(viol,
                                std::fabs(distribution(u, t) - distribution(s, t)) - 1e-7);
            }
            c.record(viol);
        }
    }
    {
        Checker c(rep, "rearrange.norm_invariance", n_heavy);
        std::mt19937_64 rng(seed ^ 0x32);
        for (int i = 0; i < n_heavy; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = random_two_sector(rng, m);
            auto s = schwarz(u);
            const double p = 6.0;
            double viol = -kInf;
            for (double q : {2.0, kInf}) {
                const double a = lorentz_type_norm(u, p, q);
                const double b = lorentz_type_norm(s, p, q);
                viol = std::max(viol, std::fabs(a - b) / std::max(a, 1e-30) - 1e-6);
            }
            c.record(viol);
        }
    }
    {
        Checker c(rep, "rearrange.quasinorm_axioms", n_small);
        std::mt19937_64 rng(seed ^ 0x33);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(4, random_kind(rng));
            const double N = 4.0;
            auto u = random_two_sector(rng, m);
            auto v = SectorFunction(m, {Sector{u.sectors()[0].weight, random_profile(rng)},
                                        Sector{u.sectors()[1].weight, random_profile(rng)}});
            const double p = uniform(rng, 1.5, 5.0);
            const double q = (rng() % 2) ? 2.0 : kInf;
            const double nu = lorentz_type_norm(u, p, q);
            const double nv = lorentz_type_norm(v, p, q);
            double viol = std::fabs(lorentz_type_norm(u.scaled(2.0), p, q) - 2.0 * nu) /
                              std::max(nu, 1e-30) -
                          1e-12;
            const double C = std::pow(2.0, N / p - (std::isinf(q) ? 0.0 : 1.0 / q) + 1.0);
            viol = std::max(viol, lorentz_type_norm(add(u, v), p, q) -
                                      C * (nu + nv) * (1.0 + 1e-9));
            c.record(viol);
        }
    }
    {
        Checker c(rep, "rearrange.secondary_index_embedding", n_small);
        std::mt19937_64 rng(seed ^ 0x34);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = SectorFunction::radial(m, random_decreasing(rng));
            const double p = uniform(rng, 2.0, 6.0);
            const double q1 = uniform(rng, 1.0, 2.5);
            const double q2 = (rng() % 2) ? q1 + uniform(rng, 0.5, 3.0) : kInf;
            const double cexp = std::isinf(q2) ? 1.0 / q1 : (q2 - q1) / (q1 * q2);
            const double cst = std::pow(std::pow(2.0, 3.0 / p) / std::log(2.0), cexp);
            c.record(lorentz_type_norm(u, p, q2) -
                     cst * lorentz_type_norm(u, p, q1) * (1.0 + 1e-8));
        }
    }
    {
        Checker c(rep, "rearrange.space_embedding", n_small);
        std::mt19937_64 rng(seed ^ 0x35);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = random_two_sector(rng, m);
            const double p = uniform(rng, 2.0, 6.0);
            const double q = (rng() % 2) ? 1.0 : 2.0;
            const double cl = lorentz_norm(u, p, q);
            if (!std::isfinite(cl)) {
                c.record(-1.0);
                continue;
            }
            c.record(lorentz_type_norm(u, p, q) -
                     std::pow(3.0 / m.sphere_area(), 1.0 / p) * cl * (1.0 + 1e-8));
        }
    }
    {
        Checker c(rep, "rearrange.hardy_littlewood", n_small);
        std::mt19937_64 rng(seed ^ 0x36);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = random_two_sector(rng, m);
            const double lhs = hardy_term(u);
            const double rhs = hardy_term(schwarz(u));
            c.record(lhs - rhs - 1e-8 * std::max(1.0, rhs));
        }
    }
    {
        Checker c(rep, "hardy.deficit_nonnegative", n);
        std::mt19937_64 rng(seed ^ 0x41);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            auto u = SectorFunction::radial(m, random_decreasing(rng));
            c.record(-hardy::hardy_deficit(u).deficit - 1e-8);
        }
    }
    {
        Checker c(rep, "hardy.stability_chain", n);
        std::mt19937_64 rng(seed ^ 0x42);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            auto phi = random_decreasing_phi(rng);
            auto r = hardy::stability_pipeline(m, phi);
            double viol = r.checks.identity_residual - 1e-6;
            viol = std::max(viol, 1.0 - r.checks.first_term - 1e-6);
            viol = std::max(viol, r.checks.tau_energy - r.checks.tau_energy_bound - 1e-8);
            viol = std::max(viol,
                            r.delta - 2.0 * std::pow(std::max(r.D, 0.0), 0.25) - 1e-6);
            c.record(viol);
        }
    }
    {
        Checker c(rep, "hardy.nu_delta_consistency", n_small);
        std::mt19937_64 rng(seed ^ 0x43);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = SectorFunction::radial(m, random_decreasing(rng));
            auto ustar = decreasing_rearrangement(u);
            auto phi = hardy::to_euclidean_profile(m, ustar);
            const double A = halfline_integral(
                [&](double rho) {
                    const double v = phi(rho);
                    return v * v * std::pow(rho, -2.0 / 3.0) * m.jacobian(rho);
                },
                phi.support_bound(), phi.breakpoints(), 1e-10, 2.0 / 3.0);
            const double delta = hardy::marcinkiewicz_distance(m, phi, std::sqrt(A));
            const double nu = hardy::nu_distance(m, ustar);
            c.record(std::fabs(delta - hardy::nu_to_delta_factor(m) * nu) -
                     1e-5 * std::max(delta, 1.0));
        }
    }
    {
        Checker c(rep, "hardy.homogeneity", n_heavy);
        std::mt19937_64 rng(seed ^ 0x44);
        for (int i = 0; i < n_heavy; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = SectorFunction::radial(m, random_decreasing(rng));
            const double cscale = uniform(rng, 0.5, 3.0);
            double viol = std::fabs(hardy::rayleigh_quotient(u.scaled(cscale)) -
                                    hardy::rayleigh_quotient(u)) /
                              hardy::rayleigh_quotient(u) -
                          1e-6;
            const double c1 = hardy::verify_stability_theorem(u);
            const double c2 = hardy::verify_stability_theorem(u.scaled(cscale));
            viol = std::max(viol, std::fabs(c1 - c2) / std::max(c1, 1e-30) - 1e-6);
            c.record(viol);
        }
    }
    {
        Checker c(rep, "transfer.volume_matching", n);
        std::mt19937_64 rng(seed ^ 0x51);
        for (int i = 0; i < n; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            auto T = transfer::transport_map(m);
            const double r = std::pow(10.0, uniform(rng, -3.0, 1.0));
            const double rho = T.r_to_rho(r);
            const int N = m.dim();
            double viol = std::fabs(m.volume(r) -
                                    m.sphere_area() * std::pow(rho, N) / N) /
                              std::max(m.volume(r), 1e-300) -
                          1e-9;
            viol = std::max(viol, T.h(r) - 1.0 - 1e-10);
            c.record(viol);
        }
    }
    {
        Checker c(rep, "transfer.isometry", n_heavy);
        std::mt19937_64 rng(seed ^ 0x52);
        for (int i = 0; i < n_heavy; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = random_two_sector(rng, m);
            auto v = transfer::transport_function(u);
            const double p = 6.0;
            const double a = lorentz_norm(u, p, 2.0);
            const double b = lorentz_norm(v, p, 2.0);
            c.record(std::fabs(a - b) / std::max(a, 1e-30) - 1e-6);
        }
    }
    {
        Checker c(rep, "transfer.gradient_contraction", n_small);
        std::mt19937_64 rng(seed ^ 0x53);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3, random_kind(rng));
            auto u = SectorFunction::radial(m, random_profile(rng));
            if (u.is_zero()) {
                c.record(-1.0);
                continue;
            }
            auto v = transfer::transport_function(u);
            c.record(dirichlet_energy(v) - dirichlet_energy(u) -
                     1e-8 * std::max(1.0, dirichlet_energy(u)));
        }
    }
    {
        Checker c(rep, "transfer.deficit_transfers", n_small);
        std::mt19937_64 rng(seed ^ 0x54);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            ModelManifold flat(m.dim(), WarpingSpec::euclidean());
            auto u = SectorFunction::radial(m, random_profile(rng));
            if (u.is_zero()) {
                c.record(-1.0);
                continue;
            }
            auto [md, fd] = transfer::manifold_to_euclid_deficit(u);
            double viol = fd - md - 1e-8 * std::max(1.0, std::fabs(fd));
            auto uf = SectorFunction::radial(flat, random_profile(rng));
            if (!uf.is_zero()) {
                auto [fd2, md2] = transfer::euclid_to_manifold_deficit(m, uf);
                viol = std::max(viol, md2 - fd2 - 1e-8 * std::max(1.0, std::fabs(md2)));
            }
            c.record(viol);
        }
    }
    {
        Checker c(rep, "transfer.embedding_bound", n_small);
        std::mt19937_64 rng(seed ^ 0x55);
        for (int i = 0; i < n_small; ++i) {
            ModelManifold m(3 + int(rng() % 3), random_kind(rng));
            auto u = SectorFunction::radial(m, random_decreasing(rng));
            auto r = transfer::embedding_ratio(u);
            c.record(r.ratio - r.sharp_constant - 1e-6);
        }
    }
    return rep;
}

void write_report(const Report& rep, std::ostream& os) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "verify_all seed=%llu scale=%s\n",
                  static_cast<unsigned long long>(rep.seed), rep.full ? "full" : "quick");
    os << buf;
    os << "property,instances,failures,worst_violation,status\n";
    for (const auto& row : rep.rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%s\n", row.name.c_str(),
                      row.instances, row.failures, row.worst,
                      row.failures == 0 ? "pass" : "FAIL");
        os << buf;
    }
    os << (rep.pass ? "ALL PASS\n" : "FAILURES PRESENT\n");
}

}  // namespace hardylab::verify
