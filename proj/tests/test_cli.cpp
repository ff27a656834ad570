#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = HARDYLAB_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out = "cli_stdout.tmp";
    const std::string cmd = kCli + " " + args + " > " + out + " 2> cli_stderr.tmp";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(out, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    r.stdout_text = os.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    f << body;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("validate experiment: euclidean passes with zero violations") {
    write_file("cfg_validate.json", R"({
      "schema": 1,
      "manifold": {"kind": "euclidean", "dim": 3},
      "experiment": "validate",
      "output": {"path": "validate_out.csv", "format": "csv"}
    })");
    auto r = run_cli("run --config cfg_validate.json");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("validate_out.csv");
    CHECK(csv.find("experiment,kind,N,check,violation,tolerance,pass") == 0);
    CHECK(count_lines(csv) == 6);  // header + five checks
    // every violation column is exactly 0
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        const auto p1 = line.find(",violation") == std::string::npos ? line : line;
        (void)p1;
        size_t pos = 0;
        for (int c = 0; c < 4; ++c) pos = line.find(',', pos) + 1;
        CHECK(line.substr(pos, line.find(',', pos) - pos) == "0");
    }
}

TEST_CASE("bad config: dim below 3 exits 1 and names the field") {
    write_file("cfg_bad.json", R"({
      "schema": 1,
      "manifold": {"kind": "hyperbolic", "dim": 2},
      "experiment": "stability"
    })");
    const std::string cmd =
        kCli + " run --config cfg_bad.json > cli_stdout.tmp 2> cli_stderr.tmp";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 1);
    CHECK(slurp("cli_stderr.tmp").find("dim") != std::string::npos);
}

TEST_CASE("unknown config field is rejected") {
    write_file("cfg_unknown.json", R"({
      "schema": 1,
      "manifold": {"kind": "euclidean", "dim": 3},
      "experiment": "validate",
      "surprise": true
    })");
    const std::string cmd =
        kCli + " run --config cfg_unknown.json > cli_stdout.tmp 2> cli_stderr.tmp";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 1);
    CHECK(slurp("cli_stderr.tmp").find("surprise") != std::string::npos);
}

TEST_CASE("sharpness sweep: fixed schema, quotient column strictly decreasing") {
    write_file("cfg_sharp.json", R"({
      "schema": 1,
      "manifold": {"kind": "hyperbolic", "dim": 3},
      "experiment": "sharpness",
      "sweep": {"eps": [0.2, 0.1, 0.05, 0.025]},
      "window": {"scale": 1e-12, "cutoff": 0.1},
      "output": {"path": "sharp_out.csv", "format": "csv"}
    })");
    auto r = run_cli("run --config cfg_sharp.json");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("sharp_out.csv");
    CHECK(csv.find("experiment,kind,N,eps,quotient,C_H,gap,above_C_H,decreasing") == 0);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    double prev = 1e300;
    int rows = 0;
    while (std::getline(is, line)) {
        size_t pos = 0;
        for (int c = 0; c < 4; ++c) pos = line.find(',', pos) + 1;
        const double q = std::stod(line.substr(pos));
        CHECK(q < prev);
        prev = q;
        ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("determinism: identical config and seed give identical bytes") {
    write_file("cfg_det.json", R"({
      "schema": 1,
      "manifold": {"kind": "hyperbolic", "dim": 3},
      "experiment": "stability",
      "seed": 11,
      "sweep": {"seeds": 4},
      "output": {"path": "det_a.csv", "format": "csv"}
    })");
    auto r1 = run_cli("run --config cfg_det.json");
    CHECK(r1.exit_code == 0);
    auto a = slurp("det_a.csv");
    auto r2 = run_cli("run --config cfg_det.json --out det_b.csv");
    CHECK(r2.exit_code == 0);
    auto b = slurp("det_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("json output format") {
    write_file("cfg_json.json", R"({
      "schema": 1,
      "manifold": {"kind": "scaled_sinh", "lambda": 1.5, "dim": 4},
      "experiment": "deficit",
      "function": "bump",
      "output": {"path": "deficit_out.json", "format": "json"}
    })");
    auto r = run_cli("run --config cfg_json.json");
    CHECK(r.exit_code == 0);
    const std::string body = slurp("deficit_out.json");
    CHECK(body.find("\"deficit\"") != std::string::npos);
    CHECK(body.find("\"rayleigh_quotient\"") != std::string::npos);
}

TEST_CASE("inline sector function JSON round-trips through the config") {
    write_file("cfg_fn.json", R"({
      "schema": 1,
      "manifold": {"kind": "hyperbolic", "dim": 3},
      "experiment": "deficit",
      "function": {"sectors": [
        {"weight_fraction": 1.0,
         "profile": {"kind": "piecewise_linear",
                     "breakpoints": [0.0, 1.0, 2.0],
                     "values": [1.0, 0.5, 0.0]}}]},
      "output": {"path": "fn_out.csv", "format": "csv"}
    })");
    auto r = run_cli("run --config cfg_fn.json");
    CHECK(r.exit_code == 0);
    CHECK(slurp("fn_out.csv").find("deficit") != std::string::npos);
}

TEST_CASE("embedding experiment with a k sweep") {
    write_file("cfg_emb.json", R"({
      "schema": 1,
      "manifold": {"kind": "hyperbolic", "dim": 3},
      "experiment": "embedding",
      "function": "bump",
      "sweep": {"k": [1, 8]},
      "output": {"path": "emb_out.csv", "format": "csv"}
    })");
    auto r = run_cli("run --config cfg_emb.json");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("emb_out.csv");
    CHECK(csv.find("ratio") != std::string::npos);
    CHECK(count_lines(csv) == 4);  // header + embedding row + two sweep rows
}

TEST_CASE("transfer experiment runs its named checks") {
    write_file("cfg_tr.json", R"({
      "schema": 1,
      "manifold": {"kind": "scaled_sinh", "lambda": 0.9, "dim": 3},
      "experiment": "transfer",
      "output": {"path": "tr_out.csv", "format": "csv"}
    })");
    auto r = run_cli("run --config cfg_tr.json");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("tr_out.csv");
    for (const char* name :
         {"volume_matching_residual", "h_le_1_excess", "lorentz_isometry_rel_diff",
          "manifold_to_euclid_slack", "euclid_to_manifold_slack",
          "weighted_manifold_hardy_slack", "weighted_euclidean_hardy_slack"})
        CHECK(csv.find(name) != std::string::npos);
}

TEST_CASE("sweep parallelism does not change the output bytes") {
    write_file("cfg_par.json", R"({
      "schema": 1,
      "manifold": {"kind": "hyperbolic", "dim": 3},
      "experiment": "sharpness",
      "sweep": {"eps": [0.2, 0.1, 0.05]},
      "output": {"path": "par_a.csv", "format": "csv"}
    })");
    const std::string c1 = "HARDYLAB_THREADS=1 " + kCli +
                           " run --config cfg_par.json > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(c1.c_str())) == 0);
    const std::string a = slurp("par_a.csv");
    const std::string c2 = "HARDYLAB_THREADS=4 " + kCli +
                           " run --config cfg_par.json --out par_b.csv > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(c2.c_str())) == 0);
    CHECK(!a.empty());
    CHECK(a == slurp("par_b.csv"));
}

TEST_CASE("verify subcommand: quick scale, reproducible report") {
    auto r1 = run_cli("verify --seed 7 --scale quick --out ver_a.txt");
    CHECK(r1.exit_code == 0);
    auto r2 = run_cli("verify --seed 7 --scale quick --out ver_b.txt");
    CHECK(r2.exit_code == 0);
    const std::string a = slurp("ver_a.txt");
    CHECK(!a.empty());
    CHECK(a == slurp("ver_b.txt"));
    CHECK(a.find("ALL PASS") != std::string::npos);
    CHECK(r1.stdout_text.find("verify_all seed=7 scale=quick") != std::string::npos);
}
