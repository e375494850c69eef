// End-to-end checks of the zeromode binary: exit codes, report schemas,
// strict config parsing, and byte-level reproducibility.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stderr_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path errfile = dir / "stderr.txt";
    const std::string cmd =
        std::string(ZM_CLI_PATH) + " " + args + " 2>" + errfile.string() + " >/dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream f(errfile);
    std::stringstream ss;
    ss << f.rdbuf();
    r.stderr_text = ss.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "zeromode_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json load_json(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    return json::parse(f);
}

std::string read_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// fast quadrature overrides shared by most runs
const std::string kFast =
    " --sphere-points 256 --tol 1e-5 --rmax 1e4 --rule.max-panels 200";

}  // namespace

TEST_CASE("verify on the loss-yau config passes", "[cli]") {
    const fs::path dir = fresh_dir("verify_ok");
    const std::string cfg = std::string(ZM_CONFIG_DIR) + "/loss_yau.ini";
    const RunResult r = run_cli("verify --config " + cfg + " --out " + dir.string() +
                                    " --verify.points 25" + kFast,
                                dir);
    CHECK(r.exit_code == 0);
    const json j = load_json(dir / "verify.json");
    CHECK(j.at("schema") == 1);
    CHECK(j.at("pass") == true);
    CHECK(j.at("weyl_residual").at("max").get<double>() <= 1e-5);
    CHECK(j.at("decay_envelope").at("C_f").get<double>() == Catch::Approx(1.0).margin(1e-9));
    CHECK(j.at("assumption_audit").at("hermitian_ok") == true);
}

TEST_CASE("rho below 1 is a config error citing assumption (A)", "[cli]") {
    const fs::path dir = fresh_dir("bad_rho");
    const RunResult r = run_cli("verify --family.name loss-yau --family.rho 0.5 --out " +
                                    dir.string() + kFast,
                                dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("assumption (A)") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected", "[cli]") {
    const fs::path dir = fresh_dir("bad_key");
    const fs::path cfg = dir / "bad.ini";
    std::ofstream(cfg) << "[family]\nname = \"loss-yau\"\nnot_a_real_key = 3\n";
    const RunResult r = run_cli("verify --config " + cfg.string() + " --out " + dir.string(),
                                dir);
    CHECK(r.exit_code == 2);
}

TEST_CASE("unreachable tolerance exits 1 with an honest report", "[cli]") {
    const fs::path dir = fresh_dir("budget_exceeded");
    const RunResult r = run_cli(
        "verify --family.name loss-yau --out " + dir.string() +
            " --verify.points 5 --sphere-points 64 --tol 1e-30 --rule.max-panels 32",
        dir);
    CHECK(r.exit_code == 1);
    const json j = load_json(dir / "verify.json");
    CHECK(j.at("limit_integral").at("converged") == false);
    CHECK(j.at("limit_integral").at("err_est").get<double>() > 0.0);
}

TEST_CASE("limit on the free config: all limits vanish, row counts match", "[cli]") {
    const fs::path dir = fresh_dir("limit_free");
    const std::string cfg = std::string(ZM_CONFIG_DIR) + "/free.ini";
    const RunResult r = run_cli("limit --config " + cfg + " --out " + dir.string() + kFast, dir);
    CHECK(r.exit_code == 0);
    const json j = load_json(dir / "limit.json");
    CHECK(j.at("limit_modulus").at("value").get<double>() == 0.0);
    for (const auto& row : j.at("limits")) CHECK(row.at("modulus").get<double>() == 0.0);
    CHECK(j.at("equivalence").at("integral_is_zero") == true);
    CHECK(j.at("equivalence").at("limit_is_zero") == true);

    // scan csv rows = |r_ladder| x |omega_set| (+ header)
    const std::string csv = read_bytes(dir / "limit_scan.csv");
    const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows == 1 + 3 * 16);
}

TEST_CASE("limit on loss-yau: moduli near one, slope near minus one", "[cli][slow]") {
    const fs::path dir = fresh_dir("limit_ly");
    const RunResult r = run_cli(
        "limit --family.name loss-yau --out " + dir.string() +
            " --probe.omega-points 8 --probe.r-ladder 10,20,40,80"
            " --sphere-points 512 --tol 1e-6 --rmax 1e5 --rule.max-panels 200",
        dir);
    CHECK(r.exit_code == 0);
    const json j = load_json(dir / "limit.json");
    CHECK(j.at("limit_modulus").at("value").get<double>() == Catch::Approx(1.0).margin(1e-3));
    CHECK(j.at("modulus_spread").at("value").get<double>() <= 1e-12);
    const double slope = j.at("fit").at("slope").get<double>();
    CHECK(slope >= -1.2);
    CHECK(slope <= -0.8);
    CHECK(j.at("weyl_consistency").at("ok") == true);
}

TEST_CASE("budget rejects r < 2 R0 with exit 2", "[cli]") {
    const fs::path dir = fresh_dir("budget_bad");
    const RunResult r = run_cli("budget --family.name loss-yau --budget.r 10 --budget.r0 10"
                                " --out " + dir.string() + kFast,
                                dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("r >= 2 R0") != std::string::npos);
}

TEST_CASE("budget sum check passes on a small grid", "[cli][slow]") {
    const fs::path dir = fresh_dir("budget_ok");
    const RunResult r = run_cli(
        "budget --family.name loss-yau --out " + dir.string() +
            " --budget.r 40 --budget.r0 10 --budget.slope-r 20,40,80"
            " --budget.slope3-r0 2.5,5,10"
            " --sphere-points 512 --tol 1e-7 --rmax 1e5 --rule.max-panels 300",
        dir);
    CHECK(r.exit_code == 0);
    const json j = load_json(dir / "budget.json");
    REQUIRE(j.at("grid").size() == 1);
    CHECK(j.at("grid")[0].at("sum_ok") == true);
    const double slope3 = j.at("slope_III_vs_R0").at("fit").at("slope").get<double>();
    CHECK(slope3 >= -1.25);
    CHECK(slope3 <= -0.75);
}

TEST_CASE("residual command emits the summary schema", "[cli][slow]") {
    const fs::path dir = fresh_dir("residual");
    const RunResult r = run_cli(
        "residual --family.name loss-yau --out " + dir.string() +
            " --residual.samples 4 --residual.far-radii 10"
            " --sphere-points 512 --tol 1e-5 --rmax 200 --rule.max-panels 200",
        dir);
    CHECK(r.exit_code == 0);
    const json j = load_json(dir / "residual.json");
    CHECK(j.at("max_residual").get<double>() <= 1e-3);
    CHECK(j.at("quadrature_tol").get<double>() == 1e-5);
    CHECK(j.at("sample_count").get<int>() == 5);
    const std::string csv = read_bytes(dir / "residual.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5);
}

TEST_CASE("same config and seed give byte-identical reports", "[cli]") {
    const fs::path dir1 = fresh_dir("repro1");
    const fs::path dir2 = fresh_dir("repro2");
    const std::string args =
        "limit --family.name loss-yau --seed 3 --probe.omega-points 4"
        " --probe.r-ladder 10,20 --format both" + kFast;
    CHECK(run_cli(args + " --out " + dir1.string(), dir1).exit_code == 0);
    CHECK(run_cli(args + " --out " + dir2.string(), dir2).exit_code == 0);
    CHECK(read_bytes(dir1 / "limit.json") == read_bytes(dir2 / "limit.json"));
    CHECK(read_bytes(dir1 / "limit_scan.csv") == read_bytes(dir2 / "limit_scan.csv"));
    CHECK_FALSE(read_bytes(dir1 / "limit.json").empty());
}

TEST_CASE("format selects which files are written", "[cli]") {
    const fs::path dir = fresh_dir("format_json");
    const std::string args =
        "limit --family.name free --probe.omega-points 4 --probe.r-ladder 10,20" + kFast;
    CHECK(run_cli(args + " --format json --out " + dir.string(), dir).exit_code == 0);
    CHECK(fs::exists(dir / "limit.json"));
    CHECK_FALSE(fs::exists(dir / "limit_scan.csv"));

    const fs::path dir2 = fresh_dir("format_csv");
    CHECK(run_cli(args + " --format csv --out " + dir2.string(), dir2).exit_code == 0);
    CHECK_FALSE(fs::exists(dir2 / "limit.json"));
    CHECK(fs::exists(dir2 / "limit_scan.csv"));
}

TEST_CASE("threads flag does not change results", "[cli]") {
    const fs::path dir1 = fresh_dir("thr1");
    const fs::path dir4 = fresh_dir("thr4");
    const std::string args =
        "residual --family.name loss-yau --residual.samples 3 --residual.far-radii 10"
        " --sphere-points 128 --tol 1e-4 --rmax 100 --rule.max-panels 100";
    CHECK(run_cli(args + " --threads 1 --out " + dir1.string(), dir1).exit_code == 0);
    CHECK(run_cli(args + " --threads 4 --out " + dir4.string(), dir4).exit_code == 0);
    CHECK(read_bytes(dir1 / "residual.json") == read_bytes(dir4 / "residual.json"));
}

TEST_CASE("missing subcommand is a usage error", "[cli]") {
    const fs::path dir = fresh_dir("usage");
    CHECK(run_cli("", dir).exit_code == 2);
    CHECK(run_cli("frobnicate", dir).exit_code == 2);
}
