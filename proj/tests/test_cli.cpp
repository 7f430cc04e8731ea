#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(UOWRELAY_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& leaf) {
    auto dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("scenario listing supports water filters", "[cli]") {
    auto all = run_cli("scenarios");
    REQUIRE(all.exit_code == 0);
    REQUIRE(count_lines(all.out) == 7);
    REQUIRE(all.out.find("salty-severe") != std::string::npos);
    REQUIRE(all.out.find("216.8356") != std::string::npos);

    auto fresh = run_cli("scenarios --water fresh");
    REQUIRE(fresh.exit_code == 0);
    REQUIRE(count_lines(fresh.out) == 4);
    REQUIRE(fresh.out.find("salty") == std::string::npos);

    auto unknown = run_cli("scenarios --water brackish");
    REQUIRE(unknown.exit_code == 0);
    REQUIRE(count_lines(unknown.out) == 1);
}

TEST_CASE("sweeps emit the requested formats with stable arity", "[cli]") {
    auto dir = fresh_dir("uowrelay_cli_sweep");
    auto r = run_cli(
        "sweep --scenario salty-weak --rf rayleigh "
        "--methods closed-form,asymptotic,monte-carlo,quadrature "
        "--trials 65536 --formats csv,json,svg --out " +
        dir.string());
    REQUIRE(r.exit_code == 0);

    auto csv = slurp(dir / "outage-salty-weak-rayleigh.csv");
    REQUIRE(csv.rfind("snr_db,method,value,stderr\n", 0) == 0);
    // 4 methods x 9 grid points + header
    REQUIRE(count_lines(csv) == 37);
    REQUIRE(csv.find("closed-form") != std::string::npos);
    REQUIRE(csv.find("asymptotic") != std::string::npos);
    REQUIRE(csv.find("monte-carlo") != std::string::npos);
    REQUIRE(csv.find("quadrature") != std::string::npos);

    auto json = slurp(dir / "outage-salty-weak-rayleigh.json");
    REQUIRE(json.find("\"metric\": \"outage\"") != std::string::npos);
    auto svg = slurp(dir / "outage-salty-weak-rayleigh.svg");
    REQUIRE(svg.find("<svg") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("identical seeds give byte-identical sweep files", "[cli]") {
    auto d1 = fresh_dir("uowrelay_cli_det1");
    auto d2 = fresh_dir("uowrelay_cli_det2");
    std::string base =
        "sweep --scenario fresh-moderate --rf nakagami:2 --metric outage "
        "--methods monte-carlo --trials 131072 --seed 77 --stop 20 --step 10 ";
    REQUIRE(run_cli(base + "--out " + d1.string()).exit_code == 0);
    REQUIRE(run_cli(base + "--workers 4 --out " + d2.string()).exit_code == 0);
    auto f1 = slurp(d1 / "outage-fresh-moderate-nakagami-2.csv");
    auto f2 = slurp(d2 / "outage-fresh-moderate-nakagami-2.csv");
    REQUIRE(f1 == f2);
    REQUIRE(count_lines(f1) == 4);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("invalid requests exit non-zero without leaving files", "[cli]") {
    auto dir = fresh_dir("uowrelay_cli_err");
    auto bad_method = run_cli("sweep --methods exact --out " + dir.string());
    REQUIRE(bad_method.exit_code != 0);
    auto bad_combo = run_cli(
        "sweep --metric asep --methods asymptotic --out " + dir.string());
    REQUIRE(bad_combo.exit_code != 0);
    auto bad_offset = run_cli(
        "sweep --methods asymptotic --rf-offset 3 --out " + dir.string());
    REQUIRE(bad_offset.exit_code != 0);
    auto bad_capacity = run_cli(
        "sweep --metric capacity --methods closed-form --rf alpha-mu:3:1 --out " +
        dir.string());
    REQUIRE(bad_capacity.exit_code != 0);
    auto bad_scenario = run_cli("sweep --scenario muddy-weak --out " + dir.string());
    REQUIRE(bad_scenario.exit_code != 0);
    auto bad_preset = run_cli("sweep --preset fig9-style --out " + dir.string());
    REQUIRE(bad_preset.exit_code != 0);
    REQUIRE(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST_CASE("config files define scenarios and presets that flags override", "[cli]") {
    auto dir = fresh_dir("uowrelay_cli_cfg");
    auto cfg_path = dir / "cfg.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({
  "out_dir": ")" << dir.string()
            << R"(",
  "scenarios": {
    "tank-test": {"a": 1.1, "b": 1.2, "c": 40.0, "lambda": 0.45, "w": 0.2}
  },
  "presets": {
    "bench": {
      "metric": "outage",
      "scenarios": ["tank-test"],
      "rf": ["rayleigh", "nakagami:2"],
      "snr_stop_db": 10.0,
      "snr_step_db": 5.0,
      "methods": ["closed-form"]
    }
  }
})";
    }
    auto r = run_cli("sweep --config " + cfg_path.string() + " --preset bench");
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(dir / "bench-tank-test-rayleigh.csv"));
    REQUIRE(fs::exists(dir / "bench-tank-test-nakagami-2.csv"));
    auto csv = slurp(dir / "bench-tank-test-rayleigh.csv");
    REQUIRE(count_lines(csv) == 4);

    // A flag overrides the preset's grid.
    auto r2 = run_cli("sweep --config " + cfg_path.string() +
                      " --preset bench --stop 20");
    REQUIRE(r2.exit_code == 0);
    auto csv2 = slurp(dir / "bench-tank-test-rayleigh.csv");
    REQUIRE(count_lines(csv2) == 6);
    fs::remove_all(dir);
}

TEST_CASE("the output directory falls back to the environment", "[cli]") {
    auto dir = fresh_dir("uowrelay_cli_env");
    std::string cmd = std::string("UOWRELAY_OUT_DIR=") + dir.string() + " " +
                      UOWRELAY_CLI_PATH +
                      " sweep --scenario salty-weak --rf rayleigh --stop 10 "
                      "--step 5 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (fread(buf, 1, sizeof buf, pipe) > 0) {
    }
    REQUIRE(WEXITSTATUS(pclose(pipe)) == 0);
    REQUIRE(fs::exists(dir / "outage-salty-weak-rayleigh.csv"));
    fs::remove_all(dir);
}

TEST_CASE("quick validation passes and the sabotage switch trips it", "[cli]") {
    auto ok = run_cli("validate --quick");
    REQUIRE(ok.exit_code == 0);
    REQUIRE(count_lines(ok.out) == 8);
    REQUIRE(ok.out.find("[FAIL]") == std::string::npos);

    auto bad = run_cli("validate --quick --inject-wrong-psi2");
    REQUIRE(bad.exit_code != 0);
    REQUIRE(bad.out.find("[FAIL] 4") != std::string::npos);
}
