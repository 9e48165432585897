#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"

namespace fs = std::filesystem;
using namespace fst;

namespace {

int run_cmd(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string fst_bin() {
    const char* bin = std::getenv("FST_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("fst_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const char* kSmallConfig = R"({
  "asymptotic": {"x_minus_inf": 1.0, "y_minus_inf": -1.0,
                 "u_minus_inf": -0.4, "v_minus_inf": 0.4,
                 "kappa_a": 1.0, "kappa_b": 1.0},
  "solver": {"step": 0.05, "t_end": 0.0, "tol_fix": 1e-9,
             "T_schedule": [-30.0, -60.0], "tol_global": 1.0},
  "diagnostics": {"max_samples_per_member": 120},
  "output": {"directory": "out", "formats": ["csv", "json", "svg"]}
})";

}  // namespace

TEST_CASE("run configs parse with defaults filled in") {
    const cli::RunConfig cfg = cli::parse_run_config(kSmallConfig);
    CHECK(cfg.data.eta1 > 0.0);
    CHECK(cfg.solver.step == 0.05);
    CHECK(cfg.solver.T_schedule.size() == 2);
    CHECK(cfg.solver.damping == 1.0);  // default
    CHECK(cfg.output.svg);
}

TEST_CASE("repository example configs are valid") {
    const char* dir = std::getenv("FST_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    for (const char* name : {"symmetric.json", "asymmetric.json", "free.json"}) {
        const cli::RunConfig cfg =
            cli::load_run_config((fs::path(dir) / name).string());
        CHECK(cfg.solver.step > 0.0);
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    const std::string bad = R"({
      "asymptotic": {"x_minus_inf": 1.0, "y_minus_inf": -1.0,
                     "u_minus_inf": -0.4, "v_minus_inf": 0.4,
                     "kappa_a": 1.0, "kappa_b": 1.0},
      "solver": {"stepp": 0.05}
    })";
    try {
        cli::parse_run_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("solver.stepp") != std::string::npos);
    }
}

TEST_CASE("velocity ordering violations name the constraint") {
    const std::string bad = R"({
      "asymptotic": {"x_minus_inf": 1.0, "y_minus_inf": -1.0,
                     "u_minus_inf": 0.5, "v_minus_inf": -0.4,
                     "kappa_a": 1.0, "kappa_b": 1.0}
    })";
    try {
        cli::parse_run_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("-1 < u < v < 1") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line positions") {
    try {
        cli::parse_run_config("{\n  \"asymptotic\": {\n    oops\n}}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("solve/check/cone round trip through the binary") {
    const fs::path dir = fresh_dir("roundtrip");
    const fs::path cfg = dir / "run.json";
    write(cfg, kSmallConfig);
    const fs::path out = dir / "out";

    REQUIRE(run_cmd(fst_bin() + " solve --config " + cfg.string() + " --out " +
                    out.string()) == 0);
    REQUIRE(fs::exists(out / "trajectory.csv"));
    REQUIRE(fs::exists(out / "convergence.json"));
    CHECK(fs::exists(out / "trajectories.svg"));

    {
        std::ifstream in(out / "convergence.json");
        const nlohmann::json j = nlohmann::json::parse(in);
        CHECK(j.at("schema_version") == 1);
        CHECK(j.at("converged") == true);
        CHECK(j.at("T").size() == 2);
        CHECK(j.at("deltas").size() == 1);
    }
    {
        std::ifstream in(out / "trajectories.svg");
        std::string first;
        std::getline(in, first);
        CHECK(first.rfind("<svg", 0) == 0);
    }

    // full-family check against the emitted manifest
    CHECK(run_cmd(fst_bin() + " check --traj " + (out / "trajectory.csv").string() +
                  " --config " + cfg.string()) == 0);
    CHECK(fs::exists(out / "report.json"));

    // ad-hoc cone query
    CHECK(run_cmd(fst_bin() + " cone --traj " + (out / "trajectory.csv").string() +
                  " --t -10 --sign adv --vertex a") == 0);
    CHECK(run_cmd(fst_bin() + " cone --traj " + (out / "trajectory.csv").string() +
                  " --t -10 --sign sideways --vertex a") == 1);
}

TEST_CASE("corrupted trajectories fail the check") {
    const fs::path dir = fresh_dir("corrupt");
    const fs::path cfg = dir / "run.json";
    write(cfg, kSmallConfig);
    const fs::path out = dir / "out";
    REQUIRE(run_cmd(fst_bin() + " solve --config " + cfg.string() + " --out " +
                    out.string()) == 0);

    // shift every a-velocity in the final CSV
    std::ifstream in(out / "trajectory.csv");
    std::stringstream patched;
    std::string line;
    std::getline(in, line);
    patched << line << "\n";
    while (std::getline(in, line)) {
        std::array<std::string, 5> f;
        std::size_t pos = 0;
        for (int k = 0; k < 5; ++k) {
            const std::size_t comma = line.find(',', pos);
            f[k] = line.substr(pos, comma == std::string::npos
                                        ? std::string::npos
                                        : comma - pos);
            pos = comma + 1;
        }
        const double adot = std::stod(f[2]) + 0.1;
        patched << f[0] << ',' << f[1] << ',' << adot << ',' << f[3] << ','
                << f[4] << "\n";
    }
    in.close();
    // write as a stand-alone CSV so the single-pair subset runs
    const fs::path lone = dir / "patched.csv";
    write(lone, patched.str());
    CHECK(run_cmd(fst_bin() + " check --traj " + lone.string() + " --config " +
                  cfg.string()) != 0);
}

TEST_CASE("non-convergent schedules exit with code 2") {
    const fs::path dir = fresh_dir("exhausted");
    const fs::path cfg = dir / "run.json";
    write(cfg, R"({
      "asymptotic": {"x_minus_inf": 1.0, "y_minus_inf": -1.0,
                     "u_minus_inf": -0.4, "v_minus_inf": 0.4,
                     "kappa_a": 1.0, "kappa_b": 1.0},
      "solver": {"step": 0.05, "T_schedule": [-30.0], "tol_global": 1e-3}
    })");
    CHECK(run_cmd(fst_bin() + " solve --config " + cfg.string() + " --out " +
                  (dir / "out").string()) == 2);
    // outputs are still written for inspection
    CHECK(fs::exists(dir / "out" / "convergence.json"));
}

TEST_CASE("config errors exit with code 1") {
    const fs::path dir = fresh_dir("badcfg");
    const fs::path cfg = dir / "run.json";
    write(cfg, R"({
      "asymptotic": {"x_minus_inf": 1.0, "y_minus_inf": -1.0,
                     "u_minus_inf": 0.5, "v_minus_inf": -0.4,
                     "kappa_a": 1.0, "kappa_b": 1.0}
    })");
    CHECK(run_cmd(fst_bin() + " solve --config " + cfg.string()) == 1);
    CHECK(run_cmd(fst_bin() + " solve --config /nonexistent.json") == 1);
}
