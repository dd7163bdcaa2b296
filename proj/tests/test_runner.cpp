#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "riskalloc/runner.hpp"

using namespace riskalloc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "riskalloc_runner" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_scenario(const fs::path& dir, const std::string& body) {
    fs::path path = dir / "scenario.json";
    std::ofstream out(path);
    out << body;
    return path.string();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kPairScenario = R"({
  "lines": [
    {"name": "a", "family": "exponential", "params": {"rate": 1.0}},
    {"name": "b", "family": "exponential", "params": {"rate": 2.0}}
  ],
  "capital": 2.0,
  "indicator": "I",
  "solver": {"name": "bivariate_bisection", "samples": 30000},
  "seed": 7
})";

}  // namespace

TEST_CASE("allocate writes the full artifact set and is byte-stable") {
    fs::path dir = fresh_dir("allocate");
    RunConfig cfg;
    cfg.command = RunConfig::Command::allocate;
    cfg.scenario_path = write_scenario(dir, kPairScenario);
    cfg.output_dir = (dir / "out").string();
    cfg.quiet = true;

    CHECK(run(cfg) == kExitOk);
    CHECK(fs::exists(dir / "out" / "allocation.csv"));
    CHECK(fs::exists(dir / "out" / "trace.csv"));
    CHECK(fs::exists(dir / "out" / "diagnostics.json"));

    std::string first = slurp(dir / "out" / "allocation.csv");
    CHECK(first.rfind("line,share,fraction\n", 0) == 0);
    CHECK(first.find("a,") != std::string::npos);

    cfg.output_dir = (dir / "out2").string();
    CHECK(run(cfg) == kExitOk);
    CHECK(slurp(dir / "out2" / "allocation.csv") == first);
    CHECK(slurp(dir / "out2" / "diagnostics.json") == slurp(dir / "out" / "diagnostics.json"));
}

TEST_CASE("allocate exits 2 when the optimum sits on the boundary") {
    fs::path dir = fresh_dir("boundary");
    RunConfig cfg;
    cfg.command = RunConfig::Command::allocate;
    cfg.scenario_path = write_scenario(dir, R"({
      "lines": [
        {"name": "riskless", "family": "deterministic", "params": {"c": 0.0}},
        {"name": "risky", "family": "exponential", "params": {"rate": 1.0}}
      ],
      "capital": 1.0,
      "solver": {"name": "grid_oracle", "samples": 20000, "resolution": 0.02},
      "seed": 3
    })");
    cfg.output_dir = (dir / "out").string();
    cfg.quiet = true;
    CHECK(run(cfg) == kExitFlagged);
    std::string diag = slurp(dir / "out" / "diagnostics.json");
    CHECK(diag.find("\"boundary_optimum\": true") != std::string::npos);
}

TEST_CASE("invalid scenarios exit 1 and leave no partial outputs") {
    fs::path dir = fresh_dir("invalid");
    RunConfig cfg;
    cfg.command = RunConfig::Command::allocate;
    cfg.scenario_path = write_scenario(dir, R"({
      "lines": [{"family": "exponential", "params": {"rate": -1.0}}],
      "capital": 1.0
    })");
    cfg.output_dir = (dir / "out").string();
    cfg.quiet = true;
    CHECK(run(cfg) == kExitError);
    CHECK_FALSE(fs::exists(dir / "out" / "allocation.csv"));
    CHECK_FALSE(fs::exists(dir / "out" / "trace.csv"));
}

TEST_CASE("seed and solver overrides change the run") {
    fs::path dir = fresh_dir("override");
    RunConfig cfg;
    cfg.command = RunConfig::Command::allocate;
    cfg.scenario_path = write_scenario(dir, kPairScenario);
    cfg.output_dir = (dir / "out").string();
    cfg.quiet = true;
    cfg.seed_override = 1234;
    cfg.solver_override = "grid_oracle";
    CHECK(run(cfg) == kExitOk);
    std::string diag = slurp(dir / "out" / "diagnostics.json");
    CHECK(diag.find("\"solver\": \"grid_oracle\"") != std::string::npos);
    CHECK(diag.find("\"seed\": 1234") != std::string::npos);
}

TEST_CASE("compare ranks each optimizer first on its own indicator") {
    fs::path dir = fresh_dir("compare");
    RunConfig cfg;
    cfg.command = RunConfig::Command::compare;
    cfg.scenario_path = write_scenario(dir, R"({
      "lines": [
        {"name": "light", "family": "exponential", "params": {"rate": 2.0}},
        {"name": "heavy", "family": "exponential", "params": {"rate": 0.8}}
      ],
      "capital": 2.0,
      "solver": {"name": "bivariate_bisection", "samples": 40000},
      "seed": 21
    })");
    cfg.output_dir = (dir / "out").string();
    cfg.quiet = true;
    CHECK(run(cfg) == kExitOk);

    std::ifstream csv(dir / "out" / "compare.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "method,light,heavy,I_value,I_std_error,J_value,J_std_error");
    struct Row {
        std::string method;
        double i = 0, j = 0;
    };
    std::vector<Row> rows;
    std::string line;
    while (std::getline(csv, line)) {
        Row row;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, row.method, ',');
        for (int skip = 0; skip < 2; ++skip) std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        row.i = std::stod(cell);
        std::getline(ss, cell, ',');  // I se
        std::getline(ss, cell, ',');
        row.j = std::stod(cell);
        rows.push_back(row);
    }
    REQUIRE(rows.size() == 3);
    double best_i = std::min({rows[0].i, rows[1].i, rows[2].i});
    double best_j = std::min({rows[0].j, rows[1].j, rows[2].j});
    CHECK(rows[0].method == "optimal_I");
    CHECK(rows[0].i <= best_i + 1e-12);
    CHECK(rows[1].method == "optimal_J");
    CHECK(rows[1].j <= best_j + 1e-12);
}

TEST_CASE("coherence filter restricts the report to one property") {
    fs::path dir = fresh_dir("coherence_filter");
    RunConfig cfg;
    cfg.command = RunConfig::Command::coherence;
    cfg.output_dir = (dir / "out").string();
    cfg.property_filter = "monotonicity";
    cfg.quiet = true;
    int code = run(cfg);
    CHECK(code == kExitOk);
    std::ifstream csv(dir / "out" / "coherence.csv");
    std::string line;
    std::getline(csv, line);  // header
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        CHECK(line.rfind("monotonicity,", 0) == 0);
        ++rows;
    }
    CHECK(rows >= 2);
}

TEST_CASE("unknown property filter is an error exit") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::coherence;
    cfg.output_dir = (fresh_dir("badfilter") / "out").string();
    cfg.property_filter = "telepathy";
    cfg.quiet = true;
    CHECK(run(cfg) == kExitError);
}

TEST_CASE("property failures map to exit 3, evidence and skips do not") {
    PropertyReport ok;
    ok.passed = true;
    PropertyReport failed;
    failed.passed = false;
    PropertyReport skipped;
    skipped.skipped = true;
    PropertyReport evidence;
    evidence.evidence_only = true;
    CHECK(coherence_exit_code({ok, skipped, evidence}) == kExitOk);
    CHECK(coherence_exit_code({ok, failed}) == kExitPropertyFailures);
}
