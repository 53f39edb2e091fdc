#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entroact/cli.hpp"
#include "entroact/errors.hpp"

using namespace entroact;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "entroact-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json base_config() {
  return json{{"system", "rotations"},
              {"command", "entropy"},
              {"resolution", 256},
              {"epsilon_schedule", {0.2, 0.1}},
              {"n_range", {2, 5}},
              {"word_budget", 64},
              {"seed", 7},
              {"workers", 1}};
}

json run_and_load(json cfg, const std::string& dirname, int expect_exit) {
  auto dir = fresh_dir(dirname);
  cfg["output_dir"] = dir.string();
  auto config = cli::parse_config(cfg);
  CHECK(cli::run(config) == expect_exit);
  return json::parse(slurp(dir / "result.json"));
}

}  // namespace

TEST_CASE("entropy command on the isometry control") {
  auto result = run_and_load(base_config(), "rot-entropy", 0);
  CHECK(result.at("estimate").at("value").get<double>() <= 0.05);
  CHECK(result.at("command") == "entropy");
  CHECK(result.at("seed") == 7);
  CHECK(result.at("config_hash").get<std::string>().size() == 16);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
  auto cfg = base_config();
  cfg["system"] = "expanding23";
  cfg["resolution"] = 512;

  std::vector<std::string> results, series, plots;
  int round = 0;
  for (int workers : {1, 2, 8, 1}) {
    cfg["workers"] = workers;
    auto dir = fresh_dir("det-" + std::to_string(round++));
    cfg["output_dir"] = dir.string();
    REQUIRE(cli::run(cli::parse_config(cfg)) == 0);
    results.push_back(slurp(dir / "result.json"));
    series.push_back(slurp(dir / "series.csv"));
    plots.push_back(slurp(dir / "plot.csv"));
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    REQUIRE(results[i] == results[0]);
    REQUIRE(series[i] == series[0]);
    REQUIRE(plots[i] == plots[0]);
  }
}

TEST_CASE("plot rows are grouped by epsilon descending, n ascending") {
  auto cfg = base_config();
  auto dir = fresh_dir("plot-sort");
  cfg["output_dir"] = dir.string();
  REQUIRE(cli::run(cli::parse_config(cfg)) == 0);
  std::istringstream in(slurp(dir / "plot.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "epsilon,n,log_avg,stderr,mode");
  double prev_eps = 1e9;
  int prev_n = -1;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string eps_s, n_s;
    std::getline(row, eps_s, ',');
    std::getline(row, n_s, ',');
    const double eps = std::stod(eps_s);
    const int n = std::stoi(n_s);
    if (eps != prev_eps) {
      CHECK(eps < prev_eps);
      prev_n = -1;
    }
    CHECK(n > prev_n);
    prev_eps = eps;
    prev_n = n;
  }
}

TEST_CASE("monte carlo runs populate the stderr column") {
  auto cfg = base_config();
  cfg["system"] = "expanding23";
  cfg["resolution"] = 4096;
  cfg["n_range"] = {6, 9};
  cfg["word_budget"] = 64;  // 2^7 = 128 > 64: n >= 7 samples words
  cfg["M"] = 32;
  auto dir = fresh_dir("mc");
  cfg["output_dir"] = dir.string();
  REQUIRE(cli::run(cli::parse_config(cfg)) == 0);
  std::istringstream in(slurp(dir / "series.csv"));
  std::string line;
  std::getline(in, line);
  bool saw_stderr = false;
  while (std::getline(in, line)) {
    // stderr is the 7th column
    std::istringstream row(line);
    std::string f;
    for (int i = 0; i < 7; ++i) std::getline(row, f, ',');
    if (!f.empty()) saw_stderr = true;
  }
  CHECK(saw_stderr);

  SUBCASE("the same run without a seed is rejected") {
    cfg.erase("seed");
    auto config = cli::parse_config(cfg);
    CHECK_THROWS_AS(cli::run(config), DomainError);
  }
}

TEST_CASE("schema violations carry field paths") {
  auto cfg = base_config();
  cfg.erase("command");
  CHECK_THROWS_WITH_AS(cli::parse_config(cfg),
                       doctest::Contains("config.command"), DomainError);

  cfg = base_config();
  cfg["epsilon_schedule"] = {0.1, 0.2};
  CHECK_THROWS_WITH_AS(cli::parse_config(cfg),
                       doctest::Contains("epsilon_schedule"), DomainError);

  cfg = base_config();
  cfg["n_range"] = {4};
  CHECK_THROWS_WITH_AS(cli::parse_config(cfg), doctest::Contains("n_range"),
                       DomainError);

  cfg = base_config();
  cfg["command"] = "frobnicate";
  CHECK_THROWS_WITH_AS(cli::run(cli::parse_config(cfg)),
                       doctest::Contains("unknown command"), DomainError);
}

TEST_CASE("capacity errors carry a remediation hint") {
  auto cfg = base_config();
  cfg["resolution"] = 1 << 23;
  try {
    cli::run(cli::parse_config(cfg));
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("skew-check passes on the rotations control") {
  json cfg{{"system", "rotations"},  {"command", "skew-check"},
           {"resolution", 256},      {"epsilon_schedule", {0.2, 0.1}},
           {"n_range", {2, 6}},      {"word_budget", 64},
           {"seed", 7},              {"tol", 0.1},
           {"workers", 2}};
  auto result = run_and_load(cfg, "skew-rot", 0);
  CHECK(result.at("pass") == true);
  CHECK(result.at("gap").get<double>() <= 0.1);
  CHECK(result.at("log_p").get<double>() == doctest::Approx(std::log(2.0)));
}

TEST_CASE("sandwich-audit emits clean rows") {
  json cfg{{"system", "expanding23"}, {"command", "sandwich-audit"},
           {"instances", 40},         {"cloud_max", 10},
           {"seed", 13},              {"workers", 1}};
  auto dir = fresh_dir("audit");
  cfg["output_dir"] = dir.string();
  REQUIRE(cli::run(cli::parse_config(cfg)) == 0);
  auto result = json::parse(slurp(dir / "result.json"));
  CHECK(result.at("violations") == 0);
  std::istringstream in(slurp(dir / "audit.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "word,epsilon,b_exact,s_exact,b_half_exact,greedy_sep,greedy_span,"
        "method");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 40);
}

TEST_CASE("support-check on rotations reports not applicable") {
  json cfg{{"system", "rotations"},  {"command", "support-check"},
           {"resolution", 256},      {"epsilon_schedule", {0.2, 0.1}},
           {"n_range", {2, 5}},      {"word_budget", 64},
           {"seed", 3},              {"samples", 4},
           {"orbit_length", 128},    {"workers", 1}};
  auto result = run_and_load(cfg, "support-rot", 0);
  CHECK(result.at("applicable") == false);
}

TEST_CASE("entropy-function command") {
  json cfg{{"system", "rotations"},
           {"command", "entropy-function"},
           {"resolution", 256},
           {"epsilon_schedule", {0.2, 0.1}},
           {"radii", {0.25, 0.125}},
           {"n_range", {2, 5}},
           {"word_budget", 64},
           {"point", {0.3}},
           {"seed", 7},
           {"workers", 1}};
  auto result = run_and_load(cfg, "hfun-rot", 0);
  CHECK(result.at("h_of_x").get<double>() == 0.0);
  CHECK(result.at("per_radius").size() == 2);
}

TEST_CASE("env seed override is logged") {
  auto cfg = base_config();
  auto dir = fresh_dir("env-seed");
  cfg["output_dir"] = dir.string();
  const fs::path cfg_path = dir / "cfg.json";
  {
    std::ofstream out(cfg_path);
    out << cfg.dump();
  }
  setenv("ENTROACT_SEED", "99", 1);
  auto config = cli::load_config_file(cfg_path.string());
  unsetenv("ENTROACT_SEED");
  CHECK(config.seed == 99);
  CHECK(config.seed_source == "env");
}
