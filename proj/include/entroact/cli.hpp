#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "entroact/catalog.hpp"
#include "entroact/entropy.hpp"
#include "entroact/skew.hpp"

#include <json.hpp>

namespace entroact::cli {

/// One batch run: a system, a command, and the numeric schedule. Loaded
/// from a single JSON config; see README for the schema. Every run writes
/// result.json, series.csv and plot.csv into the output directory.
struct RunConfig {
  catalog::SystemSpec system;
  std::string command;
  int resolution = 4096;
  std::vector<double> eps_schedule{0.2, 0.1};
  int n_min = 2, n_max = 6;
  std::size_t word_budget = 256;
  std::size_t mc_words = 64;
  bool has_seed = false;
  uint64_t seed = 0;
  std::string seed_source = "config";
  double tau = 0.05;
  std::vector<double> delta_schedule{0.3, 0.1};
  std::vector<double> radii{0.25, 0.125};
  std::string output_dir = "out";
  int workers = 1;
  std::string mode = "separated";

  // Command-specific knobs (ignored elsewhere).
  double tol = 0.15;
  std::string cylinder;         // skew-check: word literal
  double shift_base = 0.5;
  std::size_t suffix_budget = 4096;
  std::size_t suffix_samples = 256;
  std::vector<double> point;    // entropy-function / countable-set x0
  int m_max = 3, n_max_levels = 6;
  int candidates = 16;          // entropy-points candidate grid resolution
  int orbit_length = 2048;      // support-check
  int samples = 64;
  int depth = 3;                // find-entropy-point stages
  int instances = 200;          // sandwich-audit
  int cloud_max = 14;
  nlohmann::json raw;           // the config as given (hashed into reports)
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

/// FNV-1a of the canonical (sorted-key) config dump; stamped on every row.
std::string config_hash(const nlohmann::json& j);

/// Executes the command and writes the artifacts. Returns the process exit
/// status: 0 success, 2 a verification check failed numerically, 1 error
/// (the caller reports the message).
int run(const RunConfig& config);

}  // namespace entroact::cli
