#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entroact/counting.hpp"
#include "entroact/semigroup.hpp"

namespace entroact::entropy {

using semigroup::GeneratorSet;
using semigroup::Word;
using spaces::SampleCloud;

enum class CountMode { separated, spanning, signature };

std::string mode_name(CountMode mode);
CountMode parse_mode(const std::string& name);

struct GrowthRow {
  int n = 0;
  double log_avg = 0.0;
  double mean_count = 0.0;
  // Standard error of log_avg (delta method), present for Monte-Carlo rows.
  std::optional<double> stderr_log;
  bool saturated = false;  // mean count within 2% of the cloud size
};

/// Per-n averaged counts for one (cloud, eps, mode), with Monte-Carlo
/// metadata when the word space was sampled rather than enumerated.
struct GrowthSeries {
  std::vector<GrowthRow> rows;
  CountMode mode = CountMode::separated;
  double epsilon = 0.0;
  bool exhaustive = true;       // all n exhaustive over words
  std::size_t mc_words = 0;     // M when sampled
  uint64_t seed = 0;
  std::string cloud_label;
  std::string system_name;
  // Scale guard: cloud.mesh * Lambda^n_max > eps/4 means the finest Bowen
  // scale may fall below the cloud resolution; counts still compute but the
  // series is flagged.
  bool mesh_guard_flag = false;
  double mesh = 0.0;
  double lambda = 0.0;
};

struct GrowthParams {
  int n_min = 1;
  int n_max = 6;
  std::size_t word_budget = 256;  // exhaustive when p^n <= word_budget
  std::size_t mc_words = 64;      // M for Monte-Carlo averaging
  uint64_t seed = 0;
  bool has_seed = false;
  CountMode mode = CountMode::separated;
  int workers = 1;
};

/// The averaged growth series log((1/p^n) sum_w count(w)) for each n (or a
/// Monte-Carlo mean over sampled words). Natural log throughout.
GrowthSeries growth_series(const GeneratorSet& g, const SampleCloud& cloud,
                           double eps, const GrowthParams& params);

/// Multi-eps variant sharing the per-word orbit computation across the
/// schedule; schedule must be strictly decreasing.
std::vector<GrowthSeries> growth_series_multi(
    const GeneratorSet& g, const SampleCloud& cloud,
    const std::vector<double>& eps_schedule, const GrowthParams& params);

struct EpsSlope {
  double epsilon = 0.0;
  double slope = 0.0;
  double residual = 0.0;  // rms residual of the fit
  int window_lo = 0, window_hi = 0;
  bool usable = false;  // >= 3 non-saturated points in the window
};

struct EntropyEstimate {
  std::vector<EpsSlope> per_epsilon;
  double value = 0.0;             // max over usable per-eps slopes
  int n_window_lo = 0, n_window_hi = 0;
  bool mesh_guard_flag = false;
  double mesh = 0.0;
  double lambda = 0.0;
  int saturated_rows = 0;
};

/// Least-squares slope per eps over the longest non-saturated window, then
/// the max over the schedule. A bitwise-constant window yields slope
/// exactly 0. Throws InsufficientData when no eps has 3 usable points.
EntropyEstimate estimate_entropy(const std::vector<GrowthSeries>& series);

/// Fits one series (same rules); used where a single eps is enough.
EpsSlope fit_slope(const GrowthSeries& series);

}  // namespace entroact::entropy
