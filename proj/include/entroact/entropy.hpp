#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entroact/growth.hpp"

namespace entroact::entropy {

/// Shared knobs for every pointwise-entropy evaluation: ball radii, the eps
/// schedule, grid resolution and the growth-series budget.
struct EvalParams {
  std::vector<double> eps_schedule{0.1, 0.05};
  std::vector<double> radii{0.25, 0.125};  // strictly decreasing
  int resolution = 4096;
  GrowthParams growth;  // growth.mode applies to the pointwise series
};

struct RadiusEval {
  double radius = 0.0;
  std::size_t cloud_size = 0;
  std::vector<EpsSlope> slopes;  // one per eps in schedule order
};

/// Pointwise entropy evaluated through shrinking closed balls: per radius a
/// spanning-mode growth series per eps; h(x, eps) is the min slope over the
/// radii, and h(x) the value at the smallest usable eps.
struct EntropyFunctionSample {
  spaces::Point x;
  std::vector<RadiusEval> per_radius;
  // h(x, eps) per schedule entry (min over radii of the usable slopes).
  std::vector<std::optional<double>> h_at_eps;
  double h_of_x = 0.0;
  std::vector<GrowthSeries> series;  // every underlying series, for export
};

EntropyFunctionSample entropy_function_at(const GeneratorSet& g,
                                          const spaces::Point& x,
                                          const EvalParams& params);

enum class PointLabel { non_entropy, entropy, full_entropy };

std::string label_name(PointLabel label);

/// h(x) > tau makes an entropy point; among those, h(x) >= global - tau
/// makes a full entropy point.
std::vector<PointLabel> classify_entropy_points(
    const GeneratorSet& g, const SampleCloud& candidates, double tau,
    double global_estimate, const EvalParams& params);

struct StageTrace {
  int stage = 0;
  double ball_radius = 0.0;
  spaces::Point center;
  double estimate = 0.0;
};

/// Nested-ball refinement: at stage j, covers the current cloud by balls of
/// diameter <= 1/j, recurses into the one maximizing the entropy estimate
/// (ties by canonical order). The returned point's h(x) must land within
/// 0.1 of the stage-1 estimate or a diagnostic error (with the stage trace)
/// is thrown.
struct EntropyPointResult {
  spaces::Point point;
  double h_of_point = 0.0;
  double stage1_estimate = 0.0;
  std::vector<StageTrace> trace;
};

EntropyPointResult find_entropy_point(const GeneratorSet& g,
                                      const SampleCloud& k, int depth,
                                      const EvalParams& params);

/// Error carrying the refinement trace when the post-check fails.
class EntropyPointPostCheckError : public std::runtime_error {
 public:
  EntropyPointPostCheckError(const std::string& what,
                             std::vector<StageTrace> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<StageTrace> trace;
};

// ---------------------------------------------------------------------------
// Katok entropy

struct KatokParams {
  std::vector<double> delta_schedule{0.3, 0.1};  // strictly decreasing
  std::vector<double> eps_schedule{0.2, 0.1};    // strictly decreasing
  enum class Removal { exact, isolation_heuristic, auto_select };
  Removal removal = Removal::auto_select;  // exact within the oracle budget
  std::size_t oracle_budget = counting::kExactOracleBudget;
};

struct KatokCell {
  double eps = 0.0;
  double delta = 0.0;
  EpsSlope slope;                  // slope of log S_nu(n) over the n window
  std::vector<double> mean_counts;  // per n, for the oracle-case tests
  GrowthSeries series;
};

struct KatokResult {
  double value = 0.0;  // slope at the smallest (eps, delta)
  std::vector<KatokCell> table;
};

/// Katok-style metric entropy of a weighted cloud: per word the separated
/// count after discarding the cheapest mass-< delta subset (exact subset
/// search within the oracle budget, isolation heuristic beyond), averaged
/// per n and fitted like any growth series.
KatokResult katok_entropy(const GeneratorSet& g, const SampleCloud& nu,
                          const KatokParams& params,
                          const GrowthParams& growth);

/// The per-word discarded-mass separated count (exposed for the oracle
/// tests). Returns the count and the removed point indices.
std::pair<std::size_t, std::vector<uint32_t>> katok_word_count(
    const GeneratorSet& g, const SampleCloud& nu, const Word& w, double eps,
    double delta, KatokParams::Removal removal, std::size_t oracle_budget);

// ---------------------------------------------------------------------------
// Countable full-entropy sets

struct CountableLevel {
  int m = 0;
  int n = 0;
  double eps_m = 0.0;
  int word_length = 0;
  Word word;
  std::vector<spaces::Point> points;
};

struct LimitAuditEntry {
  double radius = 0.0;
  std::size_t outside = 0;  // emitted points outside B_radius(x0)
};

struct CountableSetArtifact {
  spaces::Point x0;
  std::vector<CountableLevel> levels;
  std::vector<spaces::Point> truncation;  // deduped union plus x0
  std::vector<spaces::Point> limit_points;
  std::vector<LimitAuditEntry> audit;
  double h_x0 = 0.0;
  double reestimate = 0.0;
  std::vector<GrowthSeries> reestimate_series;
};

struct CountableParams {
  int m_max = 3;
  int n_max = 6;
  std::vector<double> eps_candidates{0.2, 0.1, 0.05};
  double tolerance = 0.05;  // slack on the re-estimate post-check
  EvalParams eval;          // pointwise-entropy machinery for h(x0)
};

/// Truncated constructive full-entropy set around x0: per (m, n <= n_max)
/// level, the maximal-separated certificates of every word at scale eps_m
/// inside the ball of radius 1/n about x0, with full provenance. The
/// emitted cloud's entropy re-estimate must reach h(x0) - 1/m_max within
/// the tolerance (post-checked).
CountableSetArtifact countable_full_entropy_set(const GeneratorSet& g,
                                                const spaces::Point& x0,
                                                const CountableParams& params);

/// Sequence mode: one truncated set per x_k confined to B_{r_k}(x_k), plus
/// {x0}; the audited limit-point list is exactly {x0} union {x_k}.
CountableSetArtifact countable_full_entropy_set_sequence(
    const GeneratorSet& g, const spaces::Point& x0,
    const std::vector<spaces::Point>& xs, const std::vector<double>& radii,
    const CountableParams& params);

// ---------------------------------------------------------------------------
// Random-walk support check

struct SupportCheckReport {
  bool applicable = false;
  double global_estimate = 0.0;
  double fraction_entropy = 0.0;
  std::size_t samples = 0;
  std::vector<spaces::Point> points;
  std::vector<PointLabel> labels;
};

/// Iterates a random starting point under uniform i.i.d. generator choices,
/// subsamples the orbit and classifies every support point. Systems whose
/// global estimate is not positive report not-applicable.
SupportCheckReport verify_support_in_entropy_points(
    const GeneratorSet& g, uint64_t orbit_seed, int orbit_length,
    std::size_t samples, double tau, const EvalParams& params);

}  // namespace entroact::entropy
