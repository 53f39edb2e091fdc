#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroact/growth.hpp"

namespace entroact::skew {

using entropy::GrowthParams;
using entropy::GrowthSeries;
using semigroup::GeneratorSet;
using semigroup::Word;
using spaces::SampleCloud;

/// A truncated element of the one-sided sequence space: the first H symbols
/// over {1,..,p}. Operations that would look past the horizon fail loudly.
struct SymbolSeq {
  std::vector<uint8_t> symbols;
  int p = 1;

  std::size_t horizon() const { return symbols.size(); }
};

/// Minimal horizon that makes every distance/count decision below
/// insensitive to the unseen tail.
std::size_t required_horizon(int n_max, std::size_t cylinder_len,
                             double eps_min, double shift_base);

struct SkewPoint {
  SymbolSeq omega;
  spaces::Point x;
};

struct Cylinder {
  std::vector<uint8_t> prefix;  // may be empty

  std::size_t length() const { return prefix.size(); }
};

/// Shift metric parameters: D(w, w') = shift_base^(k-1) with k the first
/// differing index; the product metric is max(D, d).
struct ProductMetricParams {
  double shift_base = 0.5;
};

/// One step of the step skew-product: shift the symbols, apply the map the
/// first symbol names to the fiber point. Throws CapacityError once the
/// horizon is exhausted.
SkewPoint skew_apply(const GeneratorSet& g, const SkewPoint& z);

double product_distance(const ProductMetricParams& params,
                        const GeneratorSet& g, const SkewPoint& z1,
                        const SkewPoint& z2);

struct SkewGrowthParams {
  GrowthParams growth;                 // n range, seed, workers, mode
  ProductMetricParams metric;
  std::size_t suffix_budget = 4096;    // exhaustive suffixes when within
  std::size_t suffix_samples = 256;    // sampled otherwise
};

/// log of the (n, eps)-separated count of cylinder x cloud under the skew
/// map's Bowen metric, per n. No 1/p^n normalization: this is single-map
/// growth, so the shift contributes its log p to the slope.
///
/// Internally the count decomposes exactly: two skew points conflict only
/// when their symbols agree past the eps-resolution depth, in which case
/// the product Bowen metric reduces to the fiber Bowen metric of the shared
/// length-n word. The count is therefore a sum of fiber counts over symbol
/// buckets (the correspondence is unit-tested against a direct greedy over
/// explicit skew points).
GrowthSeries skew_growth(const GeneratorSet& g, const Cylinder& cyl,
                         const SampleCloud& cloud, double eps,
                         const SkewGrowthParams& params);

std::vector<GrowthSeries> skew_growth_multi(const GeneratorSet& g,
                                            const Cylinder& cyl,
                                            const SampleCloud& cloud,
                                            const std::vector<double>& eps,
                                            const SkewGrowthParams& params);

struct SkewCheckReport {
  double h_skew = 0.0;
  double h_base = 0.0;
  double log_p = 0.0;
  double gap = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string cylinder;
  double shift_base = 0.5;
  // Corollary probe: fraction of sampled skew points whose cylinder-ball
  // neighborhoods show positive growth.
  double entropy_point_fraction = 0.0;
  std::vector<GrowthSeries> skew_series;
  std::vector<GrowthSeries> base_series;
};

/// Estimates both sides of the product identity
/// h(cylinder x K, skew) = h(K) + log p and reports the gap against `tol`.
/// A tolerance violation is a failed report, not an exception.
SkewCheckReport verify_product_formula(const GeneratorSet& g,
                                       const Cylinder& cyl,
                                       const SampleCloud& cloud,
                                       const std::vector<double>& eps_schedule,
                                       double tol,
                                       const SkewGrowthParams& params);

}  // namespace entroact::skew
