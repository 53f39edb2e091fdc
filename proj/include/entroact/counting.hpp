#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroact/semigroup.hpp"
#include "entroact/space.hpp"

namespace entroact::counting {

using semigroup::GeneratorSet;
using semigroup::OrbitBuffer;
using semigroup::Word;
using spaces::SampleCloud;

/// Outcome of a separated/spanning computation. Certificates index into the
/// cloud's canonical point order and can be re-verified against the stated
/// property (pairwise > eps apart, or covering within < eps).
struct PackingResult {
  enum class Method { greedy, exact, signature };

  std::size_t count = 0;
  std::vector<uint32_t> certificate;
  Method method = Method::greedy;
  double epsilon = 0.0;
  Word word;
};

/// Distinct quantized-orbit cell count at one cell width. A slope-only
/// instrument: per-instance comparisons against exact covering numbers are
/// deliberately not claimed.
struct CellSignatureTable {
  double cell_width = 0.0;
  std::size_t occupied = 0;
  std::vector<uint32_t> populations;  // per occupied cell, insertion order
};

// Bowen-metric comparisons on an orbit buffer, with the canonical 1e-15
// rounding applied to both sides so greedy scans and oracles agree on ties.
bool bowen_leq(const OrbitBuffer& buf, std::size_t a, std::size_t b,
               double eps);
bool bowen_lt(const OrbitBuffer& buf, std::size_t a, std::size_t b,
              double eps);
double bowen_value(const OrbitBuffer& buf, std::size_t a, std::size_t b);

/// Canonical-order greedy scan keeping a point iff it is > eps from every
/// kept point in the word's Bowen metric. The result is maximal, hence its
/// count lies in [b_exact, s_exact] and the kept set covers the cloud
/// within <= eps.
PackingResult max_separated_greedy(const OrbitBuffer& buf, double eps,
                                   Word word = {});
PackingResult max_separated_greedy(const SampleCloud& cloud,
                                   const GeneratorSet& g, const Word& w,
                                   double eps);

/// Greedy set cover by open eps-balls (largest uncovered gain first, ties
/// by canonical order). Valid spanning set; count in
/// [b_exact, b_exact*(1+ln m)].
PackingResult min_spanning_greedy(const OrbitBuffer& buf, double eps,
                                  Word word = {});
PackingResult min_spanning_greedy(const SampleCloud& cloud,
                                  const GeneratorSet& g, const Word& w,
                                  double eps);

inline constexpr std::size_t kExactOracleBudget = 24;

/// Exact maximum-cardinality eps-separated subset via branch-and-bound on
/// the conflict graph. Requires |cloud| <= budget.
PackingResult exact_packing(const OrbitBuffer& buf, double eps, Word word = {},
                            std::size_t budget = kExactOracleBudget);
PackingResult exact_packing(const SampleCloud& cloud, const GeneratorSet& g,
                            const Word& w, double eps,
                            std::size_t budget = kExactOracleBudget);

/// Exact minimum cover of the cloud by open eps-balls centered at cloud
/// points. Requires |cloud| <= budget.
PackingResult exact_covering(const OrbitBuffer& buf, double eps,
                             Word word = {},
                             std::size_t budget = kExactOracleBudget);
PackingResult exact_covering(const SampleCloud& cloud, const GeneratorSet& g,
                             const Word& w, double eps,
                             std::size_t budget = kExactOracleBudget);

/// Quantizes every Bowen-prefix image to axis-aligned cells of the given
/// width and counts distinct full signatures. O(|cloud| * |w|), hash based,
/// exact (keys are compared in full, collisions only cost time).
CellSignatureTable signature_covering_count(const SampleCloud& cloud,
                                            const GeneratorSet& g,
                                            const Word& w, double cell_width,
                                            bool keep_populations = false);

struct SandwichReport {
  std::size_t b_exact = 0;
  std::size_t s_exact = 0;
  std::size_t b_half_exact = 0;
  std::size_t greedy_sep = 0;
  std::size_t greedy_span = 0;
  double epsilon = 0.0;
  Word word;
};

/// Exact b(eps) <= s(eps) <= b(eps/2) plus the greedy bracket checks;
/// throws InvariantViolation on any violated inequality.
SandwichReport sandwich_audit(const SampleCloud& cloud, const GeneratorSet& g,
                              const Word& w, double eps,
                              std::size_t budget = kExactOracleBudget);

/// Verifies a certificate against its defining property (used by tests and
/// the audit suites).
bool certificate_is_separated(const OrbitBuffer& buf,
                              const std::vector<uint32_t>& cert, double eps);
bool certificate_covers(const OrbitBuffer& buf,
                        const std::vector<uint32_t>& cert, double eps,
                        bool strict);

}  // namespace entroact::counting
