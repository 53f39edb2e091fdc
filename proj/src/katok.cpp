#include <algorithm>
#include <cmath>
#include <numeric>

#include "entroact/entropy.hpp"
#include "entroact/errors.hpp"
#include "entroact/parallel.hpp"

namespace entroact::entropy {

namespace {

using counting::PackingResult;
using semigroup::OrbitBuffer;

// Exact inf over removal subsets of mass < delta: only maximal removal sets
// can attain the inf (dropping more points never raises the packing), so
// the search enumerates subsets no superset of which stays under delta.
struct ExactRemoval {
  const OrbitBuffer& buf;
  const std::vector<double>& weights;
  double delta;
  double eps;
  std::size_t best;
  std::vector<uint32_t> best_removed;

  void rec(std::size_t next, double removed_mass,
           std::vector<uint32_t>& removed) {
    bool maximal = true;
    for (std::size_t i = next; i < buf.count; ++i) {
      if (removed_mass + weights[i] < delta) {
        maximal = false;
        removed.push_back(static_cast<uint32_t>(i));
        rec(i + 1, removed_mass + weights[i], removed);
        removed.pop_back();
      }
    }
    // Also treat the current set as a candidate when no point before
    // `next` could extend it either (those were already enumerated).
    if (!maximal) return;
    std::vector<uint32_t> keep;
    keep.reserve(buf.count - removed.size());
    std::size_t r = 0;
    for (std::size_t i = 0; i < buf.count; ++i) {
      if (r < removed.size() && removed[r] == i) {
        ++r;
        continue;
      }
      keep.push_back(static_cast<uint32_t>(i));
    }
    const std::size_t s = packing_on(keep);
    if (s < best) {
      best = s;
      best_removed = removed;
    }
  }

  std::size_t packing_on(const std::vector<uint32_t>& keep) const {
    // Greedy-free exact packing restricted to `keep`.
    std::vector<uint64_t> conflicts(keep.size(), 0);
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = a + 1; b < keep.size(); ++b)
        if (counting::bowen_leq(buf, keep[a], keep[b], eps)) {
          conflicts[a] |= 1ULL << b;
          conflicts[b] |= 1ULL << a;
        }
    std::size_t best_sz = 0;
    struct Search {
      const std::vector<uint64_t>& conf;
      std::size_t best = 0;
      void rec(uint64_t cand, int size) {
        if (size + __builtin_popcountll(cand) <= static_cast<int>(best))
          return;
        if (cand == 0) {
          best = std::max<std::size_t>(best, size);
          return;
        }
        const int v = __builtin_ctzll(cand);
        rec(cand & ~(conf[v] | (1ULL << v)), size + 1);
        rec(cand & ~(1ULL << v), size);
      }
    } search{conflicts};
    search.rec(keep.size() == 64 ? ~0ULL : ((1ULL << keep.size()) - 1), 0);
    best_sz = search.best;
    return best_sz;
  }
};

}  // namespace

std::pair<std::size_t, std::vector<uint32_t>> katok_word_count(
    const GeneratorSet& g, const SampleCloud& nu, const Word& w, double eps,
    double delta, KatokParams::Removal removal, std::size_t oracle_budget) {
  if (delta <= 0.0 || delta >= 1.0)
    throw DomainError("delta must lie in (0,1)");
  if (nu.empty()) throw DomainError("katok entropy over an empty cloud");
  auto buf = semigroup::compute_orbits(g, w, nu);

  const bool exact =
      removal == KatokParams::Removal::exact ||
      (removal == KatokParams::Removal::auto_select &&
       nu.size() <= oracle_budget);
  if (exact && nu.size() > oracle_budget)
    throw CapacityError("exact Katok removal exceeds the oracle budget");

  if (exact) {
    ExactRemoval search{buf,
                        nu.weights(),
                        delta,
                        eps,
                        counting::exact_packing(buf, eps, w, oracle_budget)
                            .count,
                        {}};
    std::vector<uint32_t> removed;
    search.rec(0, 0.0, removed);
    return {search.best, search.best_removed};
  }

  // Isolation heuristic: repeatedly drop the point with the largest
  // Bowen-metric distance to its nearest remaining neighbor (isolated
  // points force packings), while the removed mass stays under delta.
  std::vector<uint8_t> alive(nu.size(), 1);
  std::vector<uint32_t> removed;
  double removed_mass = 0.0;
  std::vector<double> nn(nu.size(),
                         std::numeric_limits<double>::infinity());
  std::vector<int32_t> nn_id(nu.size(), -1);
  auto recompute = [&](std::size_t i) {
    nn[i] = std::numeric_limits<double>::infinity();
    nn_id[i] = -1;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (j == i || !alive[j]) continue;
      const double d = counting::bowen_value(buf, i, j);
      if (d < nn[i]) {
        nn[i] = d;
        nn_id[i] = static_cast<int32_t>(j);
      }
    }
  };
  for (std::size_t i = 0; i < nu.size(); ++i) recompute(i);

  while (true) {
    std::size_t pick = nu.size();
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if (!alive[i]) continue;
      if (removed_mass + nu.weights()[i] >= delta) continue;
      if (pick == nu.size() || nn[i] > nn[pick]) pick = i;
    }
    if (pick == nu.size()) break;
    alive[pick] = 0;
    removed_mass += nu.weights()[pick];
    removed.push_back(static_cast<uint32_t>(pick));
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (alive[i] && nn_id[i] == static_cast<int32_t>(pick)) recompute(i);
  }

  // Pack the surviving points (greedy maximality is not enough here: the
  // count must be the exact max on small instances and an upper-bracketed
  // greedy beyond).
  std::vector<spaces::Point> pts;
  for (std::size_t i = 0; i < nu.size(); ++i)
    if (alive[i]) pts.push_back(nu.points()[i]);
  SampleCloud rest(nu.space(), std::move(pts), nu.mesh(), nu.label());
  const auto res =
      rest.size() <= oracle_budget
          ? counting::exact_packing(rest, g, w, eps, oracle_budget)
          : counting::max_separated_greedy(rest, g, w, eps);
  std::sort(removed.begin(), removed.end());
  return {res.count, removed};
}

KatokResult katok_entropy(const GeneratorSet& g, const SampleCloud& nu,
                          const KatokParams& params,
                          const GrowthParams& growth) {
  for (double d : params.delta_schedule)
    if (d <= 0.0 || d >= 1.0) throw DomainError("delta must lie in (0,1)");
  for (std::size_t i = 0; i + 1 < params.delta_schedule.size(); ++i)
    if (!(params.delta_schedule[i] > params.delta_schedule[i + 1]))
      throw DomainError("delta schedule must be strictly decreasing");
  for (std::size_t i = 0; i + 1 < params.eps_schedule.size(); ++i)
    if (!(params.eps_schedule[i] > params.eps_schedule[i + 1]))
      throw DomainError("eps schedule must be strictly decreasing");
  if (nu.empty()) throw DomainError("katok entropy over an empty cloud");

  KatokResult out;
  for (double delta : params.delta_schedule) {
    for (double eps : params.eps_schedule) {
      KatokCell cell;
      cell.eps = eps;
      cell.delta = delta;
      GrowthSeries series;
      series.mode = CountMode::separated;
      series.epsilon = eps;
      series.cloud_label = nu.label();
      series.system_name = g.name();
      series.mesh = nu.mesh();
      series.lambda = g.max_expansion();
      for (int n = growth.n_min; n <= growth.n_max; ++n) {
        std::vector<Word> words;
        const double total = std::pow(static_cast<double>(g.p()), n);
        if (total <= static_cast<double>(growth.word_budget)) {
          words = semigroup::enumerate_words(g.p(), n, growth.word_budget);
        } else {
          if (!growth.has_seed)
            throw DomainError("word sampling requires a seed");
          words =
              semigroup::sample_words(g.p(), n, growth.mc_words, growth.seed);
        }
        std::vector<std::size_t> counts(words.size(), 0);
        parallel::for_index(words.size(), growth.workers, [&](std::size_t wi) {
          counts[wi] = katok_word_count(g, nu, words[wi], eps, delta,
                                        params.removal, params.oracle_budget)
                           .first;
        });
        double sum = 0.0;
        for (std::size_t c : counts) sum += static_cast<double>(c);
        const double mean = sum / static_cast<double>(words.size());
        GrowthRow row;
        row.n = n;
        row.mean_count = mean;
        row.log_avg = std::log(std::max(mean, 1e-300));
        row.saturated = mean >= 0.98 * static_cast<double>(nu.size());
        series.rows.push_back(row);
        cell.mean_counts.push_back(mean);
      }
      cell.slope = fit_slope(series);
      cell.series = std::move(series);
      out.table.push_back(std::move(cell));
    }
  }
  // Reported value: smallest (delta, eps) of the schedule, i.e. the last
  // cell in schedule order.
  for (const auto& cell : out.table)
    if (cell.slope.usable) out.value = cell.slope.slope;
  return out;
}

}  // namespace entroact::entropy
