#include "entroact/growth.hpp"

#include <algorithm>
#include <cmath>

#include "entroact/errors.hpp"
#include "entroact/parallel.hpp"

namespace entroact::entropy {

std::string mode_name(CountMode mode) {
  switch (mode) {
    case CountMode::separated:
      return "separated";
    case CountMode::spanning:
      return "spanning";
    case CountMode::signature:
      return "signature";
  }
  return "?";
}

CountMode parse_mode(const std::string& name) {
  if (name == "separated") return CountMode::separated;
  if (name == "spanning") return CountMode::spanning;
  if (name == "signature") return CountMode::signature;
  throw DomainError("unknown count mode: " + name);
}

namespace {

bool words_exhaustive(int p, int n, std::size_t budget) {
  double total = std::pow(static_cast<double>(p), n);
  return total <= static_cast<double>(budget);
}

}  // namespace

std::vector<GrowthSeries> growth_series_multi(
    const GeneratorSet& g, const SampleCloud& cloud,
    const std::vector<double>& eps_schedule, const GrowthParams& params) {
  if (eps_schedule.empty()) throw DomainError("empty eps schedule");
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] > eps_schedule[i + 1]))
      throw DomainError("eps schedule must be strictly decreasing");
  for (double e : eps_schedule)
    if (e <= 0.0) throw DomainError("eps must be positive");
  if (params.n_min < 1 || params.n_max < params.n_min)
    throw DomainError("invalid n range");
  if (cloud.empty()) throw DomainError("growth series over an empty cloud");

  const std::size_t ne = eps_schedule.size();
  std::vector<GrowthSeries> out(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    out[e].mode = params.mode;
    out[e].epsilon = eps_schedule[e];
    out[e].cloud_label = cloud.label();
    out[e].system_name = g.name();
    out[e].mesh = cloud.mesh();
    out[e].lambda = g.max_expansion();
    out[e].seed = params.seed;
    out[e].mesh_guard_flag =
        cloud.mesh() * std::pow(g.max_expansion(), params.n_max) >
        eps_schedule[e] / 4.0;
  }

  const double cloud_size = static_cast<double>(cloud.size());
  for (int n = params.n_min; n <= params.n_max; ++n) {
    const bool exhaustive = words_exhaustive(g.p(), n, params.word_budget);
    std::vector<Word> words;
    if (exhaustive) {
      words = semigroup::enumerate_words(g.p(), n, params.word_budget);
    } else {
      if (!params.has_seed)
        throw DomainError(
            "word sampling required (p^n exceeds word_budget) but no seed "
            "was provided");
      words = semigroup::sample_words(g.p(), n, params.mc_words, params.seed);
    }

    // counts[word][eps], filled independently per word.
    std::vector<std::vector<std::size_t>> counts(
        words.size(), std::vector<std::size_t>(ne, 0));
    parallel::for_index(words.size(), params.workers, [&](std::size_t wi) {
      if (params.mode == CountMode::signature) {
        for (std::size_t e = 0; e < ne; ++e)
          counts[wi][e] = counting::signature_covering_count(
                              cloud, g, words[wi], eps_schedule[e])
                              .occupied;
      } else {
        auto buf = semigroup::compute_orbits(g, words[wi], cloud);
        for (std::size_t e = 0; e < ne; ++e) {
          counts[wi][e] =
              params.mode == CountMode::separated
                  ? counting::max_separated_greedy(buf, eps_schedule[e],
                                                   words[wi])
                        .count
                  : counting::min_spanning_greedy(buf, eps_schedule[e],
                                                  words[wi])
                        .count;
        }
      }
    });

    for (std::size_t e = 0; e < ne; ++e) {
      // Sequential reduction in canonical word order: bit-identical for any
      // worker count.
      double sum = 0.0, sumsq = 0.0;
      for (std::size_t wi = 0; wi < words.size(); ++wi) {
        const double c = static_cast<double>(counts[wi][e]);
        sum += c;
        sumsq += c * c;
      }
      const double mean = sum / static_cast<double>(words.size());
      if (mean <= 0.0)
        throw DomainError("all counts were zero; nothing to average");
      GrowthRow row;
      row.n = n;
      row.mean_count = mean;
      row.log_avg = std::log(mean);
      row.saturated = mean >= 0.98 * cloud_size;
      if (!exhaustive) {
        const double m = static_cast<double>(words.size());
        const double var = std::max(0.0, (sumsq - sum * sum / m) / (m - 1.0));
        row.stderr_log = std::sqrt(var / m) / mean;
      }
      out[e].rows.push_back(row);
      out[e].exhaustive = out[e].exhaustive && exhaustive;
      if (!exhaustive) out[e].mc_words = words.size();
    }
  }
  return out;
}

GrowthSeries growth_series(const GeneratorSet& g, const SampleCloud& cloud,
                           double eps, const GrowthParams& params) {
  return growth_series_multi(g, cloud, {eps}, params)[0];
}

EpsSlope fit_slope(const GrowthSeries& series) {
  EpsSlope out;
  out.epsilon = series.epsilon;

  // Longest contiguous run of non-saturated rows; ties prefer larger n.
  const auto& rows = series.rows;
  int best_lo = -1, best_len = 0;
  int lo = -1;
  for (int i = 0; i <= static_cast<int>(rows.size()); ++i) {
    const bool ok =
        i < static_cast<int>(rows.size()) && !rows[i].saturated;
    if (ok) {
      if (lo < 0) lo = i;
    } else if (lo >= 0) {
      const int len = i - lo;
      if (len >= best_len) {  // >= : later window wins ties
        best_len = len;
        best_lo = lo;
      }
      lo = -1;
    }
  }
  if (best_len < 3) {
    out.usable = false;
    return out;
  }
  out.window_lo = rows[best_lo].n;
  out.window_hi = rows[best_lo + best_len - 1].n;
  out.usable = true;

  bool constant = true;
  for (int i = best_lo + 1; i < best_lo + best_len; ++i)
    if (rows[i].log_avg != rows[best_lo].log_avg) constant = false;
  if (constant) {
    out.slope = 0.0;
    out.residual = 0.0;
    return out;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = best_len;
  for (int i = best_lo; i < best_lo + best_len; ++i) {
    sx += rows[i].n;
    sy += rows[i].log_avg;
    sxx += static_cast<double>(rows[i].n) * rows[i].n;
    sxy += rows[i].n * rows[i].log_avg;
  }
  const double denom = k * sxx - sx * sx;
  out.slope = (k * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope * sx) / k;
  double ss = 0;
  for (int i = best_lo; i < best_lo + best_len; ++i) {
    const double r = rows[i].log_avg - (intercept + out.slope * rows[i].n);
    ss += r * r;
  }
  out.residual = std::sqrt(ss / k);
  return out;
}

EntropyEstimate estimate_entropy(const std::vector<GrowthSeries>& series) {
  if (series.empty()) throw InsufficientData("no growth series to estimate");
  EntropyEstimate est;
  est.mesh = series.front().mesh;
  est.lambda = series.front().lambda;
  bool any = false;
  for (const auto& s : series) {
    est.mesh_guard_flag = est.mesh_guard_flag || s.mesh_guard_flag;
    for (const auto& r : s.rows)
      if (r.saturated) ++est.saturated_rows;
    EpsSlope slope = fit_slope(s);
    est.per_epsilon.push_back(slope);
    if (!slope.usable) continue;
    if (!any || slope.slope > est.value) {
      est.value = slope.slope;
      est.n_window_lo = slope.window_lo;
      est.n_window_hi = slope.window_hi;
    }
    any = true;
  }
  if (!any)
    throw InsufficientData(
        "fewer than 3 non-saturated growth points for every eps");
  return est;
}

}  // namespace entroact::entropy
