#include "entroact/skew.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "entroact/errors.hpp"
#include "entroact/parallel.hpp"
#include "entroact/rng.hpp"

namespace entroact::skew {

using spaces::canon_round;

std::size_t required_horizon(int n_max, std::size_t cylinder_len,
                             double eps_min, double shift_base) {
  if (eps_min <= 0.0 || shift_base <= 0.0 || shift_base >= 1.0)
    throw DomainError("horizon needs eps > 0 and shift_base in (0,1)");
  std::size_t extra = 0;
  double power = shift_base;
  while (canon_round(power) > canon_round(eps_min)) {
    ++extra;
    power *= shift_base;
  }
  return static_cast<std::size_t>(n_max) + cylinder_len + extra + 1;
}

SkewPoint skew_apply(const GeneratorSet& g, const SkewPoint& z) {
  if (z.omega.symbols.empty())
    throw CapacityError("symbol horizon exhausted; rebuild with a longer "
                        "sequence");
  const uint8_t head = z.omega.symbols.front();
  if (head < 1 || head > g.p())
    throw DomainError("symbol outside {1,..,p}");
  SkewPoint out;
  out.omega.p = z.omega.p;
  out.omega.symbols.assign(z.omega.symbols.begin() + 1,
                           z.omega.symbols.end());
  out.x = semigroup::apply_map(g.maps()[head - 1], g.space(), z.x);
  return out;
}

double product_distance(const ProductMetricParams& params,
                        const GeneratorSet& g, const SkewPoint& z1,
                        const SkewPoint& z2) {
  if (z1.omega.horizon() != z2.omega.horizon())
    throw DomainError("product distance needs equal horizons");
  double shift_part = 0.0;
  for (std::size_t k = 0; k < z1.omega.symbols.size(); ++k) {
    if (z1.omega.symbols[k] != z2.omega.symbols[k]) {
      shift_part = std::pow(params.shift_base, static_cast<double>(k));
      break;
    }
  }
  return std::max(shift_part, spaces::distance(g.space(), z1.x, z2.x));
}

namespace {

// Number of extra symbols past n that still separate at scale eps:
// shift_base^c > eps >= shift_base^(c+1).
int resolution_depth(double eps, double shift_base) {
  int c = 0;
  double power = shift_base;
  while (canon_round(power) > canon_round(eps)) {
    ++c;
    power *= shift_base;
  }
  return c;
}

std::vector<std::vector<uint8_t>> suffix_pool(const Cylinder& cyl, int p,
                                              std::size_t length,
                                              const SkewGrowthParams& params) {
  // Symbols 1..|cyl| are pinned; the remainder is enumerated when small
  // enough, sampled otherwise.
  if (length < cyl.length()) length = cyl.length();
  const std::size_t free_count = length - cyl.length();
  const double total = std::pow(static_cast<double>(p),
                                static_cast<double>(free_count));
  std::vector<std::vector<uint8_t>> out;
  if (total <= static_cast<double>(params.suffix_budget)) {
    const std::size_t n = static_cast<std::size_t>(total + 0.5);
    std::vector<uint8_t> seq(length, 1);
    std::copy(cyl.prefix.begin(), cyl.prefix.end(), seq.begin());
    for (std::size_t c = 0; c < n; ++c) {
      out.push_back(seq);
      int k = static_cast<int>(length) - 1;
      while (k >= static_cast<int>(cyl.length()) && seq[k] == p) {
        seq[k] = 1;
        --k;
      }
      if (k < static_cast<int>(cyl.length())) break;
      ++seq[k];
    }
  } else {
    if (!params.growth.has_seed)
      throw DomainError("suffix sampling requires a seed");
    auto s = rng::stream(params.growth.seed, rng::tags::kSuffixSampling,
                         length);
    out.reserve(params.suffix_samples);
    for (std::size_t i = 0; i < params.suffix_samples; ++i) {
      std::vector<uint8_t> seq(length);
      std::copy(cyl.prefix.begin(), cyl.prefix.end(), seq.begin());
      for (std::size_t k = cyl.length(); k < length; ++k)
        seq[k] = static_cast<uint8_t>(
            1 + s.bounded((i << 20) | k, static_cast<uint32_t>(p)));
      out.push_back(std::move(seq));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

}  // namespace

std::vector<GrowthSeries> skew_growth_multi(const GeneratorSet& g,
                                            const Cylinder& cyl,
                                            const SampleCloud& cloud,
                                            const std::vector<double>& eps,
                                            const SkewGrowthParams& params) {
  if (eps.empty()) throw DomainError("empty eps schedule");
  for (uint8_t s : cyl.prefix)
    if (s < 1 || s > g.p()) throw DomainError("cylinder symbol outside p");
  if (cloud.empty()) throw DomainError("skew growth over an empty cloud");

  const int p = g.p();
  std::vector<GrowthSeries> out(eps.size());
  for (std::size_t e = 0; e < eps.size(); ++e) {
    out[e].mode = params.growth.mode;
    out[e].epsilon = eps[e];
    out[e].cloud_label = cloud.label() + "-skew";
    out[e].system_name = g.name();
    out[e].mesh = cloud.mesh();
    out[e].lambda = g.max_expansion();
    out[e].seed = params.growth.seed;
    out[e].mesh_guard_flag =
        cloud.mesh() * std::pow(g.max_expansion(), params.growth.n_max) >
        eps[e] / 4.0;
  }

  for (int n = params.growth.n_min; n <= params.growth.n_max; ++n) {
    for (std::size_t e = 0; e < eps.size(); ++e) {
      const double eps_r = canon_round(eps[e]);
      if (eps_r >= 1.0) {
        // Everything within distance <= 1 <= eps: a single point survives.
        entropy::GrowthRow row;
        row.n = n;
        row.mean_count = 1.0;
        row.log_avg = 0.0;
        row.saturated = false;
        out[e].rows.push_back(row);
        continue;
      }
      const int c = resolution_depth(eps[e], params.metric.shift_base);
      const std::size_t prefix_len =
          std::max<std::size_t>(static_cast<std::size_t>(n) + c,
                                cyl.length());
      auto seqs = suffix_pool(cyl, p, prefix_len, params);
      if (!seqs.empty() && seqs.size() > params.suffix_budget)
        throw CapacityError("suffix pool exceeded its budget");

      // Distinct length-n fiber words among the sequences, with bucket
      // multiplicity (sequences sharing the first n symbols share their
      // fiber count).
      std::map<std::vector<uint8_t>, std::size_t> word_multiplicity;
      for (const auto& seq : seqs) {
        std::vector<uint8_t> w(seq.begin(), seq.begin() + n);
        ++word_multiplicity[w];
      }
      std::vector<std::pair<Word, std::size_t>> jobs;
      jobs.reserve(word_multiplicity.size());
      for (auto& [sym, mult] : word_multiplicity) {
        Word w;
        w.indices = sym;
        jobs.emplace_back(std::move(w), mult);
      }
      std::vector<std::size_t> counts(jobs.size(), 0);
      parallel::for_index(
          jobs.size(), params.growth.workers, [&](std::size_t i) {
            if (params.growth.mode == entropy::CountMode::signature) {
              counts[i] = counting::signature_covering_count(
                              cloud, g, jobs[i].first, eps[e])
                              .occupied;
            } else {
              counts[i] = counting::max_separated_greedy(cloud, g,
                                                         jobs[i].first, eps[e])
                              .count;
            }
          });
      double total = 0.0;
      double per_bucket_mean = 0.0;
      std::size_t buckets = 0;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        total += static_cast<double>(counts[i]) *
                 static_cast<double>(jobs[i].second);
        buckets += jobs[i].second;
      }
      per_bucket_mean = total / static_cast<double>(buckets);
      entropy::GrowthRow row;
      row.n = n;
      row.mean_count = total;
      row.log_avg = std::log(total);
      row.saturated =
          per_bucket_mean >= 0.98 * static_cast<double>(cloud.size());
      out[e].rows.push_back(row);
    }
  }
  return out;
}

GrowthSeries skew_growth(const GeneratorSet& g, const Cylinder& cyl,
                         const SampleCloud& cloud, double eps,
                         const SkewGrowthParams& params) {
  return skew_growth_multi(g, cyl, cloud, {eps}, params)[0];
}

SkewCheckReport verify_product_formula(const GeneratorSet& g,
                                       const Cylinder& cyl,
                                       const SampleCloud& cloud,
                                       const std::vector<double>& eps_schedule,
                                       double tol,
                                       const SkewGrowthParams& params) {
  SkewCheckReport rep;
  rep.tol = tol;
  rep.shift_base = params.metric.shift_base;
  {
    Word w;
    w.indices = cyl.prefix;
    rep.cylinder = semigroup::word_literal(w);
  }

  rep.skew_series = skew_growth_multi(g, cyl, cloud, eps_schedule, params);
  rep.h_skew = entropy::estimate_entropy(rep.skew_series).value;

  GrowthParams base = params.growth;
  base.mode = entropy::CountMode::separated;
  rep.base_series = entropy::growth_series_multi(g, cloud, eps_schedule, base);
  rep.h_base = entropy::estimate_entropy(rep.base_series).value;

  rep.log_p = std::log(static_cast<double>(g.p()));
  rep.gap = std::fabs(rep.h_skew - (rep.h_base + rep.log_p));
  rep.pass = rep.gap <= tol;

  // Corollary probe: a handful of cylinder-ball neighborhoods must show
  // positive skew growth.
  std::size_t hits = 0, probes = 0;
  const std::size_t step = std::max<std::size_t>(1, cloud.size() / 4);
  for (std::size_t i = 0; i < cloud.size() && probes < 4; i += step, ++probes) {
    auto ball = spaces::sample_ball(g.space(), cloud.points()[i],
                                    std::max(0.125, 4.0 * cloud.mesh()), 1024);
    Cylinder probe_cyl = cyl;
    SkewGrowthParams probe = params;
    probe.growth.n_min = std::min(params.growth.n_min, 2);
    probe.growth.n_max = std::min(params.growth.n_max, 5);
    auto series =
        skew_growth_multi(g, probe_cyl, ball, {eps_schedule.front()}, probe);
    auto slope = entropy::fit_slope(series[0]);
    if (slope.usable && slope.slope > 0.05) ++hits;
  }
  rep.entropy_point_fraction =
      probes ? static_cast<double>(hits) / static_cast<double>(probes) : 0.0;
  return rep;
}

}  // namespace entroact::skew
