#include <algorithm>
#include <cmath>

#include "entroact/entropy.hpp"
#include "entroact/errors.hpp"
#include "entroact/parallel.hpp"
#include "entroact/rng.hpp"

namespace entroact::entropy {

namespace {

void check_eval_params(const EvalParams& p) {
  if (p.radii.empty()) throw DomainError("radius schedule is empty");
  for (std::size_t i = 0; i + 1 < p.radii.size(); ++i)
    if (!(p.radii[i] > p.radii[i + 1]))
      throw DomainError("radius schedule must be strictly decreasing");
  for (double r : p.radii)
    if (r <= 0.0) throw DomainError("radii must be positive");
}

}  // namespace

EntropyFunctionSample entropy_function_at(const GeneratorSet& g,
                                          const spaces::Point& x,
                                          const EvalParams& params) {
  check_eval_params(params);
  spaces::validate_point(g.space(), x);

  EntropyFunctionSample out;
  out.x = x;
  const std::size_t ne = params.eps_schedule.size();
  out.h_at_eps.assign(ne, std::nullopt);

  for (double r : params.radii) {
    auto ball = spaces::sample_ball(g.space(), x, r, params.resolution);
    auto series = growth_series_multi(g, ball, params.eps_schedule,
                                      params.growth);
    RadiusEval ev;
    ev.radius = r;
    ev.cloud_size = ball.size();
    for (std::size_t e = 0; e < ne; ++e) {
      EpsSlope slope = fit_slope(series[e]);
      ev.slopes.push_back(slope);
      if (slope.usable) {
        if (!out.h_at_eps[e] || slope.slope < *out.h_at_eps[e])
          out.h_at_eps[e] = slope.slope;  // inf over neighborhoods
      }
    }
    for (auto& s : series) out.series.push_back(std::move(s));
    out.per_radius.push_back(std::move(ev));
  }

  // Value at the smallest eps that produced a usable slope.
  bool found = false;
  for (std::size_t e = ne; e-- > 0;) {
    if (out.h_at_eps[e]) {
      out.h_of_x = *out.h_at_eps[e];
      found = true;
      break;
    }
  }
  if (!found)
    throw InsufficientData(
        "no usable slope at any (radius, eps); enlarge the n range or the "
        "radii");
  return out;
}

std::string label_name(PointLabel label) {
  switch (label) {
    case PointLabel::non_entropy:
      return "non-entropy";
    case PointLabel::entropy:
      return "entropy";
    case PointLabel::full_entropy:
      return "full-entropy";
  }
  return "?";
}

std::vector<PointLabel> classify_entropy_points(
    const GeneratorSet& g, const SampleCloud& candidates, double tau,
    double global_estimate, const EvalParams& params) {
  if (tau <= 0.0) throw DomainError("tau must be positive");
  std::vector<PointLabel> labels(candidates.size(), PointLabel::non_entropy);
  std::vector<double> h(candidates.size(), 0.0);
  parallel::for_index(
      candidates.size(), params.growth.workers, [&](std::size_t i) {
        EvalParams local = params;
        local.growth.workers = 1;  // point-level parallelism only
        h[i] = entropy_function_at(g, candidates.points()[i], local).h_of_x;
      });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (h[i] > tau)
      labels[i] = h[i] >= global_estimate - tau ? PointLabel::full_entropy
                                                : PointLabel::entropy;
  }
  return labels;
}

namespace {

// Maximal base-metric separated subset of the cloud at scale `radius`:
// closed balls of that radius about the chosen points cover the cloud.
std::vector<std::size_t> cover_centers(const SampleCloud& cloud,
                                       double radius) {
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool conflict = false;
    for (std::size_t c : centers) {
      if (spaces::canon_round(spaces::distance(
              cloud.space(), cloud.points()[i], cloud.points()[c])) <=
          spaces::canon_round(radius)) {
        conflict = true;
        break;
      }
    }
    if (!conflict) centers.push_back(i);
  }
  return centers;
}

SampleCloud restrict_to_ball(const SampleCloud& cloud,
                             const spaces::Point& center, double radius) {
  std::vector<spaces::Point> pts;
  for (const auto& p : cloud.points())
    if (spaces::canon_round(spaces::distance(cloud.space(), p, center)) <=
        spaces::canon_round(radius))
      pts.push_back(p);
  return SampleCloud(cloud.space(), std::move(pts), cloud.mesh(),
                     cloud.label() + "-ball");
}

}  // namespace

EntropyPointResult find_entropy_point(const GeneratorSet& g,
                                      const SampleCloud& k, int depth,
                                      const EvalParams& params) {
  if (depth < 1) throw DomainError("depth must be >= 1");
  check_eval_params(params);

  auto estimate_cloud = [&](const SampleCloud& cloud) {
    auto series =
        growth_series_multi(g, cloud, params.eps_schedule, params.growth);
    return estimate_entropy(series).value;
  };

  const double whole = estimate_cloud(k);
  if (whole <= 1e-9)
    throw DomainError("find_entropy_point requires positive entropy on K");

  EntropyPointResult result;
  SampleCloud current = k;
  spaces::Point current_center =
      k.points().empty() ? spaces::Point{} : k.points()[0];

  for (int stage = 1; stage <= depth; ++stage) {
    const double radius = 0.5 / stage;  // ball diameter <= 1/stage
    auto centers = cover_centers(current, radius);
    double best = 0.0;
    std::size_t best_c = 0;
    bool first = true;
    for (std::size_t c : centers) {
      auto sub = restrict_to_ball(current, current.points()[c], radius);
      if (sub.size() < 2) continue;
      double est;
      try {
        est = estimate_cloud(sub);
      } catch (const InsufficientData&) {
        continue;
      }
      if (first || est > best) {  // ties resolve to the canonical-first center
        best = est;
        best_c = c;
        first = false;
      }
    }
    if (first) break;  // no refinable ball; keep the current center
    current_center = current.points()[best_c];
    current = restrict_to_ball(current, current_center, radius);
    result.trace.push_back(StageTrace{stage, radius, current_center, best});
    if (stage == 1) result.stage1_estimate = best;
  }
  if (result.trace.empty()) result.stage1_estimate = whole;

  result.point = current_center;
  result.h_of_point = entropy_function_at(g, result.point, params).h_of_x;
  if (std::fabs(result.h_of_point - result.stage1_estimate) > 0.1 + 1e-12)
    throw EntropyPointPostCheckError(
        "returned point's h(x) is not within 0.1 of the stage-1 estimate",
        result.trace);
  return result;
}

SupportCheckReport verify_support_in_entropy_points(
    const GeneratorSet& g, uint64_t orbit_seed, int orbit_length,
    std::size_t samples, double tau, const EvalParams& params) {
  if (orbit_length < 1) throw DomainError("orbit length must be >= 1");
  SupportCheckReport rep;

  auto grid = spaces::sample_grid(g.space(), params.resolution);
  auto series =
      growth_series_multi(g, grid, params.eps_schedule, params.growth);
  rep.global_estimate = estimate_entropy(series).value;
  if (rep.global_estimate <= tau) {
    rep.applicable = false;  // nothing to check on a zero-entropy system
    return rep;
  }
  rep.applicable = true;

  // Random start, uniform i.i.d. generator choices.
  auto stream = rng::stream(orbit_seed, rng::tags::kWalk);
  spaces::Point x;
  const int d = g.space().is_union() ? g.space().branch_dim(0)
                                     : g.space().dim();
  x.branch = 0;
  x.coords.resize(d);
  for (int a = 0; a < d; ++a) x.coords[a] = stream.unit(a);
  x = spaces::canonicalize(g.space(), x);

  std::vector<spaces::Point> orbit;
  orbit.reserve(orbit_length);
  for (int t = 0; t < orbit_length; ++t) {
    const uint32_t gi = stream.bounded(1000 + t, static_cast<uint32_t>(g.p()));
    x = semigroup::apply_map(g.maps()[gi], g.space(), x);
    orbit.push_back(x);
  }

  // Evenly spaced subsample of the occupied orbit.
  std::vector<spaces::Point> support;
  const std::size_t want = std::min<std::size_t>(samples, orbit.size());
  for (std::size_t s = 0; s < want; ++s)
    support.push_back(orbit[s * orbit.size() / want]);
  std::sort(support.begin(), support.end(), spaces::point_less);
  support.erase(std::unique(support.begin(), support.end()), support.end());

  SampleCloud cloud(g.space(), support, grid.mesh(), "walk-support");
  rep.points = cloud.points();
  rep.labels =
      classify_entropy_points(g, cloud, tau, rep.global_estimate, params);
  rep.samples = rep.labels.size();
  std::size_t hits = 0;
  for (auto l : rep.labels)
    if (l != PointLabel::non_entropy) ++hits;
  rep.fraction_entropy =
      rep.samples ? static_cast<double>(hits) / rep.samples : 0.0;
  return rep;
}

}  // namespace entroact::entropy
