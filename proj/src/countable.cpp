#include <algorithm>
#include <cmath>
#include <set>

#include "entroact/entropy.hpp"
#include "entroact/errors.hpp"

namespace entroact::entropy {

namespace {

// Separated-mode slope of a ball cloud at one eps; not usable -> nullopt.
std::optional<double> ball_slope(const GeneratorSet& g,
                                 const SampleCloud& ball, double eps,
                                 const GrowthParams& growth) {
  try {
    GrowthSeries s = growth_series(g, ball, eps, growth);
    EpsSlope slope = fit_slope(s);
    if (!slope.usable) return std::nullopt;
    return slope.slope;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::vector<spaces::Point> dedupe_points(std::vector<spaces::Point> pts) {
  std::sort(pts.begin(), pts.end(), spaces::point_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

struct LevelBuild {
  std::vector<CountableLevel> levels;
  std::vector<spaces::Point> points;
};

// The per-x0 truncated construction; ball radii are additionally capped by
// `radius_cap` (sequence mode confines each set near its anchor).
LevelBuild build_levels(const GeneratorSet& g, const spaces::Point& x0,
                        double h_x0, const CountableParams& params,
                        double radius_cap) {
  LevelBuild out;
  for (int m = 1; m <= params.m_max; ++m) {
    const double target = h_x0 - 1.0 / m;

    // eps_m: the largest schedule entry whose ball slopes clear the target
    // for every tested n; falls back to the smallest entry.
    double eps_m = params.eval.eps_schedule.empty()
                       ? 0.1
                       : params.eval.eps_schedule.back();
    bool chosen = false;
    for (double eps : params.eval.eps_schedule) {
      bool ok = true;
      for (int n = m; n <= params.n_max; ++n) {
        const double radius = std::min(1.0 / n, radius_cap);
        auto ball =
            spaces::sample_ball(g.space(), x0, radius, params.eval.resolution);
        auto slope = ball_slope(g, ball, eps, params.eval.growth);
        if (!slope || *slope < target) {
          ok = false;
          break;
        }
      }
      if (ok) {
        eps_m = eps;
        chosen = true;
        break;
      }
    }
    (void)chosen;

    for (int n = m; n <= params.n_max; ++n) {
      const double radius = std::min(1.0 / n, radius_cap);
      auto ball =
          spaces::sample_ball(g.space(), x0, radius, params.eval.resolution);
      // Word length grows with the level, bounded by the fit range.
      const int k = std::min(params.eval.growth.n_max,
                             params.eval.growth.n_min + (n - m));
      std::vector<Word> words =
          semigroup::enumerate_words(g.p(), k, params.eval.growth.word_budget);
      for (const auto& w : words) {
        auto pack = counting::max_separated_greedy(ball, g, w, eps_m);
        CountableLevel level;
        level.m = m;
        level.n = n;
        level.eps_m = eps_m;
        level.word_length = k;
        level.word = w;
        for (uint32_t idx : pack.certificate) {
          level.points.push_back(ball.points()[idx]);
          out.points.push_back(ball.points()[idx]);
        }
        out.levels.push_back(std::move(level));
      }
    }
  }
  return out;
}

double reestimate_on(const GeneratorSet& g,
                     const std::vector<spaces::Point>& pts, double mesh,
                     const CountableParams& params,
                     std::vector<GrowthSeries>* series_out) {
  SampleCloud cloud(g.space(), pts, mesh, "countable-set");
  auto series = growth_series_multi(g, cloud, params.eval.eps_schedule,
                                    params.eval.growth);
  const double value = estimate_entropy(series).value;
  if (series_out) *series_out = std::move(series);
  return value;
}

std::vector<LimitAuditEntry> audit_outside(
    const std::vector<spaces::Point>& pts, const spaces::Space& space,
    const spaces::Point& x0) {
  std::vector<LimitAuditEntry> audit;
  for (double r : {0.5, 0.25, 0.125, 0.0625}) {
    LimitAuditEntry e;
    e.radius = r;
    for (const auto& p : pts)
      if (spaces::distance(space, p, x0) > r) ++e.outside;
    audit.push_back(e);
  }
  return audit;
}

}  // namespace

CountableSetArtifact countable_full_entropy_set(const GeneratorSet& g,
                                                const spaces::Point& x0,
                                                const CountableParams& params) {
  if (params.m_max < 1 || params.n_max < params.m_max)
    throw DomainError("need 1 <= m_max <= n_max");
  spaces::validate_point(g.space(), x0);

  CountableSetArtifact art;
  art.x0 = x0;
  art.h_x0 = entropy_function_at(g, x0, params.eval).h_of_x;

  auto build = build_levels(g, x0, art.h_x0, params, 1.0);
  art.levels = std::move(build.levels);
  build.points.push_back(x0);
  art.truncation = dedupe_points(std::move(build.points));
  art.limit_points = {x0};
  art.audit = audit_outside(art.truncation, g.space(), x0);

  // Every emitted point of level (m, n) must lie in the 1/n ball: exact.
  for (const auto& level : art.levels)
    for (const auto& p : level.points)
      if (spaces::canon_round(spaces::distance(g.space(), p, x0)) >
          spaces::canon_round(1.0 / level.n))
        throw InvariantViolation("level point escaped its ball");

  const double floor_value = art.h_x0 - 1.0 / params.m_max - params.tolerance;
  art.reestimate = reestimate_on(g, art.truncation,
                                 0.5 / params.eval.resolution, params,
                                 &art.reestimate_series);
  if (art.reestimate < floor_value)
    throw InvariantViolation(
        "countable-set re-estimate fell below h(x0) - 1/m_max at level m=" +
        std::to_string(params.m_max));
  return art;
}

CountableSetArtifact countable_full_entropy_set_sequence(
    const GeneratorSet& g, const spaces::Point& x0,
    const std::vector<spaces::Point>& xs, const std::vector<double>& radii,
    const CountableParams& params) {
  if (xs.size() != radii.size())
    throw DomainError("sequence mode needs one radius per anchor point");
  if (xs.empty()) throw DomainError("sequence mode needs anchors");
  spaces::validate_point(g.space(), x0);

  CountableSetArtifact art;
  art.x0 = x0;
  art.h_x0 = entropy_function_at(g, x0, params.eval).h_of_x;

  std::vector<spaces::Point> all;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double h_xi = entropy_function_at(g, xs[i], params.eval).h_of_x;
    auto build = build_levels(g, xs[i], h_xi, params, radii[i]);
    // Containment audit: every point of part i stays within r_i of x_i.
    for (const auto& p : build.points)
      if (spaces::canon_round(spaces::distance(g.space(), p, xs[i])) >
          spaces::canon_round(radii[i]))
        throw InvariantViolation("sequence part escaped its anchor ball");
    for (auto& level : build.levels) art.levels.push_back(std::move(level));
    all.insert(all.end(), build.points.begin(), build.points.end());
  }
  all.push_back(x0);
  art.truncation = dedupe_points(std::move(all));

  std::vector<spaces::Point> limits = xs;
  limits.push_back(x0);
  art.limit_points = dedupe_points(std::move(limits));
  art.audit = audit_outside(art.truncation, g.space(), x0);

  art.reestimate = reestimate_on(g, art.truncation,
                                 0.5 / params.eval.resolution, params,
                                 &art.reestimate_series);
  const double floor_value = art.h_x0 - 1.0 / params.m_max - params.tolerance;
  if (art.reestimate < floor_value)
    throw InvariantViolation(
        "sequence-mode re-estimate fell below h(x0) - 1/m_max");
  return art;
}

}  // namespace entroact::entropy
