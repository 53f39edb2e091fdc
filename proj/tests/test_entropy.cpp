#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entroact/entropy.hpp"
#include "entroact/errors.hpp"
#include "test_util.hpp"

using namespace entroact;
using namespace testutil;
using entropy::EvalParams;
using entropy::PointLabel;

namespace {

EvalParams cheap_eval(int resolution = 4096) {
  EvalParams ev;
  ev.eps_schedule = {0.2, 0.1};
  ev.radii = {0.25, 0.125};
  ev.resolution = resolution;
  ev.growth.n_min = 2;
  ev.growth.n_max = 5;
  ev.growth.word_budget = 64;
  ev.growth.workers = 2;
  return ev;
}

}  // namespace

TEST_CASE("entropy function vanishes exactly for isometries") {
  auto g = rotations();
  auto sample = entropy::entropy_function_at(g, circle_point(0.3),
                                             cheap_eval(512));
  CHECK(sample.h_of_x == 0.0);
  for (std::size_t e = 0; e < 2; ++e) {
    REQUIRE(sample.h_at_eps[e].has_value());
    CHECK(*sample.h_at_eps[e] == 0.0);
  }
}

TEST_CASE("entropy function near log(5/2) for the expanding pair") {
  auto g = expanding23();
  EvalParams ev = cheap_eval(8192);
  ev.growth.n_max = 6;
  auto sample = entropy::entropy_function_at(g, circle_point(0.37), ev);
  CHECK(sample.h_of_x > 0.80);
  CHECK(sample.h_of_x < 0.99);

  // The recorded inf over radii never exceeds any usable per-radius slope.
  for (std::size_t e = 0; e < ev.eps_schedule.size(); ++e) {
    if (!sample.h_at_eps[e]) continue;
    for (const auto& r : sample.per_radius)
      if (r.slopes[e].usable)
        CHECK(*sample.h_at_eps[e] <= r.slopes[e].slope + 1e-12);
  }
}

TEST_CASE("classification") {
  SUBCASE("rotations are non-entropy points") {
    auto g = rotations();
    auto candidates = spaces::sample_grid(g.space(), 4);
    auto labels = entropy::classify_entropy_points(g, candidates, 0.05, 0.0,
                                                   cheap_eval(512));
    for (auto l : labels) CHECK(l == PointLabel::non_entropy);
  }
  SUBCASE("expanding pair points are full entropy points") {
    auto g = expanding23();
    auto candidates = spaces::sample_grid(g.space(), 4);
    EvalParams ev = cheap_eval(8192);
    ev.growth.n_max = 6;
    auto labels = entropy::classify_entropy_points(
        g, candidates, 0.05, std::log(2.5), ev);
    for (auto l : labels) CHECK(l == PointLabel::full_entropy);
  }
  SUBCASE("monotone in tau: larger tau never adds entropy points") {
    auto g = expanding23();
    auto candidates = spaces::sample_grid(g.space(), 4);
    EvalParams ev = cheap_eval(1024);
    auto count = [&](double tau) {
      auto labels = entropy::classify_entropy_points(g, candidates, tau,
                                                     std::log(2.5), ev);
      std::size_t c = 0;
      for (auto l : labels)
        if (l != PointLabel::non_entropy) ++c;
      return c;
    };
    CHECK(count(0.05) >= count(0.3));
    CHECK(count(0.3) >= count(2.0));
  }
}

TEST_CASE("find_entropy_point") {
  SUBCASE("expanding pair returns a point of comparable local entropy") {
    auto g = expanding23();
    EvalParams ev = cheap_eval(4096);
    auto res = entropy::find_entropy_point(
        g, spaces::sample_grid(g.space(), 4096), 3, ev);
    CHECK(res.h_of_point > 0.5);
    CHECK(std::fabs(res.h_of_point - res.stage1_estimate) <= 0.1 + 1e-12);
    CHECK(res.trace.size() >= 1);
  }
  SUBCASE("zero entropy input is a domain error") {
    auto g = union_expanding();
    // Cloud confined to the pointwise-fixed branch.
    std::vector<spaces::Point> pts;
    for (int k = 0; k < 16; ++k) {
      spaces::Point p;
      p.branch = 1;
      p.coords = {k / 16.0};
      pts.push_back(p);
    }
    spaces::SampleCloud k2(g.space(), pts, 1.0 / 32, "X2");
    EvalParams ev = cheap_eval(512);
    CHECK_THROWS_AS(entropy::find_entropy_point(g, k2, 2, ev), DomainError);
  }
}

TEST_CASE("support check") {
  SUBCASE("rotations report not-applicable") {
    auto g = rotations();
    auto rep = entropy::verify_support_in_entropy_points(g, 5, 256, 8, 0.05,
                                                         cheap_eval(512));
    CHECK_FALSE(rep.applicable);
  }
  SUBCASE("expanding pair support is all entropy points") {
    auto g = expanding23();
    EvalParams ev = cheap_eval(8192);
    ev.growth.n_max = 6;
    auto rep = entropy::verify_support_in_entropy_points(g, 5, 512, 8, 0.05,
                                                         ev);
    REQUIRE(rep.applicable);
    CHECK(rep.fraction_entropy == 1.0);
    CHECK(rep.samples >= 1);
  }
  SUBCASE("union system walk stays on the expanding branch") {
    auto g = union_expanding();
    EvalParams ev = cheap_eval(4096);
    ev.growth.n_max = 5;
    auto rep = entropy::verify_support_in_entropy_points(g, 9, 512, 6, 0.05,
                                                         ev);
    REQUIRE(rep.applicable);
    for (const auto& p : rep.points) CHECK(p.branch == 0);
    CHECK(rep.fraction_entropy == 1.0);
  }
}
