#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entroact/counting.hpp"
#include "entroact/errors.hpp"
#include "test_util.hpp"

using namespace entroact;
using namespace testutil;
using counting::PackingResult;

namespace {

SampleCloud p8() {
  return spaces::sample_grid(Space::circle(), 8);
}

// Random micro cloud on the circle: distinct points from the test stream.
SampleCloud random_cloud(uint64_t salt, std::size_t max_points) {
  auto s = test_stream(salt);
  std::vector<spaces::Point> pts;
  const std::size_t m = 2 + s.at(0) % (max_points - 1);
  for (std::size_t i = 0; pts.size() < m && i < 4 * max_points; ++i) {
    auto p = circle_point(std::floor(s.unit(i + 1) * 64.0) / 64.0);
    bool dup = false;
    for (const auto& q : pts) dup = dup || q == p;
    if (!dup) pts.push_back(p);
  }
  return SampleCloud(Space::circle(), pts, 1.0 / 128, "micro");
}

Word random_word(uint64_t salt, int p, int max_len) {
  auto s = test_stream(salt ^ 0x5555);
  Word w;
  const int n = 1 + s.at(0) % max_len;
  for (int k = 0; k < n; ++k)
    w.indices.push_back(static_cast<uint8_t>(1 + s.at(k + 1) % p));
  return w;
}

}  // namespace

TEST_CASE("P8 examples under the base metric") {
  auto g = identity_system();
  auto cloud = p8();
  auto w = word({1});

  SUBCASE("greedy separated keeps the quarter lattice") {
    auto res = counting::max_separated_greedy(cloud, g, w, 0.2);
    CHECK(res.count == 4);
    REQUIRE(res.certificate.size() == 4);
    CHECK(cloud.points()[res.certificate[0]].coords[0] == 0.0);
    CHECK(cloud.points()[res.certificate[1]].coords[0] == 0.25);
    CHECK(cloud.points()[res.certificate[2]].coords[0] == 0.5);
    CHECK(cloud.points()[res.certificate[3]].coords[0] == 0.75);
  }
  SUBCASE("exact packing agrees with brute force") {
    CHECK(counting::exact_packing(cloud, g, w, 0.2).count == 4);
    CHECK(brute_max_separated(cloud, g, w, 0.2) == 4);
    CHECK(counting::exact_packing(cloud, g, w, 0.6).count == 1);
  }
  SUBCASE("greedy spanning covers with three balls") {
    auto res = counting::min_spanning_greedy(cloud, g, w, 0.2);
    CHECK(res.count == 3);
    auto buf = semigroup::compute_orbits(g, w, cloud);
    CHECK(counting::certificate_covers(buf, res.certificate, 0.2, true));
  }
  SUBCASE("exact covering agrees with brute force") {
    CHECK(counting::exact_covering(cloud, g, w, 0.2).count == 3);
    CHECK(brute_min_cover(cloud, g, w, 0.2) == 3);
    CHECK(counting::exact_covering(cloud, g, w, 0.1).count == 8);
  }
  SUBCASE("edge scales") {
    CHECK(counting::max_separated_greedy(cloud, g, w, 0.7).count == 1);
    CHECK(counting::min_spanning_greedy(cloud, g, w, 0.6).count == 1);
    // Below the lattice gap every point covers only itself.
    CHECK(counting::min_spanning_greedy(cloud, g, w, 0.1).count == 8);
  }
  SUBCASE("single point cloud") {
    SampleCloud one(Space::circle(), {circle_point(0.3)}, 0.1, "one");
    CHECK(counting::max_separated_greedy(one, g, w, 0.2).count == 1);
    CHECK(counting::exact_covering(one, g, w, 0.2).count == 1);
  }
}

TEST_CASE("two point clouds") {
  auto g = identity_system();
  auto w = word({1});
  SampleCloud two(Space::circle(), {circle_point(0.0), circle_point(0.5)},
                  0.1, "two");
  CHECK(counting::exact_packing(two, g, w, 0.4).count == 2);
  auto rep = counting::sandwich_audit(two, g, w, 0.3);
  CHECK(rep.b_exact == 2);
  CHECK(rep.s_exact == 2);
  CHECK(rep.b_half_exact == 2);
}

TEST_CASE("sandwich audit on P8") {
  auto g = identity_system();
  auto rep = counting::sandwich_audit(p8(), g, word({1}), 0.2);
  CHECK(rep.b_exact == 3);
  CHECK(rep.s_exact == 4);
  CHECK(rep.b_half_exact == 8);
  CHECK(rep.greedy_sep == 4);

  SampleCloud one(Space::circle(), {circle_point(0.1)}, 0.1, "one");
  auto singleton = counting::sandwich_audit(one, g, word({1}), 0.2);
  CHECK(singleton.b_exact == 1);
  CHECK(singleton.s_exact == 1);
  CHECK(singleton.b_half_exact == 1);
}

TEST_CASE("signature counting") {
  auto g = identity_system();
  auto cloud = p8();
  SUBCASE("quarter cells hold two points each") {
    auto table = counting::signature_covering_count(cloud, g, word({1}), 0.25,
                                                    true);
    CHECK(table.occupied == 4);
    for (auto pop : table.populations) CHECK(pop == 2);
  }
  SUBCASE("one giant cell") {
    CHECK(counting::signature_covering_count(cloud, g, word({1}), 1.5)
              .occupied == 1);
  }
  SUBCASE("cells below the lattice gap are singletons") {
    CHECK(counting::signature_covering_count(cloud, g, word({1}), 0.05)
              .occupied == 8);
  }
}

TEST_CASE("bowen-metric instances match the naive recomputation") {
  auto g = expanding23();
  auto cloud = p8();
  for (const auto& w : {word({1}), word({2, 1}), word({1, 2, 2})}) {
    auto buf = semigroup::compute_orbits(g, w, cloud);
    for (std::size_t i = 0; i < cloud.size(); ++i)
      for (std::size_t j = 0; j < cloud.size(); ++j) {
        const double d =
            naive_bowen(g, w, cloud.points()[i], cloud.points()[j]);
        CHECK(counting::bowen_value(buf, i, j) == doctest::Approx(d));
        CHECK(counting::bowen_leq(buf, i, j, 0.3) == (spaces::canon_round(d) <= 0.3));
      }
  }
}

TEST_CASE("certified brackets on random micro instances") {
  auto g = expanding23();
  int checked = 0;
  for (uint64_t salt = 0; salt < 60; ++salt) {
    auto cloud = random_cloud(salt, 12);
    auto w = random_word(salt, 2, 4);
    auto s = test_stream(salt ^ 0x99);
    const double eps = 0.03 + 0.5 * s.unit(0);

    const auto exact_s = counting::exact_packing(cloud, g, w, eps).count;
    const auto exact_b = counting::exact_covering(cloud, g, w, eps).count;
    const auto brute_s = brute_max_separated(cloud, g, w, eps);
    const auto brute_b = brute_min_cover(cloud, g, w, eps);
    REQUIRE(exact_s == brute_s);
    REQUIRE(exact_b == brute_b);

    const auto greedy_s = counting::max_separated_greedy(cloud, g, w, eps);
    REQUIRE(greedy_s.count >= exact_b);
    REQUIRE(greedy_s.count <= exact_s);

    const auto greedy_b = counting::min_spanning_greedy(cloud, g, w, eps);
    REQUIRE(greedy_b.count >= exact_b);
    REQUIRE(static_cast<double>(greedy_b.count) <=
            exact_b * (1.0 + std::log(static_cast<double>(cloud.size()))) +
                1e-9);

    auto buf = semigroup::compute_orbits(g, w, cloud);
    REQUIRE(counting::certificate_is_separated(buf, greedy_s.certificate, eps));
    // Maximality makes the greedy separated set a <=eps cover.
    REQUIRE(counting::certificate_covers(buf, greedy_s.certificate, eps,
                                         false));
    REQUIRE(counting::certificate_covers(buf, greedy_b.certificate, eps,
                                         true));
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("counts are monotone non-increasing in eps") {
  auto g = expanding23();
  auto cloud = p8();
  for (const auto& w : {word({1}), word({2, 1}), word({1, 1, 2})}) {
    std::size_t prev_sep = cloud.size() + 1, prev_span = cloud.size() + 1;
    for (double eps : {0.05, 0.1, 0.2, 0.3, 0.45}) {
      const auto sep = counting::exact_packing(cloud, g, w, eps).count;
      const auto span = counting::exact_covering(cloud, g, w, eps).count;
      REQUIRE(sep <= prev_sep);
      REQUIRE(span <= prev_span);
      prev_sep = sep;
      prev_span = span;
    }
  }
}

TEST_CASE("union clouds separate across branches at eps < 1") {
  auto g = union_expanding();
  auto cloud = spaces::sample_grid(g.space(), 4);
  auto res = counting::max_separated_greedy(cloud, g, word({1}), 0.3);
  // Branches contribute independently: 4-point circles at eps 0.3 give 2
  // each.
  CHECK(res.count == 4);
  auto whole = counting::max_separated_greedy(cloud, g, word({1}), 1.0);
  CHECK(whole.count == 1);
}

TEST_CASE("oracle budget errors") {
  auto g = identity_system();
  auto cloud = spaces::sample_grid(Space::circle(), 32);
  CHECK_THROWS_AS(counting::exact_packing(cloud, g, word({1}), 0.1),
                  CapacityError);
  CHECK_THROWS_AS(counting::sandwich_audit(cloud, g, word({1}), 0.1),
                  CapacityError);
}
