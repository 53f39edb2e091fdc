#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entroact/entropy.hpp"
#include "entroact/errors.hpp"
#include "test_util.hpp"

using namespace entroact;
using namespace testutil;
using entropy::KatokParams;

namespace {

// Independent oracle: the inf over removal subsets of mass < delta of the
// brute-force packing on the remainder (uniform weights, micro clouds).
std::size_t brute_katok(const SampleCloud& cloud, const GeneratorSet& g,
                        const Word& w, double eps, double delta) {
  const std::size_t m = cloud.size();
  const double unit = 1.0 / static_cast<double>(m);
  std::size_t best = brute_max_separated(cloud, g, w, eps);
  for (uint32_t mask = 1; mask < (1u << m); ++mask) {
    const double mass = unit * __builtin_popcount(mask);
    if (!(mass < delta)) continue;
    std::vector<spaces::Point> keep;
    for (std::size_t i = 0; i < m; ++i)
      if (!(mask & (1u << i))) keep.push_back(cloud.points()[i]);
    SampleCloud rest(cloud.space(), keep, cloud.mesh(), "rest");
    best = std::min(best, brute_max_separated(rest, g, w, eps));
  }
  return best;
}

}  // namespace

TEST_CASE("micro case: discarding 0.3 of P8 leaves packing 3") {
  auto g = identity_system();
  auto cloud = spaces::sample_grid(Space::circle(), 8);
  auto [count, removed] = entropy::katok_word_count(
      g, cloud, word({1}), 0.2, 0.3, KatokParams::Removal::exact, 24);
  CHECK(count == 3);
  CHECK(removed.size() <= 2);  // mass must stay strictly under 0.3
  CHECK(brute_katok(cloud, g, word({1}), 0.2, 0.3) == 3);
}

TEST_CASE("exact removal matches the brute oracle on random micro cases") {
  auto g = expanding23();
  for (uint64_t salt = 0; salt < 12; ++salt) {
    auto s = test_stream(salt + 400);
    std::vector<spaces::Point> pts;
    const std::size_t m = 5 + s.at(0) % 5;
    for (std::size_t i = 0; pts.size() < m && i < 64; ++i) {
      auto p = circle_point(std::floor(s.unit(i + 1) * 32.0) / 32.0);
      bool dup = false;
      for (const auto& q : pts) dup = dup || q == p;
      if (!dup) pts.push_back(p);
    }
    SampleCloud cloud(Space::circle(), pts, 1.0 / 64, "micro");
    Word w;
    const int n = 1 + s.at(99) % 3;
    for (int k = 0; k < n; ++k)
      w.indices.push_back(static_cast<uint8_t>(1 + s.at(100 + k) % 2));
    const double eps = 0.05 + 0.3 * s.unit(200);
    const double delta = 0.15 + 0.5 * s.unit(201);
    auto [count, removed] = entropy::katok_word_count(
        g, cloud, w, eps, delta, KatokParams::Removal::exact, 24);
    REQUIRE(count == brute_katok(cloud, g, w, eps, delta));
  }
}

TEST_CASE("isolation heuristic never beats the exact inf") {
  auto g = expanding23();
  auto cloud = spaces::sample_grid(Space::circle(), 12);
  for (double eps : {0.1, 0.2}) {
    for (double delta : {0.2, 0.4}) {
      auto exact = entropy::katok_word_count(
          g, cloud, word({1, 2}), eps, delta, KatokParams::Removal::exact, 24);
      auto heur = entropy::katok_word_count(
          g, cloud, word({1, 2}), eps, delta,
          KatokParams::Removal::isolation_heuristic, 24);
      CHECK(heur.first >= exact.first);
    }
  }
}

TEST_CASE("point mass at a fixed point has zero entropy") {
  auto g = doubling();
  SampleCloud nu(Space::circle(), {circle_point(0.0)}, 0.1, "dirac");
  KatokParams params;
  params.delta_schedule = {0.3};
  params.eps_schedule = {0.2, 0.1};
  entropy::GrowthParams gp;
  gp.n_min = 1;
  gp.n_max = 4;
  gp.word_budget = 16;
  auto res = entropy::katok_entropy(g, nu, params, gp);
  CHECK(res.value == 0.0);
  for (const auto& cell : res.table)
    for (double c : cell.mean_counts) CHECK(c == 1.0);
}

TEST_CASE("katok tables are monotone in eps and delta on oracle cases") {
  auto g = doubling();
  auto cloud = spaces::sample_grid(Space::circle(), 16);
  KatokParams params;
  params.delta_schedule = {0.4, 0.2};
  params.eps_schedule = {0.3, 0.15};
  params.removal = KatokParams::Removal::exact;
  entropy::GrowthParams gp;
  gp.n_min = 1;
  gp.n_max = 3;
  gp.word_budget = 8;
  auto res = entropy::katok_entropy(g, cloud, params, gp);
  REQUIRE(res.table.size() == 4);
  auto cell = [&](double delta, double eps) -> const entropy::KatokCell& {
    for (const auto& c : res.table)
      if (c.delta == delta && c.eps == eps) return c;
    throw std::runtime_error("missing cell");
  };
  for (double delta : params.delta_schedule) {
    const auto& big = cell(delta, 0.3);
    const auto& small = cell(delta, 0.15);
    for (std::size_t i = 0; i < big.mean_counts.size(); ++i)
      CHECK(big.mean_counts[i] <= small.mean_counts[i]);
  }
  for (double eps : params.eps_schedule) {
    const auto& loose = cell(0.4, eps);
    const auto& tight = cell(0.2, eps);
    for (std::size_t i = 0; i < loose.mean_counts.size(); ++i)
      CHECK(loose.mean_counts[i] <= tight.mean_counts[i]);
  }
}

TEST_CASE("lebesgue grid under doubling approaches log 2") {
  auto g = doubling();
  auto cloud = spaces::sample_grid(Space::circle(), 512);
  KatokParams params;
  params.delta_schedule = {0.3, 0.1};
  params.eps_schedule = {0.2, 0.1};
  entropy::GrowthParams gp;
  gp.n_min = 3;
  gp.n_max = 7;
  gp.word_budget = 16;
  gp.workers = 2;
  auto res = entropy::katok_entropy(g, cloud, params, gp);
  CHECK(res.value > 0.55);
  CHECK(res.value < 0.8);
}

TEST_CASE("delta outside (0,1) is rejected") {
  auto g = doubling();
  auto cloud = spaces::sample_grid(Space::circle(), 8);
  CHECK_THROWS_AS(entropy::katok_word_count(g, cloud, word({1}), 0.2, 1.0,
                                            KatokParams::Removal::exact, 24),
                  DomainError);
  CHECK_THROWS_AS(entropy::katok_word_count(g, cloud, word({1}), 0.2, 0.0,
                                            KatokParams::Removal::exact, 24),
                  DomainError);
}
