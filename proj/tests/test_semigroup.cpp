#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entroact/errors.hpp"
#include "entroact/semigroup.hpp"
#include "test_util.hpp"

using namespace entroact;
using namespace testutil;
using semigroup::Word;

TEST_CASE("apply_word composes right to left") {
  auto g = expanding23();
  auto x = circle_point(0.3);
  CHECK(semigroup::apply_word(g, word({}), x).coords[0] ==
        doctest::Approx(0.3));
  CHECK(semigroup::apply_word(g, word({1}), x).coords[0] ==
        doctest::Approx(0.6));
  // "12" applies E_2 first, then E_3: 3 * 0.6 mod 1 = 0.8.
  CHECK(semigroup::apply_word(g, word({1, 2}), x).coords[0] ==
        doctest::Approx(0.8));
}

TEST_CASE("word literals") {
  CHECK(semigroup::word_literal(word({1, 2})) == "12");
  CHECK(semigroup::parse_word_literal("12", 2) == word({1, 2}));
  CHECK_THROWS_AS(semigroup::parse_word_literal("13", 2), DomainError);
  CHECK_THROWS_AS(semigroup::parse_word_literal("0", 2), DomainError);
}

TEST_CASE("bowen distance") {
  SUBCASE("isometries reduce to the base distance") {
    auto g = rotations();
    auto x = circle_point(0.1), y = circle_point(0.35);
    for (const auto& w : {word({1}), word({1, 2}), word({2, 2, 1, 1})}) {
      CHECK(semigroup::bowen_distance(g, w, x, y) ==
            doctest::Approx(0.25).epsilon(1e-12));
    }
  }
  SUBCASE("doubling example") {
    auto g = doubling();
    CHECK(semigroup::bowen_distance(g, word({1, 1}), circle_point(0.0),
                                    circle_point(0.3)) ==
          doctest::Approx(0.4));
  }
  SUBCASE("coincident points give zero") {
    auto g = expanding23();
    CHECK(semigroup::bowen_distance(g, word({2, 1, 2}), circle_point(0.77),
                                    circle_point(0.77)) == 0.0);
  }
  SUBCASE("empty word is a domain error") {
    auto g = doubling();
    CHECK_THROWS_AS(semigroup::bowen_distance(g, word({}), circle_point(0.0),
                                              circle_point(0.5)),
                    DomainError);
  }
}

TEST_CASE("bowen distance properties on random data") {
  auto g = expanding23();
  auto s = test_stream(17);
  for (int t = 0; t < 10000; ++t) {
    Word w;
    const int n = 1 + (s.at(4 * t) % 4);
    for (int k = 0; k < n; ++k)
      w.indices.push_back(1 + (s.at(4 * t + 1 + k) % 2));
    auto x = circle_point(s.unit(90000 + 3 * t));
    auto y = circle_point(s.unit(90000 + 3 * t + 1));
    auto z = circle_point(s.unit(90000 + 3 * t + 2));
    const double dxy = semigroup::bowen_distance(g, w, x, y);
    const double dyx = semigroup::bowen_distance(g, w, y, x);
    const double dxz = semigroup::bowen_distance(g, w, x, z);
    const double dzy = semigroup::bowen_distance(g, w, z, y);
    REQUIRE(dxy == dyx);
    REQUIRE(dxy <= dxz + dzy + 1e-12);
    REQUIRE(dxy + 1e-15 >= spaces::distance(g.space(), x, y));
    REQUIRE(dxy == naive_bowen(g, w, x, y));

    // Extending the word on the left never shrinks the metric.
    Word longer = w;
    longer.indices.push_back(1 + (s.at(5 * t) % 2));
    REQUIRE(semigroup::bowen_distance(g, longer, x, y) + 1e-15 >= dxy);
  }
}

TEST_CASE("semigroup action law") {
  auto g = expanding23();
  auto s = test_stream(23);
  for (int t = 0; t < 10000; ++t) {
    Word w, v;
    const int nw = s.at(10 * t) % 4;
    const int nv = s.at(10 * t + 1) % 4;
    for (int k = 0; k < nw; ++k)
      w.indices.push_back(1 + (s.at(10 * t + 2 + k) % 2));
    for (int k = 0; k < nv; ++k)
      v.indices.push_back(1 + (s.at(10 * t + 6 + k) % 2));
    auto x = circle_point(s.unit(70000 + t));
    auto lhs = semigroup::apply_word(g, semigroup::concat(w, v), x);
    auto rhs = semigroup::apply_word(g, w, semigroup::apply_word(g, v, x));
    REQUIRE(std::fabs(lhs.coords[0] - rhs.coords[0]) <= 1e-12);
  }
}

TEST_CASE("enumerate_words") {
  auto w1 = semigroup::enumerate_words(2, 1);
  REQUIRE(w1.size() == 2);
  CHECK(w1[0] == word({1}));
  CHECK(w1[1] == word({2}));

  auto w2 = semigroup::enumerate_words(2, 2);
  REQUIRE(w2.size() == 4);
  CHECK(w2[0] == word({1, 1}));
  CHECK(w2[1] == word({1, 2}));
  CHECK(w2[2] == word({2, 1}));
  CHECK(w2[3] == word({2, 2}));

  auto w0 = semigroup::enumerate_words(3, 0);
  REQUIRE(w0.size() == 1);
  CHECK(w0[0].length() == 0);

  CHECK_THROWS_AS(semigroup::enumerate_words(2, 17), CapacityError);
}

TEST_CASE("sample_words") {
  SUBCASE("p=1 draws the only word") {
    auto ws = semigroup::sample_words(1, 5, 10, 42);
    for (const auto& w : ws) CHECK(w == word({1, 1, 1, 1, 1}));
  }
  SUBCASE("deterministic under the seed") {
    auto a = semigroup::sample_words(2, 8, 64, 7);
    auto b = semigroup::sample_words(2, 8, 64, 7);
    CHECK(a == b);
    auto c = semigroup::sample_words(2, 8, 64, 8);
    CHECK(a != c);
  }
  SUBCASE("uniform symbol frequency, pinned run") {
    auto ws = semigroup::sample_words(2, 8, 4096, 7);
    std::size_t ones = 0, total = 0;
    for (const auto& w : ws)
      for (uint8_t i : w.indices) {
        ones += i == 1;
        ++total;
      }
    const double freq = static_cast<double>(ones) / total;
    CHECK(freq > 0.47);
    CHECK(freq < 0.53);
  }
}

TEST_CASE("generator set validation") {
  CHECK_THROWS_AS(semigroup::GeneratorSet(Space::circle(), {}, 1.0, false),
                  DomainError);
  // A matrix generator on the wrong space fails the construction probe.
  CHECK_THROWS_AS(
      semigroup::GeneratorSet(
          Space::circle(), {semigroup::MapDesc::toral_endo({{2}})}, 2.0,
          false),
      DomainError);
}
