#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "entroact/space.hpp"

namespace entroact::semigroup {

using spaces::Point;
using spaces::Space;

/// Description of one generator map. Evaluation lives in apply_map; the
/// catalog module builds these for the built-in systems.
struct MapDesc {
  enum class Kind {
    identity,
    expanding_circle,   // x -> k x mod 1
    rotation,           // x -> x + alpha mod 1
    manneville_pomeau,  // the intermittent circle map with exponent beta
    toral_endo,         // x -> M x mod 1, integer matrix
    piecewise           // branch-wise pair on a disjoint union
  };

  Kind kind = Kind::identity;
  int factor = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::vector<long long>> matrix;  // row-major
  std::shared_ptr<const MapDesc> left, right;

  static MapDesc identity();
  static MapDesc expanding_circle(int k);
  static MapDesc rotation(double alpha);
  static MapDesc manneville_pomeau(double beta);
  static MapDesc toral_endo(std::vector<std::vector<long long>> m);
  static MapDesc piecewise(MapDesc l, MapDesc r);
};

/// Evaluates a generator at a canonical point; the result is canonical.
Point apply_map(const MapDesc& map, const Space& space, const Point& x);

/// Allocation-free evaluation on raw coordinates (hot paths). The branch
/// tag selects the component of a piecewise map and never changes along an
/// orbit. dim <= 16.
void apply_map_coords(const MapDesc& map, uint8_t branch, const double* src,
                      double* dst, int dim);

/// The p generator maps acting on a common space, with the uniform word
/// weighting. `max_expansion` is the declared per-step Lipschitz bound used
/// by feasibility guards downstream.
class GeneratorSet {
 public:
  GeneratorSet(Space space, std::vector<MapDesc> maps, double max_expansion,
               bool invertible, std::string name = "");

  int p() const { return static_cast<int>(maps_.size()); }
  const Space& space() const { return space_; }
  const std::vector<MapDesc>& maps() const { return maps_; }
  double max_expansion() const { return max_expansion_; }
  bool invertible() const { return invertible_; }
  const std::string& name() const { return name_; }

  /// The uniform weighting (1/p, ..., 1/p) on generator choices.
  std::vector<double> eta() const {
    return std::vector<double>(maps_.size(), 1.0 / p());
  }

 private:
  Space space_;
  std::vector<MapDesc> maps_;
  double max_expansion_;
  bool invertible_;
  std::string name_;
};

/// A finite sequence of generator indices in {1,..,p}. Index i_1 is applied
/// first: the word (i_1,...,i_n) acts as g_{i_n} ... g_{i_1}. Length 0 is
/// the identity.
struct Word {
  std::vector<uint8_t> indices;

  std::size_t length() const { return indices.size(); }
  bool operator==(const Word& other) const { return indices == other.indices; }
};

/// Concatenation acting as composition: concat(w, v) applies v first, then
/// w (the semigroup product w v).
Word concat(const Word& w, const Word& v);

/// Literal syntax: digits, leftmost applied first ("12" = apply g_1 then
/// g_2). Requires p <= 9.
std::string word_literal(const Word& w);
Word parse_word_literal(const std::string& text, int p);

/// g_{i_n}(...g_{i_1}(x)...); the empty word returns x unchanged.
Point apply_word(const GeneratorSet& g, const Word& w, Point x);

/// Bowen metric along a word: max over prefixes j = 0..n-1 of the base
/// distance between the prefix images (prefix 0 is the identity, the full
/// word's image is excluded). Requires |w| >= 1.
double bowen_distance(const GeneratorSet& g, const Word& w, const Point& x,
                      const Point& y);

inline constexpr std::size_t kDefaultWordBudget = 65536;

/// All p^n words of length n in lexicographic index order. Throws
/// CapacityError past `budget` (use sample_words instead).
std::vector<Word> enumerate_words(int p, int n,
                                  std::size_t budget = kDefaultWordBudget);

/// M i.i.d. uniform words of length n from a counter-based stream keyed by
/// (seed, n, sample index); reproducible under any parallel partitioning.
std::vector<Word> sample_words(int p, int n, std::size_t m, uint64_t seed);

/// Prefix images of a whole cloud under one word, laid out flat as
/// [point][prefix][axis]; the branch tag is constant along every orbit.
/// This is the buffer all counting routines work from.
struct OrbitBuffer {
  const Space* space = nullptr;
  int n = 0;    // word length (= number of stored prefixes)
  int dim = 0;  // max branch dimension
  std::size_t count = 0;
  std::vector<double> coords;   // count * n * dim, unused axes zero
  std::vector<uint8_t> branch;  // per point
  std::vector<uint8_t> wraps;   // per (branch, axis): axis metric wraps

  const double* at(std::size_t point, int prefix) const {
    return coords.data() + (point * n + prefix) * dim;
  }
  bool axis_wraps(uint8_t br, int axis) const { return wraps[br * dim + axis]; }
};

OrbitBuffer compute_orbits(const GeneratorSet& g, const Word& w,
                           const spaces::SampleCloud& cloud);

}  // namespace entroact::semigroup
