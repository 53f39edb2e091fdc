#include "entroact/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "entroact/errors.hpp"
#include "entroact/rng.hpp"

namespace entroact::semigroup {

MapDesc MapDesc::identity() { return MapDesc{}; }

MapDesc MapDesc::expanding_circle(int k) {
  if (k < 2) throw DomainError("expanding_circle factor must be >= 2");
  MapDesc m;
  m.kind = Kind::expanding_circle;
  m.factor = k;
  return m;
}

MapDesc MapDesc::rotation(double alpha) {
  MapDesc m;
  m.kind = Kind::rotation;
  m.alpha = alpha;
  return m;
}

MapDesc MapDesc::manneville_pomeau(double beta) {
  if (beta <= 0.0) throw DomainError("manneville_pomeau exponent must be > 0");
  MapDesc m;
  m.kind = Kind::manneville_pomeau;
  m.beta = beta;
  return m;
}

MapDesc MapDesc::toral_endo(std::vector<std::vector<long long>> mat) {
  if (mat.empty()) throw DomainError("toral_endo matrix must be nonempty");
  for (const auto& row : mat)
    if (row.size() != mat.size())
      throw DomainError("toral_endo matrix must be square");
  MapDesc m;
  m.kind = Kind::toral_endo;
  m.matrix = std::move(mat);
  return m;
}

MapDesc MapDesc::piecewise(MapDesc l, MapDesc r) {
  if (l.kind == Kind::piecewise || r.kind == Kind::piecewise)
    throw DomainError("piecewise maps cannot nest");
  MapDesc m;
  m.kind = Kind::piecewise;
  m.left = std::make_shared<const MapDesc>(std::move(l));
  m.right = std::make_shared<const MapDesc>(std::move(r));
  return m;
}

namespace {

double wrap01(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  if (r < 0.0) r += 1.0;
  return r;
}

// The intermittent map on circle coordinates; the two interval branches
// glue continuously at 0 ~ 1.
double mp_eval(double x, double beta) {
  if (x <= 0.5) return wrap01(x * (1.0 + std::pow(2.0 * x, beta)));
  return wrap01(2.0 * x - 1.0);
}

}  // namespace

Point apply_map(const MapDesc& map, const Space& space, const Point& x) {
  switch (map.kind) {
    case MapDesc::Kind::identity:
      return x;
    case MapDesc::Kind::expanding_circle: {
      if (space.kind() != Space::Kind::circle)
        throw DomainError("expanding_circle requires the circle");
      Point y = x;
      y.coords[0] = wrap01(map.factor * x.coords[0]);
      return y;
    }
    case MapDesc::Kind::rotation: {
      if (space.kind() != Space::Kind::circle)
        throw DomainError("rotation requires the circle");
      Point y = x;
      y.coords[0] = wrap01(x.coords[0] + map.alpha);
      return y;
    }
    case MapDesc::Kind::manneville_pomeau: {
      if (space.kind() != Space::Kind::circle)
        throw DomainError("manneville_pomeau requires the circle");
      Point y = x;
      y.coords[0] = mp_eval(x.coords[0], map.beta);
      return y;
    }
    case MapDesc::Kind::toral_endo: {
      if (space.kind() != Space::Kind::torus ||
          static_cast<int>(map.matrix.size()) != space.dim())
        throw DomainError("toral_endo matrix does not match the torus");
      Point y = x;
      for (int i = 0; i < space.dim(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < space.dim(); ++j)
          acc += static_cast<double>(map.matrix[i][j]) * x.coords[j];
        y.coords[i] = wrap01(acc);
      }
      return y;
    }
    case MapDesc::Kind::piecewise: {
      if (!space.is_union())
        throw DomainError("piecewise map requires a disjoint union");
      const MapDesc& part = x.branch == 0 ? *map.left : *map.right;
      const Space& comp = x.branch == 0 ? space.left() : space.right();
      Point y = apply_map(part, comp, x);
      y.branch = x.branch;
      return y;
    }
  }
  throw DomainError("unknown map kind");
}

GeneratorSet::GeneratorSet(Space space, std::vector<MapDesc> maps,
                           double max_expansion, bool invertible,
                           std::string name)
    : space_(std::move(space)),
      maps_(std::move(maps)),
      max_expansion_(max_expansion),
      invertible_(invertible),
      name_(std::move(name)) {
  if (maps_.empty()) throw DomainError("generator set needs p >= 1 maps");
  if (max_expansion_ < 1.0)
    throw DomainError("max_expansion must be >= 1 (maps act on a compact "
                      "space)");
  // Spot-check that each map sends canonical points to canonical points.
  auto probe = spaces::sample_grid(space_, 8);
  for (const auto& m : maps_) {
    for (std::size_t i = 0; i < probe.size(); i += 7) {
      Point y = apply_map(m, space_, probe.points()[i]);
      spaces::validate_point(space_, y);
    }
  }
}

Word concat(const Word& w, const Word& v) {
  Word out;
  out.indices = v.indices;
  out.indices.insert(out.indices.end(), w.indices.begin(), w.indices.end());
  return out;
}

std::string word_literal(const Word& w) {
  std::string s;
  s.reserve(w.length());
  for (uint8_t i : w.indices) {
    if (i > 9) throw DomainError("word literals support p <= 9");
    s.push_back(static_cast<char>('0' + i));
  }
  return s;
}

Word parse_word_literal(const std::string& text, int p) {
  Word w;
  for (char c : text) {
    if (c < '1' || c > '9') throw DomainError("invalid word literal digit");
    int idx = c - '0';
    if (idx > p) throw DomainError("word literal index exceeds p");
    w.indices.push_back(static_cast<uint8_t>(idx));
  }
  return w;
}

Point apply_word(const GeneratorSet& g, const Word& w, Point x) {
  spaces::validate_point(g.space(), x);
  for (uint8_t i : w.indices) {
    if (i < 1 || i > g.p()) throw DomainError("word index outside {1,..,p}");
    x = apply_map(g.maps()[i - 1], g.space(), x);
  }
  return x;
}

double bowen_distance(const GeneratorSet& g, const Word& w, const Point& x,
                      const Point& y) {
  if (w.length() == 0)
    throw DomainError("bowen_distance needs |w| >= 1 (use distance)");
  Point a = x, b = y;
  double best = spaces::distance(g.space(), a, b);
  for (std::size_t j = 0; j + 1 < w.length(); ++j) {
    const MapDesc& m = g.maps()[w.indices[j] - 1];
    a = apply_map(m, g.space(), a);
    b = apply_map(m, g.space(), b);
    best = std::max(best, spaces::distance(g.space(), a, b));
  }
  return best;
}

std::vector<Word> enumerate_words(int p, int n, std::size_t budget) {
  if (p < 1) throw DomainError("p must be >= 1");
  if (n < 0) throw DomainError("word length must be >= 0");
  double total_d = std::pow(static_cast<double>(p), n);
  if (total_d > static_cast<double>(budget))
    throw CapacityError("p^n exceeds the exhaustive word budget; use "
                        "sample_words");
  std::size_t total = static_cast<std::size_t>(total_d + 0.5);
  std::vector<Word> out;
  out.reserve(total);
  Word w;
  w.indices.assign(n, 1);
  for (std::size_t c = 0; c < total; ++c) {
    out.push_back(w);
    int k = n - 1;
    while (k >= 0 && w.indices[k] == p) {
      w.indices[k] = 1;
      --k;
    }
    if (k < 0) break;
    ++w.indices[k];
  }
  return out;
}

std::vector<Word> sample_words(int p, int n, std::size_t m, uint64_t seed) {
  if (p < 1) throw DomainError("p must be >= 1");
  if (m < 1) throw DomainError("sample size must be >= 1");
  std::vector<Word> out(m);
  auto s = rng::stream(seed, rng::tags::kWordSampling,
                       static_cast<uint64_t>(n));
  for (std::size_t i = 0; i < m; ++i) {
    out[i].indices.resize(n);
    for (int k = 0; k < n; ++k) {
      uint64_t counter = (static_cast<uint64_t>(i) << 20) | k;
      out[i].indices[k] = static_cast<uint8_t>(
          1 + s.bounded(counter, static_cast<uint32_t>(p)));
    }
  }
  return out;
}

namespace {

// Allocation-free map kernel on raw coordinates; dispatches once on the
// descriptor kind. `scratch` must hold `dim` doubles for the matrix case.
void apply_map_flat(const MapDesc& map, uint8_t branch, const double* src,
                    double* dst, int dim, double* scratch) {
  switch (map.kind) {
    case MapDesc::Kind::identity:
      for (int a = 0; a < dim; ++a) dst[a] = src[a];
      return;
    case MapDesc::Kind::expanding_circle:
      dst[0] = wrap01(map.factor * src[0]);
      return;
    case MapDesc::Kind::rotation:
      dst[0] = wrap01(src[0] + map.alpha);
      return;
    case MapDesc::Kind::manneville_pomeau:
      dst[0] = mp_eval(src[0], map.beta);
      return;
    case MapDesc::Kind::toral_endo: {
      for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        const auto& row = map.matrix[i];
        for (int j = 0; j < dim; ++j)
          acc += static_cast<double>(row[j]) * src[j];
        scratch[i] = wrap01(acc);
      }
      for (int i = 0; i < dim; ++i) dst[i] = scratch[i];
      return;
    }
    case MapDesc::Kind::piecewise:
      apply_map_flat(branch == 0 ? *map.left : *map.right, 0, src, dst, dim,
                     scratch);
      return;
  }
}

}  // namespace

void apply_map_coords(const MapDesc& map, uint8_t branch, const double* src,
                      double* dst, int dim) {
  if (dim > 16) throw CapacityError("apply_map_coords supports dim <= 16");
  double scratch[16];
  apply_map_flat(map, branch, src, dst, dim, scratch);
}

OrbitBuffer compute_orbits(const GeneratorSet& g, const Word& w,
                           const spaces::SampleCloud& cloud) {
  if (w.length() == 0) throw DomainError("orbit buffer needs |w| >= 1");
  if (cloud.space() != g.space())
    throw DomainError("cloud space does not match the generator set");
  if (cloud.space().dim() > 16)
    throw CapacityError("orbit buffers support dim <= 16");
  OrbitBuffer buf;
  buf.space = &cloud.space();
  buf.n = static_cast<int>(w.length());
  buf.dim = cloud.space().dim();
  buf.count = cloud.size();
  buf.coords.assign(buf.count * buf.n * buf.dim, 0.0);
  buf.branch.resize(buf.count);
  buf.wraps.assign(2 * buf.dim, 0);
  for (uint8_t br = 0; br < 2; ++br) {
    int bd = cloud.space().is_union() ? cloud.space().branch_dim(br)
                                      : cloud.space().dim();
    for (int a = 0; a < bd; ++a)
      buf.wraps[br * buf.dim + a] = cloud.space().axis_wraps(a, br) ? 1 : 0;
  }
  double scratch[16];
  for (std::size_t i = 0; i < buf.count; ++i) {
    const Point& x = cloud.points()[i];
    buf.branch[i] = x.branch;
    double* base = buf.coords.data() + i * buf.n * buf.dim;
    const int bd = static_cast<int>(x.coords.size());
    for (int a = 0; a < bd; ++a) base[a] = x.coords[a];
    for (int j = 0; j + 1 < buf.n; ++j) {
      apply_map_flat(g.maps()[w.indices[j] - 1], x.branch,
                     base + j * buf.dim, base + (j + 1) * buf.dim, bd,
                     scratch);
    }
  }
  return buf;
}

}  // namespace entroact::semigroup
