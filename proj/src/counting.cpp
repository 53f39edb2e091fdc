#include "entroact/counting.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "entroact/errors.hpp"
#include "entroact/rng.hpp"

namespace entroact::counting {

using spaces::canon_round;

namespace {

inline double axis_dist(double a, double b, bool wraps) {
  double d = std::fabs(a - b);
  return wraps ? std::min(d, 1.0 - d) : d;
}

// The canonical comparisons d > eps / d < eps on the 1e-15 lattice, reduced
// to one multiply against a precomputed threshold (half-up at the exact
// lattice midpoint):
//   canon(d) > canon(eps)  <=>  d * 1e15 >= round(eps * 1e15) + 0.5
//   canon(d) < canon(eps)  <=>  d * 1e15 <  round(eps * 1e15) - 0.5
struct CmpThreshold {
  double exceed;  // per-axis "not within" cut: d * 1e15 >= exceed

  static CmpThreshold leq(double eps) {
    return CmpThreshold{std::nearbyint(eps * 1e15) + 0.5};
  }
  static CmpThreshold lt(double eps) {
    return CmpThreshold{std::nearbyint(eps * 1e15) - 0.5};
  }
};

// All prefix/axis distances within the threshold, early-exiting on the
// first excess. Cross-branch pairs sit at the constant distance 1.
inline bool bowen_within(const OrbitBuffer& buf, std::size_t a, std::size_t b,
                         const CmpThreshold& t) {
  if (buf.branch[a] != buf.branch[b]) return !(1e15 >= t.exceed);
  const uint8_t br = buf.branch[a];
  const double* pa = buf.at(a, 0);
  const double* pb = buf.at(b, 0);
  const int total = buf.n * buf.dim;
  if (buf.dim == 1) {
    for (int t2 = 0; t2 < total; ++t2) {
      double d = std::fabs(pa[t2] - pb[t2]);
      if (buf.wraps[br]) d = std::min(d, 1.0 - d);
      if (d * 1e15 >= t.exceed) return false;
    }
    return true;
  }
  for (int t2 = 0; t2 < total; ++t2) {
    const int axis = t2 % buf.dim;
    const double d = axis_dist(pa[t2], pb[t2], buf.axis_wraps(br, axis));
    if (d * 1e15 >= t.exceed) return false;
  }
  return true;
}

}  // namespace

bool bowen_leq(const OrbitBuffer& buf, std::size_t a, std::size_t b,
               double eps) {
  return bowen_within(buf, a, b, CmpThreshold::leq(eps));
}

bool bowen_lt(const OrbitBuffer& buf, std::size_t a, std::size_t b,
              double eps) {
  return bowen_within(buf, a, b, CmpThreshold::lt(eps));
}

double bowen_value(const OrbitBuffer& buf, std::size_t a, std::size_t b) {
  if (buf.branch[a] != buf.branch[b]) return 1.0;
  const uint8_t br = buf.branch[a];
  const double* pa = buf.at(a, 0);
  const double* pb = buf.at(b, 0);
  double best = 0.0;
  const int total = buf.n * buf.dim;
  for (int t = 0; t < total; ++t)
    best = std::max(
        best, axis_dist(pa[t], pb[t], buf.axis_wraps(br, t % buf.dim)));
  return best;
}

namespace {

// Open-addressing multimap from cell-key hashes to point indices: bucket
// heads in a power-of-two table, chains through a per-point next array.
// Collisions merge chains, which only adds candidates ahead of the exact
// distance check.
class FlatBuckets {
 public:
  explicit FlatBuckets(std::size_t max_points) {
    heads_.assign(1024, -1);
    keys_.assign(1024, 0);
    mask_ = heads_.size() - 1;
    next_.assign(max_points, -1);
    entries_.reserve(64);
  }

  void insert(uint64_t key, std::size_t point) {
    if (entries_.size() * 2 >= heads_.size()) grow();
    const std::size_t slot = find_slot(key);
    if (heads_[slot] == -1) keys_[slot] = key;
    next_[point] = heads_[slot];
    heads_[slot] = static_cast<int64_t>(point);
    entries_.push_back({key, point});
  }

  template <typename Fn>
  bool visit(uint64_t key, Fn&& fn) const {
    std::size_t i = key & mask_;
    while (heads_[i] != -1) {
      if (keys_[i] == key) {
        for (int64_t p = heads_[i]; p != -1; p = next_[p])
          if (fn(static_cast<std::size_t>(p))) return true;
        return false;
      }
      i = (i + 1) & mask_;
    }
    return false;
  }

 private:
  std::size_t find_slot(uint64_t key) {
    std::size_t i = key & mask_;
    while (heads_[i] != -1 && keys_[i] != key) i = (i + 1) & mask_;
    return i;
  }

  void grow() {
    heads_.assign(heads_.size() * 2, -1);
    keys_.assign(keys_.size() * 2, 0);
    mask_ = heads_.size() - 1;
    for (auto& [key, point] : entries_) {
      const std::size_t slot = find_slot(key);
      if (heads_[slot] == -1) {
        keys_[slot] = key;
        next_[point] = -1;
      } else {
        next_[point] = heads_[slot];
      }
      heads_[slot] = static_cast<int64_t>(point);
    }
  }

  std::size_t mask_ = 0;
  std::vector<int64_t> heads_;
  std::vector<uint64_t> keys_;
  std::vector<int64_t> next_;
  std::vector<std::pair<uint64_t, std::size_t>> entries_;
};

// Hash grid over a few selected Bowen prefixes. Two points within eps in
// the Bowen metric always land in the same or adjacent cells along every
// indexed axis, so querying the 3^k neighborhood of a point's cell is a
// conservative candidate filter; exact distance checks follow. Cell width
// is padded slightly above eps so the canonical rounding at comparisons
// cannot straddle a cell boundary.
class PrefixCellIndex {
 public:
  PrefixCellIndex(const OrbitBuffer& buf, double eps)
      : buf_(buf), buckets_(buf.count) {
    eps_r_ = canon_round(eps);
    const double width_floor = eps_r_ + 1e-9;
    cells_per_axis_ = std::max(1, static_cast<int>(std::floor(1.0 / width_floor)));
    width_ = 1.0 / cells_per_axis_;
    split_branches_ = buf.space->is_union() && eps_r_ < 1.0;

    int want = buf_.dim == 1 ? 3 : (buf_.dim == 2 ? 2 : 1);
    want = std::min(want, buf_.n);
    prefixes_.clear();
    for (int t = 0; t < want; ++t) {
      int j = want == 1 ? 0
                        : static_cast<int>(std::llround(
                              static_cast<double>(t) * (buf_.n - 1) /
                              (want - 1)));
      if (prefixes_.empty() || prefixes_.back() != j) prefixes_.push_back(j);
    }
    // The filter stays conservative with any axis subset; cap the key size.
    axes_per_prefix_ = std::min(
        buf_.dim, kMaxAxes / static_cast<int>(prefixes_.size()));
  }

  int cell_of(double coord) const {
    int c = static_cast<int>(coord * cells_per_axis_);  // coords >= 0
    if (c >= cells_per_axis_) c = cells_per_axis_ - 1;
    return c;
  }

  uint64_t key_of(std::size_t i) const {
    uint64_t h = split_branches_ ? rng::mix64(buf_.branch[i]) : 0x9e37u;
    for (int j : prefixes_) {
      const double* p = buf_.at(i, j);
      for (int a = 0; a < axes_per_prefix_; ++a)
        h = rng::combine(h, static_cast<uint64_t>(cell_of(p[a])));
    }
    return h;
  }

  void insert(std::size_t i) { buckets_.insert(key_of(i), i); }

  static constexpr int kMaxAxes = 16;

  // Candidate points whose cells are within +-1 of i's on every indexed
  // axis. May contain false positives (hash union), never misses a point
  // within eps. The own cell is visited first, where conflicts are most
  // likely.
  template <typename Fn>
  bool visit_candidates(std::size_t i, Fn&& fn) const {
    int opts[kMaxAxes][3];
    int opt_count[kMaxAxes];
    int own[kMaxAxes];
    int axes = 0;
    for (int j : prefixes_) {
      const double* p = buf_.at(i, j);
      for (int a = 0; a < axes_per_prefix_; ++a, ++axes) {
        const int c = cell_of(p[a]);
        own[axes] = c;
        const bool wraps = buf_.axis_wraps(buf_.branch[i], a);
        int count = 0;
        for (int off = -1; off <= 1; ++off) {
          int cc = c + off;
          if (wraps) {
            cc = (cc % cells_per_axis_ + cells_per_axis_) % cells_per_axis_;
          } else if (cc < 0 || cc >= cells_per_axis_) {
            continue;
          }
          bool dup = false;
          for (int t = 0; t < count; ++t)
            if (opts[axes][t] == cc) dup = true;
          if (!dup) opts[axes][count++] = cc;
        }
        opt_count[axes] = count;
      }
    }
    const uint64_t base =
        split_branches_ ? rng::mix64(buf_.branch[i]) : 0x9e37u;

    uint64_t own_hash = base;
    for (int t = 0; t < axes; ++t)
      own_hash = rng::combine(own_hash, static_cast<uint64_t>(own[t]));
    if (buckets_.visit(own_hash, fn)) return true;

    int cursor[kMaxAxes] = {0};
    while (true) {
      uint64_t h = base;
      bool is_own = true;
      for (int t = 0; t < axes; ++t) {
        const int cell = opts[t][cursor[t]];
        is_own = is_own && cell == own[t];
        h = rng::combine(h, static_cast<uint64_t>(cell));
      }
      if (!is_own && buckets_.visit(h, fn)) return true;
      int t = axes - 1;
      while (t >= 0 && ++cursor[t] == opt_count[t]) {
        cursor[t] = 0;
        --t;
      }
      if (t < 0) break;
    }
    return false;
  }

  double eps_rounded() const { return eps_r_; }

 private:
  const OrbitBuffer& buf_;
  double eps_r_ = 0.0;
  double width_ = 1.0;
  int cells_per_axis_ = 1;
  int axes_per_prefix_ = 1;
  bool split_branches_ = false;
  std::vector<int> prefixes_;
  FlatBuckets buckets_;
};

}  // namespace

PackingResult max_separated_greedy(const OrbitBuffer& buf, double eps,
                                   Word word) {
  if (eps <= 0.0 || canon_round(eps) <= 0.0)
    throw DomainError("separation scale eps must be positive");
  PackingResult res;
  res.method = PackingResult::Method::greedy;
  res.epsilon = eps;
  res.word = std::move(word);
  if (buf.count == 0) return res;

  PrefixCellIndex index(buf, eps);
  const CmpThreshold thr = CmpThreshold::leq(eps);
  for (std::size_t i = 0; i < buf.count; ++i) {
    const bool conflict = index.visit_candidates(i, [&](std::size_t kept) {
      return bowen_within(buf, kept, i, thr);
    });
    if (!conflict) {
      res.certificate.push_back(static_cast<uint32_t>(i));
      index.insert(i);
    }
  }
  res.count = res.certificate.size();
  return res;
}

PackingResult max_separated_greedy(const SampleCloud& cloud,
                                   const GeneratorSet& g, const Word& w,
                                   double eps) {
  if (w.length() == 0) throw DomainError("counting needs |w| >= 1");
  if (cloud.empty()) {
    PackingResult r;
    r.epsilon = eps;
    r.word = w;
    return r;
  }
  auto buf = semigroup::compute_orbits(g, w, cloud);
  return max_separated_greedy(buf, eps, w);
}

PackingResult min_spanning_greedy(const OrbitBuffer& buf, double eps,
                                  Word word) {
  if (eps <= 0.0 || canon_round(eps) <= 0.0)
    throw DomainError("covering scale eps must be positive");
  PackingResult res;
  res.method = PackingResult::Method::greedy;
  res.epsilon = eps;
  res.word = std::move(word);
  if (buf.count == 0) return res;

  PrefixCellIndex index(buf, eps);
  const CmpThreshold thr = CmpThreshold::lt(eps);
  for (std::size_t i = 0; i < buf.count; ++i) index.insert(i);

  // Open-ball adjacency; every ball contains its center.
  std::vector<std::vector<uint32_t>> ball(buf.count);
  for (std::size_t i = 0; i < buf.count; ++i) {
    index.visit_candidates(i, [&](std::size_t cand) {
      if (bowen_within(buf, i, cand, thr))
        ball[i].push_back(static_cast<uint32_t>(cand));
      return false;
    });
    std::sort(ball[i].begin(), ball[i].end());
  }

  // Lazy greedy max-cover: stale gains only overestimate, so an entry is
  // selected once its recomputed gain beats the best stale key.
  struct Entry {
    std::size_t gain;
    uint32_t idx;
    bool operator<(const Entry& o) const {
      if (gain != o.gain) return gain < o.gain;  // max-heap on gain
      return idx > o.idx;                        // then smallest index
    }
  };
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < buf.count; ++i)
    heap.push(Entry{ball[i].size(), static_cast<uint32_t>(i)});

  std::vector<uint8_t> covered(buf.count, 0);
  std::size_t remaining = buf.count;
  while (remaining > 0) {
    if (heap.empty())
      throw InvariantViolation("spanning greedy ran out of candidates");
    Entry top = heap.top();
    heap.pop();
    std::size_t gain = 0;
    for (uint32_t q : ball[top.idx])
      if (!covered[q]) ++gain;
    if (gain == 0) continue;
    Entry fresh{gain, top.idx};
    if (!heap.empty() && fresh < heap.top()) {
      heap.push(fresh);
      continue;
    }
    res.certificate.push_back(top.idx);
    for (uint32_t q : ball[top.idx]) {
      if (!covered[q]) {
        covered[q] = 1;
        --remaining;
      }
    }
  }
  std::sort(res.certificate.begin(), res.certificate.end());
  res.count = res.certificate.size();
  return res;
}

PackingResult min_spanning_greedy(const SampleCloud& cloud,
                                  const GeneratorSet& g, const Word& w,
                                  double eps) {
  if (w.length() == 0) throw DomainError("counting needs |w| >= 1");
  if (cloud.empty()) {
    PackingResult r;
    r.epsilon = eps;
    r.word = w;
    return r;
  }
  auto buf = semigroup::compute_orbits(g, w, cloud);
  return min_spanning_greedy(buf, eps, w);
}

namespace {

void check_oracle_budget(std::size_t count, std::size_t budget) {
  if (count > budget || count > 63)
    throw CapacityError(
        "exact oracle supports at most " + std::to_string(budget) +
        " points; use the greedy routines for larger clouds");
}

struct MisSearch {
  const std::vector<uint64_t>& conflicts;
  uint64_t best_set = 0;
  int best = 0;

  void rec(uint64_t cand, uint64_t chosen, int size) {
    if (size + __builtin_popcountll(cand) <= best) return;
    if (cand == 0) {
      if (size > best) {
        best = size;
        best_set = chosen;
      }
      return;
    }
    const int v = __builtin_ctzll(cand);
    rec(cand & ~(conflicts[v] | (1ULL << v)), chosen | (1ULL << v), size + 1);
    rec(cand & ~(1ULL << v), chosen, size);
  }
};

}  // namespace

PackingResult exact_packing(const OrbitBuffer& buf, double eps, Word word,
                            std::size_t budget) {
  if (eps <= 0.0) throw DomainError("separation scale eps must be positive");
  check_oracle_budget(buf.count, budget);
  PackingResult res;
  res.method = PackingResult::Method::exact;
  res.epsilon = eps;
  res.word = std::move(word);
  if (buf.count == 0) return res;

  const CmpThreshold thr = CmpThreshold::leq(eps);
  const std::size_t m = buf.count;
  std::vector<uint64_t> conflicts(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (bowen_within(buf, i, j, thr)) {
        conflicts[i] |= 1ULL << j;
        conflicts[j] |= 1ULL << i;
      }

  MisSearch search{conflicts};
  search.rec((m == 64 ? ~0ULL : ((1ULL << m) - 1)), 0, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (search.best_set & (1ULL << i))
      res.certificate.push_back(static_cast<uint32_t>(i));
  res.count = res.certificate.size();
  return res;
}

PackingResult exact_packing(const SampleCloud& cloud, const GeneratorSet& g,
                            const Word& w, double eps, std::size_t budget) {
  if (w.length() == 0) throw DomainError("counting needs |w| >= 1");
  check_oracle_budget(cloud.size(), budget);
  if (cloud.empty()) {
    PackingResult r;
    r.method = PackingResult::Method::exact;
    r.epsilon = eps;
    r.word = w;
    return r;
  }
  auto buf = semigroup::compute_orbits(g, w, cloud);
  return exact_packing(buf, eps, w, budget);
}

namespace {

struct CoverSearch {
  const std::vector<uint64_t>& balls;
  uint64_t full;
  std::size_t max_ball;
  std::size_t best;
  std::vector<uint32_t> best_set, cur;

  void rec(uint64_t uncovered) {
    if (uncovered == 0) {
      if (cur.size() < best) {
        best = cur.size();
        best_set = cur;
      }
      return;
    }
    const std::size_t lower =
        (static_cast<std::size_t>(__builtin_popcountll(uncovered)) +
         max_ball - 1) /
        max_ball;
    if (cur.size() + lower >= best) return;

    // Branch on the uncovered element covered by the fewest balls.
    int elem = -1;
    int fewest = 1 << 30;
    for (int e = 0; e < 64; ++e) {
      if (!(uncovered & (1ULL << e))) continue;
      int cnt = 0;
      for (std::size_t b = 0; b < balls.size(); ++b)
        if (balls[b] & (1ULL << e)) ++cnt;
      if (cnt < fewest) {
        fewest = cnt;
        elem = e;
      }
    }
    if (elem < 0 || fewest == 0)
      throw InvariantViolation("open ball fails to cover its own center");
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (!(balls[b] & (1ULL << elem))) continue;
      cur.push_back(static_cast<uint32_t>(b));
      rec(uncovered & ~balls[b]);
      cur.pop_back();
    }
  }
};

}  // namespace

PackingResult exact_covering(const OrbitBuffer& buf, double eps, Word word,
                             std::size_t budget) {
  if (eps <= 0.0 || canon_round(eps) <= 0.0)
    throw DomainError("covering scale eps must be positive");
  check_oracle_budget(buf.count, budget);
  PackingResult res;
  res.method = PackingResult::Method::exact;
  res.epsilon = eps;
  res.word = std::move(word);
  if (buf.count == 0) return res;

  const CmpThreshold thr = CmpThreshold::lt(eps);
  const std::size_t m = buf.count;
  std::vector<uint64_t> balls(m, 0);
  std::size_t max_ball = 1;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (bowen_within(buf, i, j, thr))
        balls[i] |= 1ULL << j;
    max_ball = std::max(
        max_ball, static_cast<std::size_t>(__builtin_popcountll(balls[i])));
  }

  CoverSearch search{balls, (m == 64 ? ~0ULL : ((1ULL << m) - 1)), max_ball,
                     m + 1, {}, {}};
  search.rec(search.full);
  res.certificate = search.best_set;
  std::sort(res.certificate.begin(), res.certificate.end());
  res.count = res.certificate.size();
  return res;
}

PackingResult exact_covering(const SampleCloud& cloud, const GeneratorSet& g,
                             const Word& w, double eps, std::size_t budget) {
  if (w.length() == 0) throw DomainError("counting needs |w| >= 1");
  check_oracle_budget(cloud.size(), budget);
  if (cloud.empty()) {
    PackingResult r;
    r.method = PackingResult::Method::exact;
    r.epsilon = eps;
    r.word = w;
    return r;
  }
  auto buf = semigroup::compute_orbits(g, w, cloud);
  return exact_covering(buf, eps, w, budget);
}

CellSignatureTable signature_covering_count(const SampleCloud& cloud,
                                            const GeneratorSet& g,
                                            const Word& w, double cell_width,
                                            bool keep_populations) {
  if (w.length() == 0) throw DomainError("counting needs |w| >= 1");
  if (cell_width <= 0.0) throw DomainError("cell width must be positive");
  CellSignatureTable table;
  table.cell_width = cell_width;
  if (cloud.empty()) return table;

  const int n = static_cast<int>(w.length());
  const int dim = cloud.space().dim();
  // A signature is the branch tag followed by n * dim cell indices.
  const std::size_t entry = static_cast<std::size_t>(n) * dim + 1;

  std::vector<int32_t> arena;
  std::unordered_map<uint64_t, std::vector<uint32_t>> seen;
  std::vector<uint32_t> pops;
  std::vector<int32_t> sig(entry);
  std::vector<double> cur(dim, 0.0), nxt(dim, 0.0);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const spaces::Point& x = cloud.points()[i];
    sig[0] = x.branch;
    const int bd = static_cast<int>(x.coords.size());
    std::fill(cur.begin(), cur.end(), 0.0);
    for (int a = 0; a < bd; ++a) cur[a] = x.coords[a];
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < dim; ++a)
        sig[1 + static_cast<std::size_t>(j) * dim + a] =
            static_cast<int32_t>(std::floor(cur[a] / cell_width));
      if (j + 1 < n) {
        semigroup::apply_map_coords(g.maps()[w.indices[j] - 1], x.branch,
                                    cur.data(), nxt.data(), bd);
        std::swap(cur, nxt);
      }
    }
    uint64_t h = 0x5167u;
    for (int32_t v : sig)
      h = rng::combine(h, static_cast<uint64_t>(static_cast<uint32_t>(v)));
    auto& ids = seen[h];
    bool found = false;
    for (uint32_t id : ids) {
      const int32_t* stored = arena.data() + static_cast<std::size_t>(id) * entry;
      if (std::equal(sig.begin(), sig.end(), stored)) {
        found = true;
        if (keep_populations) ++pops[id];
        break;
      }
    }
    if (!found) {
      const uint32_t id = static_cast<uint32_t>(arena.size() / entry);
      arena.insert(arena.end(), sig.begin(), sig.end());
      ids.push_back(id);
      if (keep_populations) pops.push_back(1);
    }
  }
  table.occupied = arena.size() / entry;
  if (keep_populations) table.populations = std::move(pops);
  return table;
}

bool certificate_is_separated(const OrbitBuffer& buf,
                              const std::vector<uint32_t>& cert, double eps) {
  const CmpThreshold thr = CmpThreshold::leq(eps);
  for (std::size_t a = 0; a < cert.size(); ++a)
    for (std::size_t b = a + 1; b < cert.size(); ++b)
      if (bowen_within(buf, cert[a], cert[b], thr)) return false;
  return true;
}

bool certificate_covers(const OrbitBuffer& buf,
                        const std::vector<uint32_t>& cert, double eps,
                        bool strict) {
  const CmpThreshold thr =
      strict ? CmpThreshold::lt(eps) : CmpThreshold::leq(eps);
  for (std::size_t i = 0; i < buf.count; ++i) {
    bool ok = false;
    for (uint32_t c : cert)
      if (bowen_within(buf, i, c, thr)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

SandwichReport sandwich_audit(const SampleCloud& cloud, const GeneratorSet& g,
                              const Word& w, double eps, std::size_t budget) {
  if (w.length() == 0) throw DomainError("counting needs |w| >= 1");
  check_oracle_budget(cloud.size(), budget);
  SandwichReport rep;
  rep.epsilon = eps;
  rep.word = w;
  if (cloud.empty()) return rep;

  auto buf = semigroup::compute_orbits(g, w, cloud);
  rep.b_exact = exact_covering(buf, eps, w, budget).count;
  rep.s_exact = exact_packing(buf, eps, w, budget).count;
  rep.b_half_exact = exact_covering(buf, eps / 2.0, w, budget).count;
  rep.greedy_sep = max_separated_greedy(buf, eps, w).count;
  rep.greedy_span = min_spanning_greedy(buf, eps, w).count;

  if (!(rep.b_exact <= rep.s_exact && rep.s_exact <= rep.b_half_exact))
    throw InvariantViolation("sandwich b(e) <= s(e) <= b(e/2) violated");
  if (rep.greedy_sep < rep.b_exact || rep.greedy_sep > rep.s_exact)
    throw InvariantViolation("greedy separated count left its bracket");
  const double ub = static_cast<double>(rep.b_exact) *
                    (1.0 + std::log(static_cast<double>(cloud.size())));
  if (rep.greedy_span < rep.b_exact ||
      static_cast<double>(rep.greedy_span) > ub + 1e-9)
    throw InvariantViolation("greedy spanning count left its bracket");
  return rep;
}

}  // namespace entroact::counting
