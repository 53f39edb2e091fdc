#include "entroact/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "entroact/errors.hpp"

namespace entroact::spaces {

Space Space::circle() { return Space(Kind::circle, 1); }
Space Space::interval01() { return Space(Kind::interval01, 1); }

Space Space::torus(int d) {
  if (d < 1) throw DomainError("torus dimension must be >= 1");
  return Space(Kind::torus, d);
}

Space Space::disjoint_union(Space left, Space right) {
  if (left.is_union() || right.is_union())
    throw DomainError(
        "nested disjoint unions are not supported (points carry a single "
        "branch tag)");
  Space s(Kind::disjoint_union, std::max(left.dim(), right.dim()));
  s.left_ = std::make_shared<const Space>(std::move(left));
  s.right_ = std::make_shared<const Space>(std::move(right));
  return s;
}

const Space& Space::left() const {
  if (!is_union()) throw DomainError("left(): not a disjoint union");
  return *left_;
}

const Space& Space::right() const {
  if (!is_union()) throw DomainError("right(): not a disjoint union");
  return *right_;
}

double Space::diameter() const {
  switch (kind_) {
    case Kind::circle:
      return 0.5;
    case Kind::interval01:
      return 1.0;
    case Kind::torus:
      return 0.5;
    case Kind::disjoint_union:
      return 1.0;  // cross-branch distance dominates
  }
  return 0.0;
}

bool Space::axis_wraps(int axis, uint8_t branch) const {
  switch (kind_) {
    case Kind::circle:
    case Kind::torus:
      return true;
    case Kind::interval01:
      return false;
    case Kind::disjoint_union:
      return (branch == 0 ? *left_ : *right_).axis_wraps(axis, 0);
  }
  return false;
}

int Space::branch_dim(uint8_t branch) const {
  if (!is_union()) return dim_;
  return branch == 0 ? left_->dim() : right_->dim();
}

bool Space::operator==(const Space& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_) return false;
  if (kind_ == Kind::disjoint_union)
    return *left_ == *other.left_ && *right_ == *other.right_;
  return true;
}

std::string Space::describe() const {
  switch (kind_) {
    case Kind::circle:
      return "circle";
    case Kind::interval01:
      return "interval01";
    case Kind::torus:
      return "torus(" + std::to_string(dim_) + ")";
    case Kind::disjoint_union:
      return "union(" + left_->describe() + "," + right_->describe() + ")";
  }
  return "?";
}

bool point_less(const Point& a, const Point& b) {
  if (a.branch != b.branch) return a.branch < b.branch;
  return std::lexicographical_compare(a.coords.begin(), a.coords.end(),
                                      b.coords.begin(), b.coords.end());
}

namespace {

double wrap01(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;  // rounding at the seam
  if (r < 0.0) r += 1.0;
  return r;
}

double circ_dist(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

const Space& branch_space(const Space& space, uint8_t branch) {
  if (!space.is_union()) return space;
  return branch == 0 ? space.left() : space.right();
}

}  // namespace

Point canonicalize(const Space& space, Point p) {
  const Space& comp = branch_space(space, p.branch);
  if (!space.is_union() && p.branch != 0)
    throw DomainError("branch tag on a non-union space");
  if (static_cast<int>(p.coords.size()) != comp.dim())
    throw DomainError("coordinate count does not match space dimension");
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    double& c = p.coords[i];
    if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
    if (comp.axis_wraps(static_cast<int>(i), 0)) {
      c = wrap01(c);
    } else {
      if (c < 0.0 && c > -1e-12) c = 0.0;
      if (c > 1.0 && c < 1.0 + 1e-12) c = 1.0;
      if (c < 0.0 || c > 1.0)
        throw DomainError("interval coordinate outside [0,1]");
    }
  }
  return p;
}

void validate_point(const Space& space, const Point& p) {
  const Space& comp = branch_space(space, p.branch);
  if (!space.is_union() && p.branch != 0)
    throw DomainError("branch tag on a non-union space");
  if (static_cast<int>(p.coords.size()) != comp.dim())
    throw DomainError("coordinate count does not match space dimension");
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    double c = p.coords[i];
    if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
    if (comp.axis_wraps(static_cast<int>(i), 0)) {
      if (c < 0.0 || c >= 1.0)
        throw DomainError("circle coordinate outside canonical [0,1)");
    } else {
      if (c < 0.0 || c > 1.0)
        throw DomainError("interval coordinate outside [0,1]");
    }
  }
}

double distance(const Space& space, const Point& x, const Point& y) {
  validate_point(space, x);
  validate_point(space, y);
  if (space.is_union() && x.branch != y.branch) return 1.0;
  const Space& comp = branch_space(space, x.branch);
  double best = 0.0;
  for (int i = 0; i < comp.dim(); ++i) {
    double d = comp.axis_wraps(i, 0) ? circ_dist(x.coords[i], y.coords[i])
                                     : std::fabs(x.coords[i] - y.coords[i]);
    best = std::max(best, d);
  }
  return best;
}

SampleCloud::SampleCloud(Space space, std::vector<Point> points,
                         std::vector<double> weights, double mesh,
                         std::string label)
    : space_(std::move(space)),
      points_(std::move(points)),
      weights_(std::move(weights)),
      mesh_(mesh),
      label_(std::move(label)) {
  if (mesh_ <= 0.0) throw DomainError("cloud mesh must be positive");
  if (weights_.empty() && !points_.empty())
    weights_.assign(points_.size(), 1.0 / static_cast<double>(points_.size()));
  if (weights_.size() != points_.size())
    throw DomainError("weight count does not match point count");
  for (auto& p : points_) validate_point(space_, p);

  // Sort into canonical order, carrying weights along.
  std::vector<std::size_t> order(points_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return point_less(points_[a], points_[b]);
  });
  std::vector<Point> sorted_p;
  std::vector<double> sorted_w;
  sorted_p.reserve(points_.size());
  sorted_w.reserve(points_.size());
  for (std::size_t i : order) {
    sorted_p.push_back(std::move(points_[i]));
    sorted_w.push_back(weights_[i]);
  }
  points_ = std::move(sorted_p);
  weights_ = std::move(sorted_w);

  // Compensated sum: the 1e-12 check must not drown in accumulation error
  // on large clouds.
  double total = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (weights_[i] < 0.0) throw DomainError("negative cloud weight");
    const double y = weights_[i] - carry;
    const double t = total + y;
    carry = (t - total) - y;
    total = t;
    if (i > 0 && points_[i] == points_[i - 1])
      throw DomainError("cloud points must be pairwise distinct");
  }
  if (!points_.empty() && std::fabs(total - 1.0) > 1e-12)
    throw DomainError("cloud weights must sum to 1");
}

SampleCloud::SampleCloud(Space space, std::vector<Point> points, double mesh,
                         std::string label)
    : SampleCloud(std::move(space), std::move(points), std::vector<double>{},
                  mesh, std::move(label)) {}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string SampleCloud::to_csv() const {
  std::ostringstream out;
  out << "idx,branch";
  for (int i = 0; i < space_.dim(); ++i) out << ",c" << i;
  out << ",weight\n";
  for (std::size_t i = 0; i < points_.size(); ++i) {
    out << i << "," << int(points_[i].branch);
    for (int a = 0; a < space_.dim(); ++a) {
      double c = a < static_cast<int>(points_[i].coords.size())
                     ? points_[i].coords[a]
                     : 0.0;
      out << "," << format_float(c);
    }
    out << "," << format_float(weights_[i]) << "\n";
  }
  return out.str();
}

namespace {

// Enumerates a lattice over one non-union component in lexicographic order
// with a per-axis admissible index list.
void emit_product(const std::vector<std::vector<int>>& axis_indices,
                  int resolution, uint8_t branch, std::vector<Point>& out) {
  const int d = static_cast<int>(axis_indices.size());
  for (const auto& idx : axis_indices)
    if (idx.empty()) return;
  std::vector<std::size_t> cursor(d, 0);
  while (true) {
    Point p;
    p.branch = branch;
    p.coords.resize(d);
    for (int a = 0; a < d; ++a)
      p.coords[a] =
          static_cast<double>(axis_indices[a][cursor[a]]) / resolution;
    out.push_back(std::move(p));
    int a = d - 1;
    while (a >= 0 && ++cursor[a] == axis_indices[a].size()) {
      cursor[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
}

std::size_t checked_product(const std::vector<std::vector<int>>& axes,
                            std::size_t cap) {
  std::size_t n = 1;
  for (const auto& ax : axes) {
    if (ax.empty()) return 0;
    if (n > cap / ax.size() + 1) return cap + 1;
    n *= ax.size();
    if (n > cap) return cap + 1;
  }
  return n;
}

std::vector<std::vector<int>> full_axes(int dim, int resolution) {
  std::vector<int> all(resolution);
  for (int k = 0; k < resolution; ++k) all[k] = k;
  return std::vector<std::vector<int>>(dim, all);
}

}  // namespace

SampleCloud sample_grid(const Space& space, int resolution,
                        std::size_t max_points) {
  if (resolution < 2) throw DomainError("grid resolution must be >= 2");
  std::vector<Point> pts;
  if (space.is_union()) {
    auto la = full_axes(space.left().dim(), resolution);
    auto ra = full_axes(space.right().dim(), resolution);
    std::size_t n = checked_product(la, max_points);
    std::size_t nr = checked_product(ra, max_points);
    if (n > max_points || nr > max_points || n + nr > max_points)
      throw CapacityError(
          "grid would exceed the point budget; lower the resolution or raise "
          "max_points");
    pts.reserve(n + nr);
    emit_product(la, resolution, 0, pts);
    emit_product(ra, resolution, 1, pts);
  } else {
    auto axes = full_axes(space.dim(), resolution);
    std::size_t n = checked_product(axes, max_points);
    if (n > max_points)
      throw CapacityError(
          "grid would exceed the point budget; lower the resolution or raise "
          "max_points");
    pts.reserve(n);
    emit_product(axes, resolution, 0, pts);
  }
  return SampleCloud(space, std::move(pts), 0.5 / resolution,
                     space.describe() + "-grid" + std::to_string(resolution));
}

namespace {

// Admissible axis indices k with |k/res - c| <= radius in the axis metric.
std::vector<int> ball_axis(double c, double radius, int resolution,
                           bool wraps) {
  std::vector<int> keep;
  const double eps_r = canon_round(radius);
  if (wraps) {
    std::set<int> uniq;
    int lo = static_cast<int>(std::ceil((c - radius) * resolution - 1e-9));
    int hi = static_cast<int>(std::floor((c + radius) * resolution + 1e-9));
    for (int k = lo; k <= hi; ++k) {
      int kk = ((k % resolution) + resolution) % resolution;
      if (canon_round(circ_dist(static_cast<double>(kk) / resolution, c)) <=
          eps_r)
        uniq.insert(kk);
    }
    keep.assign(uniq.begin(), uniq.end());
  } else {
    for (int k = 0; k < resolution; ++k) {
      if (canon_round(std::fabs(static_cast<double>(k) / resolution - c)) <=
          eps_r)
        keep.push_back(k);
    }
  }
  return keep;
}

Point nearest_grid_point(const Space& space, const Point& center,
                         int resolution) {
  const Space& comp =
      space.is_union() ? (center.branch == 0 ? space.left() : space.right())
                       : space;
  Point p;
  p.branch = center.branch;
  p.coords.resize(comp.dim());
  for (int a = 0; a < comp.dim(); ++a) {
    int k = static_cast<int>(std::floor(center.coords[a] * resolution + 0.5));
    if (comp.axis_wraps(a, 0)) {
      k = ((k % resolution) + resolution) % resolution;
    } else {
      k = std::max(0, std::min(resolution - 1, k));
    }
    p.coords[a] = static_cast<double>(k) / resolution;
  }
  return p;
}

}  // namespace

SampleCloud sample_ball(const Space& space, const Point& center, double radius,
                        int resolution, std::size_t max_points) {
  if (radius <= 0.0) throw DomainError("ball radius must be positive");
  if (resolution < 2) throw DomainError("grid resolution must be >= 2");
  validate_point(space, center);

  std::vector<Point> pts;
  auto add_branch = [&](const Space& comp, uint8_t branch, bool whole) {
    std::vector<std::vector<int>> axes;
    for (int a = 0; a < comp.dim(); ++a) {
      axes.push_back(whole ? full_axes(1, resolution)[0]
                           : ball_axis(center.coords[a], radius, resolution,
                                       comp.axis_wraps(a, 0)));
    }
    if (checked_product(axes, max_points) > max_points)
      throw CapacityError(
          "ball sample would exceed the point budget; lower the resolution "
          "or raise max_points");
    emit_product(axes, resolution, branch, pts);
  };

  if (space.is_union()) {
    const bool cross = canon_round(radius) >= 1.0;  // other branch at dist 1
    if (center.branch == 0) {
      add_branch(space.left(), 0, false);
      if (cross) add_branch(space.right(), 1, true);
    } else {
      if (cross) add_branch(space.left(), 0, true);
      add_branch(space.right(), 1, false);
    }
  } else {
    add_branch(space, 0, false);
  }

  if (pts.empty()) pts.push_back(nearest_grid_point(space, center, resolution));

  return SampleCloud(space, std::move(pts), 0.5 / resolution,
                     space.describe() + "-ball");
}

}  // namespace entroact::spaces
