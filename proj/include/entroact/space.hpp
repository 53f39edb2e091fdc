#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace entroact::spaces {

/// Compact metric spaces: the unit circle R/Z, the interval [0,1], the
/// d-torus with the sup metric, and two-branch disjoint unions whose
/// cross-branch distance is the constant 1. Unions may not nest (a point
/// carries a single branch tag).
class Space {
 public:
  enum class Kind { circle, interval01, torus, disjoint_union };

  static Space circle();
  static Space interval01();
  static Space torus(int d);
  static Space disjoint_union(Space left, Space right);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_union() const { return kind_ == Kind::disjoint_union; }
  const Space& left() const;
  const Space& right() const;

  /// Largest distance realized between any two points.
  double diameter() const;

  /// True when the given coordinate axis wraps (circle/torus component).
  bool axis_wraps(int axis, uint8_t branch) const;

  /// Dimension of the branch a point lives on (== dim() except for unions
  /// whose components differ in dimension).
  int branch_dim(uint8_t branch) const;

  bool operator==(const Space& other) const;
  bool operator!=(const Space& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  Space(Kind k, int d) : kind_(k), dim_(d) {}
  Kind kind_;
  int dim_;
  std::shared_ptr<const Space> left_, right_;
};

struct Point {
  std::vector<double> coords;
  uint8_t branch = 0;  // 0 = left (or the whole space), 1 = right

  bool operator==(const Point& other) const {
    return branch == other.branch && coords == other.coords;
  }
};

/// Strict ordering: branch, then coordinates lexicographically. This is the
/// canonical point order used everywhere (cloud layout, greedy scans,
/// tie-breaking) so that results are reproducible.
bool point_less(const Point& a, const Point& b);

/// Wraps circle/torus coordinates into [0,1) and validates interval
/// coordinates against [0,1] (values within 1e-12 outside are snapped).
Point canonicalize(const Space& space, Point p);

/// Throws DomainError unless p is a canonical point of `space`.
void validate_point(const Space& space, const Point& p);

/// The metric: circle min(|dx|, 1-|dx|); torus sup of per-axis circle
/// metrics; interval |dx|; unions use the component metric on a shared
/// branch and the constant 1 across branches.
double distance(const Space& space, const Point& x, const Point& y);

/// A finite weighted point sample standing in for a compact set K.
/// Points are stored in canonical order, pairwise distinct, with weights
/// summing to 1. `mesh` records half the generating grid step (an upper
/// bound scale for the distance from K to the cloud).
class SampleCloud {
 public:
  SampleCloud(Space space, std::vector<Point> points,
              std::vector<double> weights, double mesh, std::string label);

  /// Uniform weights.
  SampleCloud(Space space, std::vector<Point> points, double mesh,
              std::string label);

  const Space& space() const { return space_; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  double mesh() const { return mesh_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// CSV export: header `idx,branch,c0..c{d-1},weight`, floats with 17
  /// significant digits. Coordinates beyond a branch's dimension print 0.
  std::string to_csv() const;

 private:
  Space space_;
  std::vector<Point> points_;
  std::vector<double> weights_;
  double mesh_;
  std::string label_;
};

inline constexpr std::size_t kDefaultMaxGridPoints = std::size_t{1} << 22;

/// Uniform lattice {k/resolution} per axis, lexicographic order,
/// mesh = 1/(2*resolution). Deterministic. Throws CapacityError when the
/// lattice would exceed `max_points`.
SampleCloud sample_grid(const Space& space, int resolution,
                        std::size_t max_points = kDefaultMaxGridPoints);

/// Intersection of the full lattice with the closed ball about `center`;
/// the lattice point nearest to `center` is always included, so the result
/// is never empty.
SampleCloud sample_ball(const Space& space, const Point& center,
                        double radius, int resolution,
                        std::size_t max_points = kDefaultMaxGridPoints);

/// Values are compared only after rounding to the 1e-15 lattice, so that
/// greedy scans and exact oracles resolve ties identically.
inline double canon_round(double v) {
  return std::nearbyint(v * 1e15) / 1e15;
}

std::string format_float(double v);  // 17 significant digits

}  // namespace entroact::spaces
