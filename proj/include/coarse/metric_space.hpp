#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coarse/common.hpp"

namespace coarse {

/// A subset of a finite metric space, stored as sorted unique point ids.
struct Selection {
  std::vector<PointId> ids;

  Selection() = default;
  explicit Selection(std::vector<PointId> v) : ids(std::move(v)) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }

  bool empty() const { return ids.empty(); }
  std::size_t size() const { return ids.size(); }
  bool contains(PointId p) const {
    return std::binary_search(ids.begin(), ids.end(), p);
  }
};

/// A finite (pseudo)metric space: the universe for every computation.
///
/// Generators of unbounded models mark themselves as truncations and record
/// how far from the basepoint the sample is faithful.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  FiniteMetricSpace(int n, std::vector<double> dist_table)
      : n_(n), dist_(std::move(dist_table)) {
    if (static_cast<std::size_t>(n_) * n_ != dist_.size())
      throw BadInput("distance table size does not match point count");
  }

  int size() const { return n_; }

  double dist(PointId a, PointId b) const { return dist_[static_cast<std::size_t>(a) * n_ + b]; }
  void set_dist(PointId a, PointId b, double d) {
    dist_[static_cast<std::size_t>(a) * n_ + b] = d;
    dist_[static_cast<std::size_t>(b) * n_ + a] = d;
  }

  double dist_to_set(PointId x, const Selection& s) const {
    double best = std::numeric_limits<double>::infinity();
    for (PointId a : s.ids) best = std::min(best, dist(x, a));
    return best;
  }

  /// min over vertices of the tuple of the distance to the selection.
  double dist_tuple_to_set(const Tuple& t, const Selection& s) const {
    double best = std::numeric_limits<double>::infinity();
    for (PointId v : t) best = std::min(best, dist_to_set(v, s));
    return best;
  }

  double diameter() const {
    double d = 0;
    for (PointId a = 0; a < n_; ++a)
      for (PointId b = a + 1; b < n_; ++b) d = std::max(d, dist(a, b));
    return d;
  }

  double tuple_diameter(const Tuple& t) const {
    double d = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j) d = std::max(d, dist(t[i], t[j]));
    return d;
  }

  Selection all_points() const {
    std::vector<PointId> v(n_);
    std::iota(v.begin(), v.end(), 0);
    return Selection(std::move(v));
  }

  // -- optional structure ---------------------------------------------------

  std::optional<PointId> basepoint;
  bool unbounded_model = false;
  double truncation_radius = 0;
  bool pseudometric = false;

  /// Coordinate labels; empty for abstract spaces loaded from tables.
  std::vector<std::vector<double>> coords;
  std::vector<std::string> labels;

  PointId require_basepoint() const {
    if (!basepoint) throw MissingBasepoint("space has no basepoint");
    return *basepoint;
  }

  // -- validation -----------------------------------------------------------

  void validate(bool strict_metric, double sym_tol = 1e-12) const {
    for (PointId a = 0; a < n_; ++a) {
      if (std::fabs(dist(a, a)) > sym_tol)
        throw BadInput("nonzero diagonal entry at point " + std::to_string(a));
      for (PointId b = 0; b < n_; ++b) {
        double d = dist(a, b);
        if (d < -sym_tol) throw NegativeDistance("negative distance between points");
        if (std::fabs(d - dist(b, a)) > sym_tol)
          throw AsymmetricInput("distance table is not symmetric");
        if (!pseudometric && a != b && d <= kDistTol && strict_metric)
          throw TriangleViolation("zero distance between distinct points in strict metric");
      }
    }
    if (strict_metric) assert_triangle_inequality();
    if (unbounded_model && !basepoint)
      throw MissingBasepoint("unbounded model requires a basepoint");
  }

  void assert_triangle_inequality() const {
    for (PointId a = 0; a < n_; ++a)
      for (PointId b = 0; b < n_; ++b)
        for (PointId c = 0; c < n_; ++c)
          if (dist(a, c) > dist(a, b) + dist(b, c) + kDistTol)
            throw TriangleViolation("triangle inequality violated");
  }

 private:
  int n_ = 0;
  std::vector<double> dist_;  // row-major symmetric
};

struct FromTableOptions {
  bool strict_metric = false;
  double symmetry_tol = 1e-12;
};

inline FiniteMetricSpace from_distance_matrix(const std::vector<std::vector<double>>& table,
                                              FromTableOptions opts = {}) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw BadInput("empty distance table");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw BadInput("distance table is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  FiniteMetricSpace space(n, std::move(flat));
  space.validate(opts.strict_metric, opts.symmetry_tol);
  return space;
}

inline FiniteMetricSpace from_points(std::vector<std::vector<double>> pts) {
  const int n = static_cast<int>(pts.size());
  if (n == 0) throw BadInput("empty point cloud");
  const std::size_t dim = pts.front().size();
  std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) {
    if (pts[a].size() != dim) throw BadInput("point cloud has mixed dimensions");
    for (int b = a + 1; b < n; ++b) {
      double s = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        double t = pts[a][k] - pts[b][k];
        s += t * t;
      }
      double d = std::sqrt(s);
      flat[static_cast<std::size_t>(a) * n + b] = d;
      flat[static_cast<std::size_t>(b) * n + a] = d;
    }
  }
  FiniteMetricSpace space(n, std::move(flat));
  space.coords = std::move(pts);
  return space;
}

// -- neighborhoods and complements ------------------------------------------

/// N_r(A) with closed balls: { x : d(x, A) <= r }.
inline Selection neighborhood(const FiniteMetricSpace& X, const Selection& A, double r) {
  if (r < 0) throw BadInput("neighborhood radius must be nonnegative");
  std::vector<PointId> out;
  for (PointId x = 0; x < X.size(); ++x)
    if (approx_le(X.dist_to_set(x, A), r)) out.push_back(x);
  return Selection(std::move(out));
}

inline Selection complement(const FiniteMetricSpace& X, const Selection& S) {
  std::vector<PointId> out;
  for (PointId x = 0; x < X.size(); ++x)
    if (!S.contains(x)) out.push_back(x);
  return Selection(std::move(out));
}

// -- the d_A pseudometric and the quotient X/A -------------------------------

/// d_A(x,y) = min{ d(x,A)+d(y,A), d(x,y) }. Triangle inequality is asserted;
/// points of A end up pairwise at distance zero.
inline FiniteMetricSpace d_A_pseudometric(const FiniteMetricSpace& X, const Selection& A) {
  if (A.empty()) throw EmptySubset("d_A needs a nonempty subset");
  const int n = X.size();
  std::vector<double> to_A(n);
  for (PointId x = 0; x < n; ++x) to_A[x] = X.dist_to_set(x, A);

  FiniteMetricSpace Y = X;
  Y.pseudometric = true;
  for (PointId x = 0; x < n; ++x)
    for (PointId y = x + 1; y < n; ++y)
      Y.set_dist(x, y, std::min(to_A[x] + to_A[y], X.dist(x, y)));
  Y.assert_triangle_inequality();
  return Y;
}

struct QuotientResult {
  FiniteMetricSpace space;
  std::vector<PointId> old_to_new;  // size |X|
  PointId class_point = 0;          // the image [A], also the basepoint
};

/// Collapses the d_A-null class of A to a single point; the result is a
/// genuine metric space with [A] as basepoint.
inline QuotientResult quotient_by_subset(const FiniteMetricSpace& X, const Selection& A) {
  if (A.empty()) throw EmptySubset("quotient needs a nonempty subset");
  const int n = X.size();
  std::vector<double> to_A(n);
  for (PointId x = 0; x < n; ++x) to_A[x] = X.dist_to_set(x, A);

  QuotientResult res;
  res.old_to_new.assign(n, -1);
  std::vector<PointId> kept;  // survivors, in id order; class point goes first
  for (PointId x = 0; x < n; ++x)
    if (to_A[x] > kDistTol) kept.push_back(x);

  const int m = static_cast<int>(kept.size()) + 1;
  std::vector<double> flat(static_cast<std::size_t>(m) * m, 0.0);
  auto at = [&](int a, int b) -> double& { return flat[static_cast<std::size_t>(a) * m + b]; };
  for (int i = 0; i < static_cast<int>(kept.size()); ++i) {
    PointId x = kept[i];
    res.old_to_new[x] = i + 1;
    at(0, i + 1) = at(i + 1, 0) = to_A[x];
    for (int j = i + 1; j < static_cast<int>(kept.size()); ++j) {
      PointId y = kept[j];
      double d = std::min(to_A[x] + to_A[y], X.dist(x, y));
      at(i + 1, j + 1) = at(j + 1, i + 1) = d;
    }
  }
  for (PointId x = 0; x < n; ++x)
    if (res.old_to_new[x] < 0) res.old_to_new[x] = 0;

  res.space = FiniteMetricSpace(m, std::move(flat));
  res.space.basepoint = 0;
  res.space.unbounded_model = X.unbounded_model;
  res.space.truncation_radius = X.truncation_radius;
  res.space.validate(/*strict_metric=*/true);
  res.class_point = 0;
  return res;
}

}  // namespace coarse
