#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "coarse/metric_space.hpp"

namespace coarse {

inline constexpr std::size_t kGeneratorPointCap = 200000;

/// Integer-grid sample of [-L,L]^n (n = 1..3) with Euclidean distances.
/// Basepoint at the origin; marked as a truncation of R^n at radius L.
inline FiniteMetricSpace generate_grid(int dimension, double half_extent, double spacing) {
  if (dimension < 1 || dimension > 3) throw BadInput("grid dimension must be 1..3");
  if (spacing <= 0) throw BadInput("grid spacing must be positive");
  if (half_extent < spacing) throw BadInput("grid half extent must be at least the spacing");

  const int k = static_cast<int>(std::floor(half_extent / spacing + kDistTol));
  const std::size_t side = static_cast<std::size_t>(2 * k + 1);
  std::size_t count = 1;
  for (int d = 0; d < dimension; ++d) count *= side;
  if (count > kGeneratorPointCap) throw SizeLimit("grid would exceed the point cap");

  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  std::array<int, 3> idx{-k, -k, -k};
  if (dimension < 3) idx[2] = 0;
  if (dimension < 2) idx[1] = 0;
  PointId origin = -1;
  for (;;) {
    std::vector<double> p(dimension);
    for (int d = 0; d < dimension; ++d) p[d] = idx[d] * spacing;
    bool is_origin = true;
    for (int d = 0; d < dimension; ++d) is_origin &= (idx[d] == 0);
    if (is_origin) origin = static_cast<PointId>(pts.size());
    pts.push_back(std::move(p));

    int d = 0;
    while (d < dimension && ++idx[d] > k) idx[d++] = -k;
    if (d == dimension) break;
  }

  FiniteMetricSpace space = from_points(std::move(pts));
  space.basepoint = origin;
  space.unbounded_model = true;
  space.truncation_radius = k * spacing;
  return space;
}

/// Deterministic layout of the circle-pack figure: the ray [0,inf) x {0}
/// plus circles tangent to it from above, circle i of radius i, with the gap
/// between consecutive circles growing as gap(i) = i * g0.
struct CirclePackLayout {
  double gap_base = 4.0;
  double ray_spacing = 1.0;
  std::vector<double> tangent_x;  // abscissa where circle i touches the ray
  double ray_end = 0;

  explicit CirclePackLayout(int num_circles, double g0 = 4.0) : gap_base(g0) {
    tangent_x.resize(num_circles);
    double t = g0 + 1.0;  // left edge of circle 1 sits one gap from the origin
    for (int i = 1; i <= num_circles; ++i) {
      tangent_x[i - 1] = t;
      if (i < num_circles) t += i + i * g0 + (i + 1);
    }
    ray_end = tangent_x.back() + num_circles + num_circles * g0;
  }

  double radius(int i) const { return i + 1.0; }  // zero-based index
  std::array<double, 2> center(int i) const { return {tangent_x[i], radius(i)}; }
};

struct CirclePackSpace {
  FiniteMetricSpace space;
  CirclePackLayout layout{1};
  std::vector<PointId> ray_points;
  std::vector<std::vector<PointId>> circle_points;  // per circle

  Selection ray_selection() const { return Selection(std::vector<PointId>(ray_points)); }
};

/// Planar sample of the figure space. Circle samples include the tangent
/// point; the coinciding ray sample is dropped so points stay distinct.
inline CirclePackSpace generate_circle_pack(int num_circles, int points_per_circle,
                                            double gap_base = 4.0) {
  if (num_circles < 1) throw BadInput("need at least one circle");
  if (points_per_circle < 8) throw BadInput("need at least 8 points per circle");

  CirclePackSpace out;
  out.layout = CirclePackLayout(num_circles, gap_base);
  const CirclePackLayout& L = out.layout;

  std::vector<std::vector<double>> pts;
  auto near_tangent = [&](double x) {
    for (double t : L.tangent_x)
      if (approx_eq(x, t)) return true;
    return false;
  };

  const int ray_count = static_cast<int>(std::floor(L.ray_end / L.ray_spacing + kDistTol)) + 1;
  if (static_cast<std::size_t>(ray_count) + static_cast<std::size_t>(num_circles) * points_per_circle >
      kGeneratorPointCap)
    throw SizeLimit("circle pack would exceed the point cap");

  for (int k = 0; k < ray_count; ++k) {
    double x = k * L.ray_spacing;
    if (near_tangent(x)) continue;  // circle provides this point
    out.ray_points.push_back(static_cast<PointId>(pts.size()));
    pts.push_back({x, 0.0});
  }

  out.circle_points.resize(num_circles);
  for (int i = 0; i < num_circles; ++i) {
    const auto c = L.center(i);
    const double r = L.radius(i);
    for (int k = 0; k < points_per_circle; ++k) {
      double a = 2.0 * M_PI * k / points_per_circle;
      // angle measured from the downward vertical, so k = 0 is the tangent point
      out.circle_points[i].push_back(static_cast<PointId>(pts.size()));
      pts.push_back({c[0] + r * std::sin(a), c[1] - r * std::cos(a)});
    }
    out.ray_points.push_back(out.circle_points[i][0]);  // tangent point lies on the ray
  }
  std::sort(out.ray_points.begin(), out.ray_points.end());

  out.space = from_points(std::move(pts));
  out.space.basepoint = 0;  // the origin sample
  out.space.unbounded_model = true;
  out.space.truncation_radius = L.ray_end;
  return out;
}

}  // namespace coarse
