#pragma once

// Test-side oracles, independent of the library's linear algebra.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "coarse/generators.hpp"

namespace oracles {

/// Plain dense Smith normal form on int64, no pivot heuristics beyond
/// smallest-entry selection. Only for small matrices with small entries.
inline std::vector<long long> dense_snf_int64(std::vector<std::vector<long long>> a) {
  const int r = static_cast<int>(a.size());
  const int c = r ? static_cast<int>(a[0].size()) : 0;
  std::vector<long long> out;
  int t = 0;
  while (t < r && t < c) {
    int pi = -1, pj = -1;
    long long best = 0;
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j)
        if (a[i][j] != 0 && (pi < 0 || std::abs(a[i][j]) < best)) {
          best = std::abs(a[i][j]);
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    std::swap(a[pi], a[t]);
    for (int i = 0; i < r; ++i) std::swap(a[i][pj], a[i][t]);

    bool again = false;
    for (int i = t + 1; i < r; ++i) {
      if (a[i][t] == 0) continue;
      long long q = a[i][t] / a[t][t];
      for (int j = t; j < c; ++j) a[i][j] -= q * a[t][j];
      if (a[i][t] != 0) again = true;
    }
    for (int j = t + 1; j < c; ++j) {
      if (a[t][j] == 0) continue;
      long long q = a[t][j] / a[t][t];
      for (int i = t; i < r; ++i) a[i][j] -= q * a[i][t];
      if (a[t][j] != 0) again = true;
    }
    if (again) continue;

    bool divisible = true;
    for (int i = t + 1; i < r && divisible; ++i)
      for (int j = t + 1; j < c && divisible; ++j)
        if (a[i][j] % a[t][t] != 0) {
          for (int k = t; k < c; ++k) a[t][k] += a[i][k];
          divisible = false;
        }
    if (!divisible) continue;

    out.push_back(std::abs(a[t][t]));
    ++t;
  }
  return out;
}

/// The 6-vertex triangulation of the projective plane (vertices 0..5).
inline std::vector<coarse::Tuple> projective_plane_faces() {
  return {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
          {1, 3, 5}, {1, 3, 4}, {1, 2, 4}, {2, 4, 5}, {2, 3, 5}};
}

/// Closed-form king-graph clique counts for grid(2, L, 1) at scale 1.5:
/// every 3-clique and 4-clique lives inside a unit square.
struct KingCounts {
  long long vertices, edges, triangles, tetrahedra;
};
inline KingCounts king_counts(int half_extent) {
  long long n = 2LL * half_extent + 1;
  KingCounts k{};
  k.vertices = n * n;
  k.edges = 2 * n * (n - 1) + 2 * (n - 1) * (n - 1);
  k.triangles = 4 * (n - 1) * (n - 1);
  k.tetrahedra = (n - 1) * (n - 1);
  return k;
}

/// Geometric circle-pack oracle, recomputed from the generated coordinates:
/// circle i is intact at radius r iff every sampled point of it lies farther
/// than r from the basepoint.
inline int circles_intact(const coarse::CirclePackSpace& pack, double r) {
  const auto& X = pack.space;
  coarse::PointId b = *X.basepoint;
  int intact = 0;
  for (const auto& circle : pack.circle_points) {
    bool whole = true;
    for (coarse::PointId p : circle) whole &= X.dist(p, b) > r + coarse::kDistTol;
    intact += whole ? 1 : 0;
  }
  return intact;
}

/// Same for the complement of a subset: circles untouched by N_r(A).
inline int circles_clear_of(const coarse::CirclePackSpace& pack, const coarse::Selection& A,
                            double r) {
  const auto& X = pack.space;
  int clear = 0;
  for (const auto& circle : pack.circle_points) {
    bool whole = true;
    for (coarse::PointId p : circle) whole &= X.dist_to_set(p, A) > r + coarse::kDistTol;
    clear += whole ? 1 : 0;
  }
  return clear;
}

}  // namespace oracles
