#pragma once

#include <unordered_map>
#include <vector>

#include "coarse/chains.hpp"
#include "coarse/cohomology.hpp"

namespace coarse {

/// Sparse raw cochain: a function X^{n+1} -> R with finitely many nonzeros.
template <class T>
struct Cochain {
  int degree = 0;
  std::unordered_map<Tuple, T, TupleHash> values;

  Cochain() = default;
  explicit Cochain(int deg) : degree(deg) {}

  void set(const Tuple& t, const T& v) {
    if (static_cast<int>(t.size()) != degree + 1)
      throw DimensionMismatch("tuple arity does not match cochain degree");
    if (v == T(0)) values.erase(t);
    else values[t] = v;
  }

  T operator()(const Tuple& t) const {
    auto it = values.find(t);
    return it == values.end() ? T(0) : it->second;
  }

  /// Linear extension to chains.
  T operator()(const Chain<T>& c) const {
    T s(0);
    for (const auto& [t, coeff] : c.terms) {
      auto it = values.find(t);
      if (it != values.end()) s += it->second * coeff;
    }
    return s;
  }

  friend bool operator==(const Cochain& a, const Cochain& b) {
    if (a.degree != b.degree || a.values.size() != b.values.size()) return false;
    for (const auto& [t, v] : a.values) {
      auto it = b.values.find(t);
      if (it == b.values.end() || !(it->second == v)) return false;
    }
    return true;
  }
};

/// (d phi)(x_0..x_{n+1}) = sum_i (-1)^i phi(x_0..^x_i..x_{n+1}).
/// Sparse form: every way of inserting a point into a support tuple.
template <class T>
Cochain<T> coboundary(const Cochain<T>& phi, const FiniteMetricSpace& X) {
  Cochain<T> out(phi.degree + 1);
  for (const auto& [t, v] : phi.values) {
    for (std::size_t i = 0; i <= t.size(); ++i) {
      for (PointId x = 0; x < X.size(); ++x) {
        Tuple y = t;
        y.insert(y.begin() + i, x);
        auto [it, fresh] = out.values.emplace(y, T(0));
        it->second += ring_sign<T>(static_cast<int>(i)) * v;
      }
    }
  }
  for (auto it = out.values.begin(); it != out.values.end();)
    it = (it->second == T(0)) ? out.values.erase(it) : std::next(it);
  return out;
}

// -- supports ---------------------------------------------------------------

/// Distance from the stabilized tuple i(t) to the diagonal of X^inf
/// in the sup metric: min over x of max_j d(t_j, x).
inline double diagonal_distance(const FiniteMetricSpace& X, const Tuple& t) {
  double best = std::numeric_limits<double>::infinity();
  for (PointId x = 0; x < X.size(); ++x) {
    double m = 0;
    for (PointId v : t) m = std::max(m, X.dist(v, x));
    best = std::min(best, m);
  }
  return best;
}

/// Sup-metric distance between stabilized tuples (repeat the last coordinate).
inline double sup_distance(const FiniteMetricSpace& X, const Tuple& a, const Tuple& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    PointId x = a[std::min(i, a.size() - 1)];
    PointId y = b[std::min(i, b.size() - 1)];
    m = std::max(m, X.dist(x, y));
  }
  return m;
}

template <class T>
struct SupportReport {
  std::vector<PointId> diag_trace;  // ||phi||: points whose constant tuple carries phi
  std::vector<std::pair<double, std::vector<Tuple>>> near_diag;  // per grid radius
};

template <class T>
SupportReport<T> support_report(const Cochain<T>& phi, const FiniteMetricSpace& X,
                                const std::vector<double>& r_grid) {
  SupportReport<T> rep;
  for (const auto& [t, v] : phi.values) {
    bool constant = true;
    for (PointId p : t) constant &= (p == t.front());
    if (constant) rep.diag_trace.push_back(t.front());
  }
  std::sort(rep.diag_trace.begin(), rep.diag_trace.end());
  rep.diag_trace.erase(std::unique(rep.diag_trace.begin(), rep.diag_trace.end()),
                       rep.diag_trace.end());

  std::vector<std::pair<Tuple, double>> dists;
  dists.reserve(phi.values.size());
  for (const auto& [t, v] : phi.values) dists.emplace_back(t, diagonal_distance(X, t));
  for (double r : r_grid) {
    std::vector<Tuple> in;
    for (const auto& [t, d] : dists)
      if (approx_le(d, r)) in.push_back(t);
    std::sort(in.begin(), in.end());
    rep.near_diag.emplace_back(r, std::move(in));
  }
  return rep;
}

/// ||phi|| subset N_bound(b).
template <class T>
bool is_boundedly_supported(const Cochain<T>& phi, const FiniteMetricSpace& X, double bound) {
  PointId b = X.require_basepoint();
  for (const auto& [t, v] : phi.values) {
    bool constant = true;
    for (PointId p : t) constant &= (p == t.front());
    if (constant && !approx_le(X.dist(t.front(), b), bound)) return false;
  }
  return true;
}

/// For every grid r, the part of |phi| within r of the diagonal stays inside
/// N_bound(b).
template <class T>
bool is_coarse_on_truncation(const Cochain<T>& phi, const FiniteMetricSpace& X,
                             const std::vector<double>& r_grid, double bound) {
  PointId b = X.require_basepoint();
  double max_r = 0;
  for (double r : r_grid) max_r = std::max(max_r, r);
  for (const auto& [t, v] : phi.values) {
    if (!approx_le(diagonal_distance(X, t), max_r)) continue;
    for (PointId p : t)
      if (!approx_le(X.dist(p, b), bound)) return false;
  }
  return true;
}

// -- ground truth on small spaces: the full complex C*(X) --------------------

inline constexpr int kFullComplexPointCap = 6;
inline constexpr int kFullComplexDegreeCap = 3;

namespace detail {

/// Coboundary matrix of the full tuple complex, d^n : C^n -> C^{n+1}.
/// Tuples indexed in mixed radix, least significant coordinate first.
template <class T>
SparseMatrix<T> full_coboundary(int n_points, int degree) {
  std::size_t cols = 1, rows = 1;
  for (int i = 0; i <= degree; ++i) cols *= n_points;
  rows = cols * n_points;
  SparseMatrix<T> M(static_cast<int>(rows), static_cast<int>(cols));

  Tuple t(degree + 1, 0);
  for (std::size_t c = 0; c < cols; ++c) {
    std::unordered_map<std::size_t, T> col;
    for (std::size_t i = 0; i <= t.size(); ++i) {
      for (PointId x = 0; x < n_points; ++x) {
        // index of t with x inserted at position i
        std::size_t idx = 0, base = 1;
        for (std::size_t k = 0; k < t.size() + 1; ++k) {
          PointId coord = (k < i) ? t[k] : (k == i ? x : t[k - 1]);
          idx += base * static_cast<std::size_t>(coord);
          base *= n_points;
        }
        T& slot = col[idx];
        slot += ring_sign<T>(static_cast<int>(i));
      }
    }
    for (const auto& [r, v] : col)
      if (!(v == T(0))) M.columns[c].emplace_back(static_cast<int>(r), v);
    std::sort(M.columns[c].begin(), M.columns[c].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    int k = 0;
    while (k <= degree && ++t[k] >= n_points) t[k++] = 0;
  }
  return M;
}

}  // namespace detail

/// Cohomology of the raw complex C*(X;R) in degrees 0..max_degree.
/// Exact ground truth for the bounded case; capped because C^n has |X|^{n+1}
/// generators.
inline std::vector<CohomologyGroup> full_complex_cohomology(const FiniteMetricSpace& X,
                                                            Ring ring, int max_degree,
                                                            int point_cap = kFullComplexPointCap) {
  if (X.size() > point_cap) throw SizeLimit("full complex limited to small spaces");
  if (max_degree > kFullComplexDegreeCap || max_degree < 0)
    throw SizeLimit("full complex limited to degree 3");

  std::vector<CohomologyGroup> out;
  const int n_pts = X.size();

  auto rank_path = [&](auto rank_of_degree) {
    int prev_rank = 0;
    std::size_t dim_n = n_pts;
    for (int n = 0; n <= max_degree; ++n) {
      int rank = rank_of_degree(n);
      CohomologyGroup g;
      g.degree = n;
      g.free_rank = static_cast<long>(dim_n) - rank - prev_rank;
      out.push_back(g);
      prev_rank = rank;
      dim_n *= n_pts;
    }
  };

  switch (ring) {
    case Ring::GF2:
      rank_path([&](int n) { return matrix_rank(detail::full_coboundary<GF2>(n_pts, n)); });
      break;
    case Ring::Q:
      // entries are integers; the integer elimination gives the exact Q rank
      rank_path([&](int n) { return integer_rank(detail::full_coboundary<Integer>(n_pts, n)); });
      break;
    case Ring::Z: {
      int prev_rank = 0;
      std::vector<Integer> prev_invariants;
      std::size_t dim_n = n_pts;
      for (int n = 0; n <= max_degree; ++n) {
        SNFResult snf = smith_normal_form(detail::full_coboundary<Integer>(n_pts, n));
        CohomologyGroup g;
        g.degree = n;
        g.free_rank = static_cast<long>(dim_n) - snf.rank - prev_rank;
        for (const Integer& q : torsion_prime_powers(prev_invariants))
          g.torsion.push_back(static_cast<long long>(q));
        out.push_back(g);
        prev_rank = snf.rank;
        prev_invariants = snf.invariants;
        dim_n *= n_pts;
      }
      break;
    }
  }
  return out;
}

}  // namespace coarse
