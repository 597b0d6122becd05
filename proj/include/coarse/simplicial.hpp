#pragma once

#include <unordered_map>
#include <vector>

#include "coarse/metric_space.hpp"
#include "coarse/sparse.hpp"

namespace coarse {

inline constexpr std::size_t kSimplexCap = 5000000;

/// Vietoris-Rips complex at a fixed scale. Simplices are lexicographically
/// sorted vertex tuples over global point ids, stored per dimension.
struct SimplicialComplex {
  double scale = 0;
  int max_dim = 0;
  std::vector<std::vector<Tuple>> simplices;  // [k] -> lex-sorted k-simplices
  std::vector<std::unordered_map<Tuple, int, TupleHash>> index;

  int dim_count(int k) const {
    return (k >= 0 && k < static_cast<int>(simplices.size()))
               ? static_cast<int>(simplices[k].size())
               : 0;
  }

  const std::vector<Tuple>& dim(int k) const { return simplices[k]; }

  int index_of(int k, const Tuple& s) const {
    if (k < 0 || k >= static_cast<int>(index.size())) return -1;
    auto it = index[k].find(s);
    return it == index[k].end() ? -1 : it->second;
  }

  bool contains(const Tuple& s) const {
    return index_of(static_cast<int>(s.size()) - 1, s) >= 0;
  }

  std::size_t total_simplices() const {
    std::size_t n = 0;
    for (const auto& v : simplices) n += v.size();
    return n;
  }

  void rebuild_index() {
    index.assign(simplices.size(), {});
    for (std::size_t k = 0; k < simplices.size(); ++k) {
      index[k].reserve(simplices[k].size() * 2);
      for (std::size_t i = 0; i < simplices[k].size(); ++i)
        index[k].emplace(simplices[k][i], static_cast<int>(i));
    }
  }
};

/// Clique complex of the eps-proximity graph over a selection, up to max_dim.
inline SimplicialComplex rips_complex(const FiniteMetricSpace& X, const Selection& sel,
                                      double eps, int max_dim,
                                      std::size_t simplex_cap = kSimplexCap) {
  if (eps < 0) throw BadInput("rips scale must be nonnegative");
  if (max_dim < 0) throw BadInput("rips max dimension must be nonnegative");

  SimplicialComplex K;
  K.scale = eps;
  K.max_dim = max_dim;
  K.simplices.assign(static_cast<std::size_t>(max_dim) + 1, {});

  const auto& verts = sel.ids;
  const int nv = static_cast<int>(verts.size());
  // adjacency restricted to later vertices, in vertex order
  std::unordered_map<PointId, std::vector<PointId>> later;
  later.reserve(verts.size() * 2);
  for (int i = 0; i < nv; ++i) {
    auto& lst = later[verts[i]];
    for (int j = i + 1; j < nv; ++j)
      if (approx_le(X.dist(verts[i], verts[j]), eps)) lst.push_back(verts[j]);
  }

  std::size_t produced = 0;
  auto emit = [&](int k, const Tuple& s) {
    if (++produced > simplex_cap) throw SizeLimit("simplex cap exceeded");
    K.simplices[k].push_back(s);
  };

  // depth-first clique expansion; candidates stay sorted, so output is lex
  std::vector<PointId> cur;
  auto expand = [&](auto&& self, const std::vector<PointId>& cands) -> void {
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      PointId v = cands[ci];
      cur.push_back(v);
      emit(static_cast<int>(cur.size()) - 1, cur);
      if (static_cast<int>(cur.size()) <= max_dim) {
        std::vector<PointId> next;
        const auto& lv = later.at(v);
        std::set_intersection(cands.begin() + ci + 1, cands.end(), lv.begin(), lv.end(),
                              std::back_inserter(next));
        if (!next.empty()) self(self, next);
      }
      cur.pop_back();
    }
  };
  expand(expand, verts);

  K.rebuild_index();
  return K;
}

inline SimplicialComplex rips_complex(const FiniteMetricSpace& X, double eps, int max_dim,
                                      std::size_t simplex_cap = kSimplexCap) {
  return rips_complex(X, X.all_points(), eps, max_dim, simplex_cap);
}

/// Builds a complex from explicit simplices, closing under faces.
inline SimplicialComplex complex_from_simplices(const std::vector<Tuple>& top, double scale = 0) {
  int max_dim = 0;
  for (const auto& s : top) max_dim = std::max(max_dim, static_cast<int>(s.size()) - 1);
  SimplicialComplex K;
  K.scale = scale;
  K.max_dim = max_dim;
  K.simplices.assign(static_cast<std::size_t>(max_dim) + 1, {});

  std::vector<std::unordered_map<Tuple, bool, TupleHash>> seen(max_dim + 1);
  auto add = [&](auto&& self, Tuple s) -> void {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw BadInput("simplex with repeated vertex");
    int k = static_cast<int>(s.size()) - 1;
    if (seen[k].emplace(s, true).second) {
      if (k > 0)
        for (std::size_t i = 0; i < s.size(); ++i) {
          Tuple f = s;
          f.erase(f.begin() + i);
          self(self, std::move(f));
        }
      K.simplices[k].push_back(std::move(s));
    }
  };
  for (const auto& s : top) add(add, s);
  for (auto& v : K.simplices) std::sort(v.begin(), v.end());
  K.rebuild_index();
  return K;
}

/// Alternating-sign boundary matrix: rows are (dim-1)-simplices, columns are
/// dim-simplices, face i carries sign (-1)^i.
template <class T>
SparseMatrix<T> boundary_matrix(const SimplicialComplex& K, int dim) {
  if (dim < 1 || dim > K.max_dim) throw BadInput("boundary dimension out of range");
  SparseMatrix<T> M(K.dim_count(dim - 1), K.dim_count(dim));
  for (int c = 0; c < K.dim_count(dim); ++c) {
    const Tuple& s = K.dim(dim)[c];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Tuple f = s;
      f.erase(f.begin() + i);
      int r = K.index_of(dim - 1, f);
      M.columns[c].emplace_back(r, ring_sign<T>(static_cast<int>(i)));
    }
    std::sort(M.columns[c].begin(), M.columns[c].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return M;
}

/// Simplicial coboundary d^dim: C^dim -> C^(dim+1), the transpose of the
/// boundary in dimension dim+1.
template <class T>
SparseMatrix<T> coboundary_matrix(const SimplicialComplex& K, int dim) {
  if (dim < 0 || dim + 1 > K.max_dim) throw BadInput("coboundary dimension out of range");
  return boundary_matrix<T>(K, dim + 1).transpose();
}

struct InclusionMap {
  const SimplicialComplex* source = nullptr;
  const SimplicialComplex* target = nullptr;
};

/// Validated inclusion K <= L (same scale, every simplex of K in L).
inline InclusionMap inclusion(const SimplicialComplex& K, const SimplicialComplex& L) {
  if (!approx_eq(K.scale, L.scale)) throw NotASubcomplex("inclusion across different scales");
  if (K.max_dim > L.max_dim) throw NotASubcomplex("source exceeds target dimension");
  for (int k = 0; k <= K.max_dim; ++k)
    for (const auto& s : K.dim(k))
      if (L.index_of(k, s) < 0) throw NotASubcomplex("source simplex missing from target");
  return InclusionMap{&K, &L};
}

}  // namespace coarse
