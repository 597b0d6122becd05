#pragma once

#include <utility>
#include <vector>

#include "coarse/common.hpp"
#include "coarse/rings.hpp"

namespace coarse {

/// Sparse coefficient vector: (index, value) pairs sorted by index, no zeros.
template <class F>
using SparseVec = std::vector<std::pair<int, F>>;

template <class F>
inline void vec_axpy(SparseVec<F>& x, const F& a, const SparseVec<F>& y) {
  // x -= a * y
  SparseVec<F> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, F(-(a * y[j].second)));
      ++j;
    } else {
      F v = x[i].second - a * y[j].second;
      if (!(v == F(0))) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  x = std::move(out);
}

template <class F>
inline void vec_scale(SparseVec<F>& x, const F& a) {
  for (auto& [i, v] : x) v = v * a;
}

/// Column-major sparse matrix over a ring.
template <class T>
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<SparseVec<T>> columns;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), columns(static_cast<std::size_t>(c)) {}

  void set(int r, int c, T v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw DimensionMismatch("sparse matrix index out of range");
    auto& col = columns[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
      if (v == T(0)) col.erase(it);
      else it->second = std::move(v);
    } else if (!(v == T(0))) {
      col.insert(it, {r, std::move(v)});
    }
  }

  T get(int r, int c) const {
    const auto& col = columns[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const auto& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return T(0);
  }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.size();
    return n;
  }

  SparseMatrix<T> transpose() const {
    SparseMatrix<T> out(cols, rows);
    for (int c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) out.columns[r].emplace_back(c, v);
    return out;
  }

  /// y = M * x with x sparse over columns.
  SparseVec<T> apply(const SparseVec<T>& x) const {
    std::vector<T> dense(static_cast<std::size_t>(rows), T(0));
    for (const auto& [c, xv] : x)
      for (const auto& [r, mv] : columns[c]) dense[r] += mv * xv;
    SparseVec<T> out;
    for (int r = 0; r < rows; ++r)
      if (!(dense[r] == T(0))) out.emplace_back(r, dense[r]);
    return out;
  }

  template <class U>
  SparseMatrix<U> cast() const {
    SparseMatrix<U> out(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) out.columns[c].emplace_back(r, U(v));
    return out;
  }
};

template <class T>
inline bool is_zero_matrix_product(const SparseMatrix<T>& A, const SparseMatrix<T>& B) {
  if (A.cols != B.rows) throw DimensionMismatch("product shape mismatch");
  for (int c = 0; c < B.cols; ++c)
    if (!A.apply(B.columns[c]).empty()) return false;
  return true;
}

}  // namespace coarse
