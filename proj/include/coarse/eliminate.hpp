#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "coarse/sparse.hpp"

namespace coarse {

// Incremental column elimination over a field. Columns are reduced against
// the pivots established so far; the pivot position of a column is its
// minimal surviving row index (deterministic, reproducible matrices).
//
// Invariant per processed column: col = A * rep, where A has the original
// columns. A column that reduces to zero therefore hands back a kernel
// vector, and solve() expresses a target in terms of the original columns.

template <class F>
class Eliminator {
 public:
  Eliminator(int rows, int max_cols) : rows_(rows) { (void)max_cols; }

  int rank() const { return static_cast<int>(pivots_.size()); }
  const std::vector<int>& pivot_columns() const { return pivot_original_; }

  std::optional<SparseVec<F>> add_column(int original_index, SparseVec<F> col) {
    SparseVec<F> rep{{original_index, F(1)}};
    reduce(col, rep);
    if (col.empty()) return rep;  // kernel combination
    const int pivot_row = col.front().first;
    F inv = F(1) / col.front().second;
    vec_scale(col, inv);
    vec_scale(rep, inv);
    pivots_.emplace(pivot_row, Pivot{std::move(col), std::move(rep)});
    pivot_original_.push_back(original_index);
    return std::nullopt;
  }

  /// x with A x = b over the columns fed so far, or nullopt if inconsistent.
  std::optional<SparseVec<F>> solve(SparseVec<F> b) const {
    SparseVec<F> x;
    while (!b.empty()) {
      int r = b.front().first;
      auto it = pivots_.find(r);
      if (it == pivots_.end()) return std::nullopt;
      F coef = b.front().second;
      vec_axpy(b, coef, it->second.col);
      vec_axpy(x, F(-coef), it->second.rep);  // x += coef * rep
    }
    return x;
  }

 private:
  struct Pivot {
    SparseVec<F> col;
    SparseVec<F> rep;
  };

  void reduce(SparseVec<F>& col, SparseVec<F>& rep) const {
    while (!col.empty()) {
      auto it = pivots_.find(col.front().first);
      if (it == pivots_.end()) return;
      F coef = col.front().second;
      vec_axpy(col, coef, it->second.col);
      vec_axpy(rep, coef, it->second.rep);
    }
  }

  int rows_;
  std::map<int, Pivot> pivots_;
  std::vector<int> pivot_original_;
};

// GF(2) specialization on packed bitsets: column and representation words.
template <>
class Eliminator<GF2> {
 public:
  Eliminator(int rows, int max_cols)
      : rows_(rows), col_words_((rows + 63) / 64), rep_words_((max_cols + 63) / 64) {}

  int rank() const { return static_cast<int>(pivot_rows_.size()); }
  const std::vector<int>& pivot_columns() const { return pivot_original_; }

  std::optional<SparseVec<GF2>> add_column(int original_index, const SparseVec<GF2>& col) {
    std::vector<std::uint64_t> bits(col_words_, 0), rep(rep_words_, 0);
    for (const auto& [r, v] : col)
      if (v == GF2(1)) bits[r >> 6] ^= 1ull << (r & 63);
    rep[original_index >> 6] ^= 1ull << (original_index & 63);
    reduce(bits, rep);
    int lead = first_bit(bits);
    if (lead < 0) {
      SparseVec<GF2> out;
      for (int i = 0; i < rep_words_ * 64; ++i)
        if (rep[i >> 6] >> (i & 63) & 1) out.emplace_back(i, GF2(1));
      return out;
    }
    pivot_index_.emplace(lead, pivots_.size());
    pivots_.push_back({std::move(bits), std::move(rep)});
    pivot_rows_.push_back(lead);
    pivot_original_.push_back(original_index);
    return std::nullopt;
  }

  std::optional<SparseVec<GF2>> solve(const SparseVec<GF2>& b) const {
    std::vector<std::uint64_t> bits(col_words_, 0), rep(rep_words_, 0);
    for (const auto& [r, v] : b)
      if (v == GF2(1)) bits[r >> 6] ^= 1ull << (r & 63);
    reduce(bits, rep);
    if (first_bit(bits) >= 0) return std::nullopt;
    SparseVec<GF2> out;
    for (int i = 0; i < rep_words_ * 64; ++i)
      if (rep[i >> 6] >> (i & 63) & 1) out.emplace_back(i, GF2(1));
    return out;
  }

 private:
  struct Pivot {
    std::vector<std::uint64_t> col;
    std::vector<std::uint64_t> rep;
  };

  static void xor_into(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
  }

  static int first_bit(const std::vector<std::uint64_t>& a) {
    for (std::size_t w = 0; w < a.size(); ++w)
      if (a[w]) return static_cast<int>(w * 64 + __builtin_ctzll(a[w]));
    return -1;
  }

  void reduce(std::vector<std::uint64_t>& bits, std::vector<std::uint64_t>& rep) const {
    for (;;) {
      int lead = first_bit(bits);
      if (lead < 0) return;
      auto it = pivot_index_.find(lead);
      if (it == pivot_index_.end()) return;
      xor_into(bits, pivots_[it->second].col);
      xor_into(rep, pivots_[it->second].rep);
    }
  }

  int rows_;
  int col_words_;
  int rep_words_;
  std::vector<Pivot> pivots_;
  std::map<int, std::size_t> pivot_index_;
  std::vector<int> pivot_rows_;
  std::vector<int> pivot_original_;
};

template <class F>
struct RankKernelImage {
  int rank = 0;
  std::vector<SparseVec<F>> kernel_basis;  // vectors over column indices
  std::vector<int> image_pivot_cols;       // original columns forming an image basis
};

template <class F>
RankKernelImage<F> rank_kernel_image(const SparseMatrix<F>& M) {
  static_assert(is_field_v<F>, "rank_kernel_image requires a field ring");
  Eliminator<F> elim(M.rows, M.cols);
  RankKernelImage<F> out;
  for (int c = 0; c < M.cols; ++c)
    if (auto ker = elim.add_column(c, M.columns[c])) out.kernel_basis.push_back(std::move(*ker));
  out.rank = elim.rank();
  out.image_pivot_cols = elim.pivot_columns();
  return out;
}

template <class F>
int matrix_rank(const SparseMatrix<F>& M) {
  Eliminator<F> elim(M.rows, M.cols);
  for (int c = 0; c < M.cols; ++c) elim.add_column(c, M.columns[c]);
  return elim.rank();
}

/// Solve d c = z using only the unmasked columns; nullopt when inconsistent.
template <class F>
std::optional<SparseVec<F>> solve_in_subspace(const SparseMatrix<F>& d, const SparseVec<F>& z,
                                              const std::vector<int>& allowed_cols) {
  static_assert(is_field_v<F>, "solve_in_subspace requires a field ring");
  for (const auto& [r, v] : z)
    if (r < 0 || r >= d.rows) throw DimensionMismatch("target lives outside the row space");
  Eliminator<F> elim(d.rows, d.cols);
  for (int c : allowed_cols) elim.add_column(c, d.columns[c]);
  return elim.solve(z);
}

}  // namespace coarse
