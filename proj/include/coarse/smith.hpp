#pragma once

#include <map>
#include <set>
#include <vector>

#include "coarse/sparse.hpp"

namespace coarse {

struct SNFResult {
  std::vector<Integer> invariants;  // nonzero diagonal, divisibility order
  int rank = 0;                     // = number of invariants = rank over Q
  int rows = 0;
  int cols = 0;

  void check_divisibility_chain() const {
    for (std::size_t i = 1; i < invariants.size(); ++i)
      if (invariants[i] % invariants[i - 1] != 0)
        throw Error("Smith invariants violate the divisibility chain");
  }
};

struct SmithOptions {
  // Dense path keeps the unimodular transforms and checks U*M*V = D.
  // Matrices with a side above the threshold take the sparse path instead.
  int dense_dim_threshold = 200;
};

namespace detail {

inline Integer abs_int(const Integer& v) { return v < 0 ? Integer(-v) : v; }

/// Textbook Smith normal form with smallest-nonzero pivoting, tracking U, V.
inline SNFResult smith_dense_tracked(const SparseMatrix<Integer>& M) {
  const int r = M.rows, c = M.cols;
  std::vector<std::vector<Integer>> a(r, std::vector<Integer>(c, Integer(0)));
  for (int j = 0; j < c; ++j)
    for (const auto& [i, v] : M.columns[j]) a[i][j] = v;

  std::vector<std::vector<Integer>> U(r, std::vector<Integer>(r, Integer(0)));
  std::vector<std::vector<Integer>> V(c, std::vector<Integer>(c, Integer(0)));
  for (int i = 0; i < r; ++i) U[i][i] = 1;
  for (int j = 0; j < c; ++j) V[j][j] = 1;

  auto row_op = [&](int dst, int src, const Integer& q) {  // row dst -= q*src
    for (int j = 0; j < c; ++j) a[dst][j] -= q * a[src][j];
    for (int j = 0; j < r; ++j) U[dst][j] -= q * U[src][j];
  };
  auto col_op = [&](int dst, int src, const Integer& q) {
    for (int i = 0; i < r; ++i) a[i][dst] -= q * a[i][src];
    for (int i = 0; i < c; ++i) V[i][dst] -= q * V[i][src];
  };
  auto row_swap = [&](int i1, int i2) {
    std::swap(a[i1], a[i2]);
    std::swap(U[i1], U[i2]);
  };
  auto col_swap = [&](int j1, int j2) {
    for (int i = 0; i < r; ++i) std::swap(a[i][j1], a[i][j2]);
    for (int i = 0; i < c; ++i) std::swap(V[i][j1], V[i][j2]);
  };
  auto row_negate = [&](int i) {
    for (int j = 0; j < c; ++j) a[i][j] = -a[i][j];
    for (int j = 0; j < r; ++j) U[i][j] = -U[i][j];
  };

  const int steps = std::min(r, c);
  int t = 0;
  for (; t < steps; ++t) {
    // smallest nonzero entry of the trailing submatrix, first index order
    int pi = -1, pj = -1;
    Integer best(0);
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j)
        if (a[i][j] != 0) {
          Integer v = abs_int(a[i][j]);
          if (pi < 0 || v < best) {
            best = v;
            pi = i;
            pj = j;
          }
        }
    if (pi < 0) break;
    if (pi != t) row_swap(pi, t);
    if (pj != t) col_swap(pj, t);

    for (;;) {
      bool clean = true;
      for (int i = t + 1; i < r; ++i)
        if (a[i][t] != 0) {
          Integer q = a[i][t] / a[t][t];
          row_op(i, t, q);
          if (a[i][t] != 0) {  // remainder smaller than pivot: promote it
            row_swap(i, t);
            clean = false;
          }
        }
      for (int j = t + 1; j < c; ++j)
        if (a[t][j] != 0) {
          Integer q = a[t][j] / a[t][t];
          col_op(j, t, q);
          if (a[t][j] != 0) {
            col_swap(j, t);
            clean = false;
          }
        }
      if (!clean) continue;
      // enforce divisibility against the rest of the submatrix
      bool fixed = false;
      for (int i = t + 1; i < r && !fixed; ++i)
        for (int j = t + 1; j < c && !fixed; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_op(t, i, Integer(-1));  // row t += row i, creates a smaller remainder
            fixed = true;
          }
      if (!fixed) break;
    }
    if (a[t][t] < 0) row_negate(t);
  }

  // validate U * M * V == diag
  std::vector<std::vector<Integer>> P(r, std::vector<Integer>(c, Integer(0)));
  for (int j = 0; j < c; ++j)
    for (const auto& [k, v] : M.columns[j])
      for (int i = 0; i < r; ++i)
        if (U[i][k] != 0) P[i][j] += U[i][k] * v;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      Integer s(0);
      for (int l = 0; l < c; ++l)
        if (P[i][l] != 0 && V[l][j] != 0) s += P[i][l] * V[l][j];
      Integer expect = (i == j && i < t) ? a[i][i] : Integer(0);
      if (s != expect) throw Error("Smith transform validation failed");
    }

  SNFResult res;
  res.rows = r;
  res.cols = c;
  for (int i = 0; i < t; ++i)
    if (a[i][i] != 0) res.invariants.push_back(a[i][i]);
  res.rank = static_cast<int>(res.invariants.size());
  res.check_divisibility_chain();
  return res;
}

/// Sparse path: strip unit pivots with a low-fill heuristic, then finish the
/// small remaining core with the dense routine.
inline SNFResult smith_sparse(const SparseMatrix<Integer>& M) {
  const int r = M.rows, c = M.cols;
  std::vector<std::map<int, Integer>> row(r);
  std::vector<std::set<int>> col_rows(c);
  for (int j = 0; j < c; ++j)
    for (const auto& [i, v] : M.columns[j]) {
      row[i][j] = v;
      col_rows[j].insert(i);
    }

  std::vector<bool> row_live(r, true), col_live(c, true);
  long long unit_pivots = 0;

  for (;;) {
    int pi = -1, pj = -1;
    long long best_cost = -1;
    for (int i = 0; i < r; ++i) {
      if (!row_live[i]) continue;
      for (const auto& [j, v] : row[i]) {
        if (abs_int(v) != 1) continue;
        long long cost = static_cast<long long>(row[i].size() - 1) *
                         static_cast<long long>(col_rows[j].size() - 1);
        if (best_cost < 0 || cost < best_cost) {
          best_cost = cost;
          pi = i;
          pj = j;
          if (cost == 0) break;
        }
      }
      if (best_cost == 0) break;
    }
    if (pi < 0) break;

    const Integer pivot = row[pi][pj];
    std::vector<int> touched(col_rows[pj].begin(), col_rows[pj].end());
    for (int i : touched) {
      if (i == pi || !row_live[i]) continue;
      auto it = row[i].find(pj);
      if (it == row[i].end()) continue;
      Integer q = it->second / pivot;  // exact: |pivot| = 1
      for (const auto& [j, v] : row[pi]) {
        if (!col_live[j]) continue;
        auto jt = row[i].find(j);
        if (jt == row[i].end()) {
          Integer nv = -q * v;
          if (nv != 0) {
            row[i][j] = nv;
            col_rows[j].insert(i);
          }
        } else {
          jt->second -= q * v;
          if (jt->second == 0) {
            row[i].erase(jt);
            col_rows[j].erase(i);
          }
        }
      }
    }
    for (const auto& [j, v] : row[pi]) col_rows[j].erase(pi);
    row[pi].clear();
    row_live[pi] = false;
    col_live[pj] = false;
    ++unit_pivots;
  }

  // gather the core that has no unit entries left
  std::map<int, int> rmap, cmap;
  for (int i = 0; i < r; ++i)
    if (row_live[i] && !row[i].empty()) rmap.emplace(i, static_cast<int>(rmap.size()));
  for (int j = 0; j < c; ++j)
    if (col_live[j] && !col_rows[j].empty()) cmap.emplace(j, static_cast<int>(cmap.size()));

  SNFResult res;
  res.rows = r;
  res.cols = c;
  res.invariants.assign(static_cast<std::size_t>(unit_pivots), Integer(1));
  if (!rmap.empty() && !cmap.empty()) {
    SparseMatrix<Integer> core(static_cast<int>(rmap.size()), static_cast<int>(cmap.size()));
    for (const auto& [i, ri] : rmap)
      for (const auto& [j, v] : row[i])
        if (col_live[j]) core.set(ri, cmap.at(j), v);
    SNFResult inner = smith_dense_tracked(core);
    for (auto& d : inner.invariants) res.invariants.push_back(std::move(d));
  }
  res.rank = static_cast<int>(res.invariants.size());
  res.check_divisibility_chain();
  return res;
}

}  // namespace detail

/// Smith normal form over Z with arbitrary-precision entries.
inline SNFResult smith_normal_form(const SparseMatrix<Integer>& M, SmithOptions opts = {}) {
  if (M.rows <= opts.dense_dim_threshold && M.cols <= opts.dense_dim_threshold)
    return detail::smith_dense_tracked(M);
  return detail::smith_sparse(M);
}

/// Exact rank of an integer matrix (its rank over Q).
inline int integer_rank(const SparseMatrix<Integer>& M) {
  return smith_normal_form(M).rank;
}

/// Prime-power decomposition of the nontrivial invariant factors.
inline std::vector<Integer> torsion_prime_powers(const std::vector<Integer>& invariants) {
  std::vector<Integer> out;
  for (const Integer& d0 : invariants) {
    Integer d = d0;
    if (d <= 1) continue;
    for (Integer p = 2; p * p <= d; ++p) {
      if (d % p != 0) continue;
      Integer q(1);
      while (d % p == 0) {
        q *= p;
        d /= p;
      }
      out.push_back(q);
    }
    if (d > 1) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coarse
