#pragma once

#include <memory>
#include <vector>

#include "coarse/eliminate.hpp"
#include "coarse/simplicial.hpp"
#include "coarse/smith.hpp"

namespace coarse {

struct CohomologyGroup {
  int degree = 0;
  long free_rank = 0;
  std::vector<long long> torsion;  // prime-power orders; empty over fields
};

/// n x 1 column of ones: the image of the augmentation C^{-1} = R -> C^0.
template <class T>
SparseMatrix<T> augmentation_column(int n_vertices) {
  SparseMatrix<T> M(n_vertices, 1);
  for (int r = 0; r < n_vertices; ++r) M.columns[0].emplace_back(r, T(1));
  return M;
}

/// Basis of ker(closed) / im(exact), with an expresser for coordinates.
/// Columns of `exact` must lie in ker(closed) (a chain-complex identity).
template <class F>
class QuotientBasis {
 public:
  QuotientBasis(const SparseMatrix<F>& closed, const SparseMatrix<F>& exact)
      : space_dim_(closed.cols) {
    if (exact.rows != closed.cols) throw DimensionMismatch("chain complex shape mismatch");
    auto rki = rank_kernel_image(closed);
    Eliminator<F> probe(space_dim_, exact.cols + static_cast<int>(rki.kernel_basis.size()));
    for (int c = 0; c < exact.cols; ++c) probe.add_column(c, exact.columns[c]);
    exact_rank_ = probe.rank();
    int next = exact.cols;
    for (auto& k : rki.kernel_basis)
      if (!probe.add_column(next++, k)) reps_.push_back(std::move(k));

    expresser_ = std::make_unique<Eliminator<F>>(space_dim_,
                                                 static_cast<int>(reps_.size()) + exact.cols);
    for (std::size_t i = 0; i < reps_.size(); ++i)
      expresser_->add_column(static_cast<int>(i), reps_[i]);
    for (int c = 0; c < exact.cols; ++c)
      expresser_->add_column(static_cast<int>(reps_.size()) + c, exact.columns[c]);
  }

  int betti() const { return static_cast<int>(reps_.size()); }
  int exact_rank() const { return exact_rank_; }
  const std::vector<SparseVec<F>>& representatives() const { return reps_; }

  /// Coordinates of a cycle's class in the representative basis.
  std::vector<F> coordinates(const SparseVec<F>& cycle) const {
    auto sol = expresser_->solve(cycle);
    if (!sol) throw Error("vector is not a cycle modulo the exact part");
    std::vector<F> coords(reps_.size(), F(0));
    for (const auto& [i, v] : *sol)
      if (i < static_cast<int>(reps_.size())) coords[i] = v;
    return coords;
  }

 private:
  int space_dim_;
  int exact_rank_ = 0;
  std::vector<SparseVec<F>> reps_;
  std::unique_ptr<Eliminator<F>> expresser_;
};

/// Field cohomology data of a complex for degrees 0..max_degree.
/// The complex must carry simplices up to max_degree + 1.
template <class F>
struct ComplexCohomology {
  std::vector<std::shared_ptr<QuotientBasis<F>>> degree;  // [n]
  bool reduced = false;

  int betti(int n) const { return degree[n]->betti(); }
};

/// d^n of the built complex; the zero map when the complex carries no
/// (n+1)-simplices (cohomology of the truncated complex).
template <class F>
SparseMatrix<F> coboundary_or_zero(const SimplicialComplex& K, int n) {
  if (n + 1 > K.max_dim || K.dim_count(n + 1) == 0) return SparseMatrix<F>(0, K.dim_count(n));
  return coboundary_matrix<F>(K, n);
}

template <class F>
ComplexCohomology<F> cohomology_over_field(const SimplicialComplex& K, int max_degree,
                                           bool reduced) {
  if (K.dim_count(0) == 0) throw EmptyComplex("cohomology of an empty complex");
  ComplexCohomology<F> out;
  out.reduced = reduced;
  for (int n = 0; n <= max_degree; ++n) {
    SparseMatrix<F> closed = coboundary_or_zero<F>(K, n);
    SparseMatrix<F> exact = (n == 0)
                                ? (reduced ? augmentation_column<F>(K.dim_count(0))
                                           : SparseMatrix<F>(K.dim_count(0), 0))
                                : coboundary_or_zero<F>(K, n - 1);
    out.degree.push_back(std::make_shared<QuotientBasis<F>>(closed, exact));
  }
  return out;
}

/// The matrix of the restriction H^n(K_big) -> H^n(K_small) along an
/// inclusion K_small <= K_big, in the representative bases.
template <class F>
std::vector<std::vector<F>> restriction_matrix(const SimplicialComplex& big,
                                               const ComplexCohomology<F>& big_coh,
                                               const SimplicialComplex& small,
                                               const ComplexCohomology<F>& small_coh, int n) {
  const auto& reps = big_coh.degree[n]->representatives();
  const int b_small = small_coh.degree[n]->betti();
  std::vector<std::vector<F>> M(b_small, std::vector<F>(reps.size(), F(0)));
  for (std::size_t j = 0; j < reps.size(); ++j) {
    SparseVec<F> restricted;
    for (const auto& [idx, v] : reps[j]) {
      int t = small.index_of(n, big.dim(n)[idx]);
      if (t >= 0) restricted.emplace_back(t, v);
    }
    std::sort(restricted.begin(), restricted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto coords = small_coh.degree[n]->coordinates(restricted);
    for (int i = 0; i < b_small; ++i) M[i][j] = coords[i];
  }
  return M;
}

template <class F>
int dense_rank(std::vector<std::vector<F>> M) {
  int rank = 0;
  const int rows = static_cast<int>(M.size());
  const int cols = rows ? static_cast<int>(M[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!(M[r][c] == F(0))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[piv], M[rank]);
    F inv = F(1) / M[rank][c];
    for (int cc = c; cc < cols; ++cc) M[rank][cc] = M[rank][cc] * inv;
    for (int r = 0; r < rows; ++r)
      if (r != rank && !(M[r][c] == F(0))) {
        F f = M[r][c];
        for (int cc = c; cc < cols; ++cc) M[r][cc] = M[r][cc] - f * M[rank][cc];
      }
    ++rank;
  }
  return rank;
}

template <class F>
std::vector<std::vector<F>> dense_product(const std::vector<std::vector<F>>& A,
                                          const std::vector<std::vector<F>>& B) {
  const int rows = static_cast<int>(A.size());
  const int inner = rows ? static_cast<int>(A[0].size()) : 0;
  const int cols = B.empty() ? 0 : static_cast<int>(B[0].size());
  if (static_cast<int>(B.size()) != inner) throw DimensionMismatch("map composition mismatch");
  std::vector<std::vector<F>> C(rows, std::vector<F>(cols, F(0)));
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < inner; ++k) {
      if (A[i][k] == F(0)) continue;
      for (int j = 0; j < cols; ++j) C[i][j] += A[i][k] * B[k][j];
    }
  return C;
}

// -- ring-dispatched group lists ---------------------------------------------

/// Cohomology groups of the built complex for degrees 0..max_degree.
inline std::vector<CohomologyGroup> cohomology_groups(const SimplicialComplex& K, Ring ring,
                                                      int max_degree, bool reduced) {
  if (K.dim_count(0) == 0) throw EmptyComplex("cohomology of an empty complex");
  std::vector<CohomologyGroup> out;

  auto field_path = [&](auto tag) {
    using F = decltype(tag);
    int prev_rank = reduced ? 1 : 0;  // rank of the augmentation column
    for (int n = 0; n <= max_degree; ++n) {
      auto rki = rank_kernel_image(coboundary_or_zero<F>(K, n));
      CohomologyGroup g;
      g.degree = n;
      g.free_rank = static_cast<long>(rki.kernel_basis.size()) - prev_rank;
      out.push_back(g);
      prev_rank = rki.rank;
    }
  };

  switch (ring) {
    case Ring::GF2: field_path(GF2()); break;
    case Ring::Q: field_path(Rational()); break;
    case Ring::Z: {
      int prev_rank = reduced ? 1 : 0;
      std::vector<Integer> prev_invariants;
      for (int n = 0; n <= max_degree; ++n) {
        SNFResult snf = smith_normal_form(coboundary_or_zero<Integer>(K, n));
        CohomologyGroup g;
        g.degree = n;
        g.free_rank = (K.dim_count(n) - snf.rank) - prev_rank;
        for (const Integer& q : torsion_prime_powers(prev_invariants))
          g.torsion.push_back(static_cast<long long>(q));
        out.push_back(g);
        prev_rank = snf.rank;
        prev_invariants = snf.invariants;
      }
      break;
    }
  }
  return out;
}

}  // namespace coarse
