#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "coarse/cochains.hpp"
#include "coarse/simplicial.hpp"

namespace coarse {

// Sign conventions, fixed here and locked by tests:
//   - the cone homotopy D satisfies  dD + Dd = i - f  on its domain;
//   - operator_T uses the negated homotopy internally, so that T = VS on the
//     far subcomplex and the audit identity  phi + d(D*phi) = T*phi - D*(dphi)
//     holds pointwise with the returned cochains.

/// The far subcomplex C^F: tuples with d(sigma, base) >= mu_n(diam sigma).
struct FarSubcomplexSpec {
  Selection base;
  std::vector<ControlFunction> mu;  // per dimension; nondecreasing in n and r

  const ControlFunction& mu_at(int n) const {
    if (mu.empty()) throw BadInput("far spec has no control functions");
    return mu[static_cast<std::size_t>(std::min<int>(n, static_cast<int>(mu.size()) - 1))];
  }

  bool contains(const FiniteMetricSpace& X, const Tuple& t) const {
    int n = static_cast<int>(t.size()) - 1;
    return X.dist_tuple_to_set(t, base) >= mu_at(n)(X.tuple_diameter(t)) - kDistTol;
  }

  void validate(double max_r) const {
    for (std::size_t n = 1; n < mu.size(); ++n)
      for (double r = 0; r <= max_r + kDistTol; r += std::max(max_r / 16.0, 0.25))
        if (mu[n](r) < mu[n - 1](r) - kDistTol)
          throw BadInput("far spec must be nondecreasing in the dimension");
  }
};

/// mu_n(r) = (n+1) r + 2n about the basepoint: small far tuples of every
/// dimension exist while loops around whole features stay excluded.
inline FarSubcomplexSpec default_far_spec(const FiniteMetricSpace& X, int max_dim) {
  FarSubcomplexSpec spec;
  spec.base = Selection({X.require_basepoint()});
  for (int n = 0; n <= max_dim; ++n)
    spec.mu.push_back(ControlFunction::affine(n + 1.0, 2.0 * n));
  return spec;
}

/// A chain map on tuple chains with a displacement certificate:
/// |f(sigma^n)| lies within rho_n(diam sigma) of sigma's vertex set.
template <class T>
struct ControlledChainMap {
  FarSubcomplexSpec domain;          // mu == 0 means globally defined
  std::vector<ControlFunction> rho;  // certificate per dimension
  std::function<Chain<T>(const Tuple&)> eval;
  int max_dim = 3;

  const ControlFunction& rho_at(int n) const {
    if (rho.empty()) throw BadInput("chain map carries no certificate");
    return rho[static_cast<std::size_t>(std::min<int>(n, static_cast<int>(rho.size()) - 1))];
  }
};

/// Chain map induced by a vertex self-map; certificate is the displacement.
template <class T>
ControlledChainMap<T> vertex_chain_map(const FiniteMetricSpace& X, std::vector<PointId> g,
                                       int max_dim) {
  if (static_cast<int>(g.size()) != X.size()) throw BadInput("vertex map size mismatch");
  double delta = 0;
  for (PointId x = 0; x < X.size(); ++x) delta = std::max(delta, X.dist(x, g[x]));

  ControlledChainMap<T> f;
  f.max_dim = max_dim;
  f.domain.base = Selection(std::vector<PointId>{0});
  for (int n = 0; n <= max_dim; ++n) {
    f.domain.mu.push_back(ControlFunction::constant(0));
    f.rho.push_back(ControlFunction::constant(delta));
  }
  f.eval = [g = std::move(g)](const Tuple& t) {
    Tuple image(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) image[i] = g[static_cast<std::size_t>(t[i])];
    return single_tuple_chain<T>(image);
  };
  return f;
}

// -- the filling maps M and S --------------------------------------------------

struct FillingParams {
  double eps = 1.5;
  int max_dim = 2;
  double growth = 1.5;            // neighborhood radii expand geometrically
  double radius_cap_slack = 4.0;  // cap = slack * (diam + eps) unless overridden
  double radius_cap_abs = -1;
  bool audit_mode = false;  // collect FillingNotFound instead of throwing
  std::size_t simplex_cap = kSimplexCap;
  int threads = 0;  // generators fill in parallel once the lower dimension is done
};

/// The inductive filling of far tuples by Rips chains. Images are stored on
/// sorted generators; evaluation extends by permutation sign and kills
/// degenerate tuples (the alternating projection is a chain map, so M stays
/// one on all of C^F).
template <class T>
class FillingMap {
 public:
  FarSubcomplexSpec spec;
  double eps = 0;
  int max_dim = 0;
  std::shared_ptr<const SimplicialComplex> ambient;
  std::vector<std::unordered_map<Tuple, Chain<T>, TupleHash>> images;
  std::vector<double> realized_rho;  // max successful search radius per dim
  std::vector<FillingNotFound> failures;
  bool cover_supported = false;
  Selection bounded_cover_element;

  bool defined_on(const FiniteMetricSpace& X, const Tuple& t) const {
    auto norm = sort_with_sign(t);
    if (!norm) return spec.contains(X, t);
    int n = static_cast<int>(t.size()) - 1;
    return n < static_cast<int>(images.size()) && images[n].count(norm->first) > 0;
  }

  Chain<T> operator()(const Tuple& t) const {
    const int n = static_cast<int>(t.size()) - 1;
    auto norm = sort_with_sign(t);
    if (!norm) return Chain<T>(n);  // degenerate tuples fill by zero
    auto it = images.at(n).find(norm->first);
    if (it == images.at(n).end())
      throw Error("filling evaluated outside its domain");
    Chain<T> out = it->second;
    if (norm->second < 0) {
      Chain<T> neg(out.degree);
      neg.add_chain(out, T(-1));
      return neg;
    }
    return out;
  }

  std::vector<ControlFunction> rho_certificate() const {
    std::vector<ControlFunction> out;
    for (double r : realized_rho) out.push_back(ControlFunction::constant(r));
    return out;
  }

  ControlledChainMap<T> as_chain_map() const {
    ControlledChainMap<T> f;
    f.domain = spec;
    f.rho = rho_certificate();
    f.max_dim = max_dim;
    f.eval = [this](const Tuple& t) { return (*this)(t); };
    return f;
  }
};

namespace detail {

/// Strictly increasing tuples of the given arity with pairwise distance at
/// most within, passing the filter.
inline void enumerate_increasing_tuples(const FiniteMetricSpace& X, int arity, double within,
                                        const std::function<void(const Tuple&)>& sink) {
  std::vector<std::vector<PointId>> later(static_cast<std::size_t>(X.size()));
  for (PointId a = 0; a < X.size(); ++a)
    for (PointId b = a + 1; b < X.size(); ++b)
      if (approx_le(X.dist(a, b), within)) later[a].push_back(b);

  Tuple cur;
  auto rec = [&](auto&& self, const std::vector<PointId>& cands) -> void {
    if (static_cast<int>(cur.size()) == arity) {
      sink(cur);
      return;
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      cur.push_back(cands[i]);
      if (static_cast<int>(cur.size()) == arity) {
        sink(cur);
      } else {
        std::vector<PointId> next;
        std::set_intersection(cands.begin() + i + 1, cands.end(), later[cands[i]].begin(),
                              later[cands[i]].end(), std::back_inserter(next));
        if (!next.empty()) self(self, next);
      }
      cur.pop_back();
    }
  };
  std::vector<PointId> all(static_cast<std::size_t>(X.size()));
  std::iota(all.begin(), all.end(), 0);
  if (arity == 0) return;
  rec(rec, all);
}

/// Largest r with mu(r) <= cap (mu nondecreasing), scanned up to max_r.
inline double inverse_control(const ControlFunction& mu, double cap, double max_r) {
  if (mu(max_r) <= cap) return max_r;
  if (mu(0) > cap) return -1;
  double lo = 0, hi = max_r;
  for (int it = 0; it < 60; ++it) {
    double mid = (lo + hi) / 2;
    (mu(mid) <= cap ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

template <class T>
FillingMap<T> build_filling(const FiniteMetricSpace& X, const FarSubcomplexSpec& spec,
                            const FillingParams& params, const std::vector<Selection>* cover,
                            int bounded_cover_index) {
  static_assert(is_field_v<T>, "fillings solve over a field ring");
  spec.validate(X.diameter());

  FillingMap<T> M;
  M.spec = spec;
  M.eps = params.eps;
  M.max_dim = params.max_dim;
  M.images.assign(static_cast<std::size_t>(params.max_dim) + 1, {});
  M.realized_rho.assign(static_cast<std::size_t>(params.max_dim) + 1, 0.0);

  auto K = std::make_shared<SimplicialComplex>(
      rips_complex(X, params.eps, params.max_dim, params.simplex_cap));
  M.ambient = K;

  // cover bookkeeping: a column is usable if its simplex sits inside one
  // cover element
  std::vector<std::vector<char>> in_cover;
  if (cover) {
    std::vector<char> covered(static_cast<std::size_t>(X.size()), 0);
    for (const auto& U : *cover)
      for (PointId p : U.ids) covered[static_cast<std::size_t>(p)] = 1;
    for (PointId p = 0; p < X.size(); ++p)
      if (!covered[static_cast<std::size_t>(p)])
        throw CoverMismatch("cover does not exhaust the space");
    if (bounded_cover_index < 0 || bounded_cover_index >= static_cast<int>(cover->size()))
      throw CoverMismatch("no distinguished bounded cover element");
    M.cover_supported = true;
    M.bounded_cover_element = (*cover)[static_cast<std::size_t>(bounded_cover_index)];

    in_cover.resize(static_cast<std::size_t>(params.max_dim) + 1);
    for (int k = 0; k <= params.max_dim; ++k) {
      in_cover[k].assign(K->dim_count(k), 0);
      for (int c = 0; c < K->dim_count(k); ++c) {
        for (const auto& U : *cover) {
          bool inside = true;
          for (PointId v : K->dim(k)[c]) inside &= U.contains(v);
          if (inside) {
            in_cover[k][c] = 1;
            break;
          }
        }
      }
    }
  }

  std::vector<SparseMatrix<T>> boundary(static_cast<std::size_t>(params.max_dim) + 1);
  for (int k = 1; k <= params.max_dim; ++k) boundary[k] = boundary_matrix<T>(*K, k);

  double base_reach = 0;
  for (PointId x = 0; x < X.size(); ++x)
    base_reach = std::max(base_reach, X.dist_to_set(x, spec.base));

  std::vector<std::unordered_map<Tuple, char, TupleHash>> failed(
      static_cast<std::size_t>(params.max_dim) + 1);

  // dimension 0: a far vertex fills by itself
  for (PointId x = 0; x < X.size(); ++x) {
    Tuple t{x};
    if (spec.contains(X, t)) M.images[0].emplace(t, single_tuple_chain<T>(t));
  }

  for (int n = 1; n <= params.max_dim; ++n) {
    double dmax = detail::inverse_control(spec.mu_at(n), base_reach, X.diameter());
    if (dmax < 0) continue;
    std::vector<Tuple> generators;
    detail::enumerate_increasing_tuples(X, n + 1, dmax, [&](const Tuple& t) {
      if (spec.contains(X, t)) generators.push_back(t);
    });
    std::sort(generators.begin(), generators.end());

    // generators are independent once dimension n-1 is complete
    const int count = static_cast<int>(generators.size());
    std::vector<Chain<T>> fills(generators.size());
    std::vector<double> used_radius(generators.size(), -1.0);
    std::vector<char> skipped(generators.size(), 0);
    std::vector<std::optional<FillingNotFound>> capped(generators.size());

    parallel_for(count, params.threads, [&](int gi) {
      const Tuple& sigma = generators[static_cast<std::size_t>(gi)];
      // boundary cycle from lower-dimensional fillings
      Chain<T> z(n - 1);
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        Tuple face = sigma;
        face.erase(face.begin() + i);
        if (failed[n - 1].count(face)) {
          skipped[static_cast<std::size_t>(gi)] = 1;
          return;
        }
        auto it = M.images[n - 1].find(face);
        if (it == M.images[n - 1].end()) {
          skipped[static_cast<std::size_t>(gi)] = 1;  // face outside the computed domain
          return;
        }
        z.add_chain(it->second, ring_sign<T>(static_cast<int>(i)));
      }
      if (z.zero()) {
        used_radius[static_cast<std::size_t>(gi)] = 0;
        return;
      }

      SparseVec<T> target;
      for (const auto& [t, v] : z.terms) {
        int idx = K->index_of(n - 1, t);
        if (idx < 0) throw Error("filling boundary leaves the ambient complex");
        target.emplace_back(idx, v);
      }
      std::sort(target.begin(), target.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      const double diam = X.tuple_diameter(sigma);
      const double cap = params.radius_cap_abs > 0
                             ? params.radius_cap_abs
                             : params.radius_cap_slack * (diam + params.eps);
      std::vector<double> to_sigma(static_cast<std::size_t>(X.size()), 0);
      for (PointId p = 0; p < X.size(); ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (PointId q : sigma) best = std::min(best, X.dist(p, q));
        to_sigma[static_cast<std::size_t>(p)] = best;
      }
      for (double radius = diam;; radius *= params.growth) {
        if (radius > cap) {
          capped[static_cast<std::size_t>(gi)] =
              FillingNotFound(sigma, cap, "no filling within the radius cap");
          return;
        }
        std::vector<int> allowed;
        for (int c = 0; c < K->dim_count(n); ++c) {
          if (cover && !in_cover[n][c]) continue;
          bool ok = true;
          for (PointId v : K->dim(n)[c])
            ok &= approx_le(to_sigma[static_cast<std::size_t>(v)], radius);
          if (ok) allowed.push_back(c);
        }
        if (auto sol = solve_in_subspace(boundary[n], target, allowed)) {
          Chain<T> fill(n);
          for (const auto& [c, v] : *sol) fill.add(K->dim(n)[c], v);
          fills[static_cast<std::size_t>(gi)] = std::move(fill);
          used_radius[static_cast<std::size_t>(gi)] = radius;
          return;
        }
      }
    });

    // deterministic merge in generator order
    for (int gi = 0; gi < count; ++gi) {
      const Tuple& sigma = generators[static_cast<std::size_t>(gi)];
      if (skipped[static_cast<std::size_t>(gi)]) {
        failed[n].emplace(sigma, 1);
        continue;
      }
      if (capped[static_cast<std::size_t>(gi)]) {
        if (!params.audit_mode) throw *capped[static_cast<std::size_t>(gi)];
        M.failures.push_back(*capped[static_cast<std::size_t>(gi)]);
        failed[n].emplace(sigma, 1);
        continue;
      }
      fills[static_cast<std::size_t>(gi)].degree = n;
      M.images[n].emplace(sigma, std::move(fills[static_cast<std::size_t>(gi)]));
      M.realized_rho[n] = std::max(M.realized_rho[n], used_radius[static_cast<std::size_t>(gi)]);
    }
  }
  return M;
}

/// Controlled filling M : C^F -> Rips chains about the base.
template <class T>
FillingMap<T> filling_map_M(const FiniteMetricSpace& X, const FarSubcomplexSpec& spec,
                            const FillingParams& params) {
  return build_filling<T>(X, spec, params, nullptr, 0);
}

/// Cover-constrained filling S: every simplex of the output lies inside a
/// single cover element. The subdivision step of the source construction is
/// replaced by constraining the solves to cover-supported columns.
template <class T>
FillingMap<T> cover_filling_S(const FiniteMetricSpace& X, const FarSubcomplexSpec& spec,
                              const std::vector<Selection>& cover, int bounded_index,
                              const FillingParams& params) {
  return build_filling<T>(X, spec, params, &cover, bounded_index);
}

/// dM(sigma) == M(d sigma) on every stored generator.
template <class T>
bool filling_is_chain_map(const FiniteMetricSpace&, const FillingMap<T>& M) {
  for (int n = 1; n < static_cast<int>(M.images.size()); ++n) {
    for (const auto& [sigma, img] : M.images[n]) {
      Chain<T> lhs = chain_boundary(img);
      Chain<T> rhs(n - 1);
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        Tuple face = sigma;
        face.erase(face.begin() + i);
        rhs.add_chain(M.images[n - 1].at(face), ring_sign<T>(static_cast<int>(i)));
      }
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

/// Certificate check: |M(sigma)| within realized_rho[n] of sigma's vertices.
template <class T>
bool filling_respects_certificate(const FiniteMetricSpace& X, const FillingMap<T>& M) {
  for (int n = 0; n < static_cast<int>(M.images.size()); ++n)
    for (const auto& [sigma, img] : M.images[n])
      if (!chain_within(X, img, sigma, std::max(M.realized_rho[n], X.tuple_diameter(sigma))))
        return false;
  return true;
}

// -- the cone chain homotopy D --------------------------------------------------

/// Inductive cone homotopy between a controlled chain map f and the identity
/// inclusion:  dD + Dd = i - f  on f's domain, with |D(sigma)| within the
/// certificate neighborhood of sigma. Cone vertices are chosen as the minimal
/// point id in the chain, so identical inputs produce identical chains.
template <class T>
class ConeHomotopy {
 public:
  ConeHomotopy(const FiniteMetricSpace& X, ControlledChainMap<T> f, int max_dim)
      : X_(&X), f_(std::move(f)), max_dim_(max_dim), memo_(max_dim + 1) {}

  const ControlledChainMap<T>& map() const { return f_; }
  int max_dim() const { return max_dim_; }

  bool in_domain(const Tuple& t) const { return f_.domain.contains(*X_, t); }

  /// D(t) for t in the domain (throws otherwise).
  const Chain<T>& at(const Tuple& t) {
    const int n = static_cast<int>(t.size()) - 1;
    if (n > max_dim_) throw DimensionMismatch("cone homotopy beyond its max dimension");
    if (!in_domain(t)) throw Error("cone homotopy evaluated outside the domain");
    auto it = memo_[n].find(t);
    if (it != memo_[n].end()) return it->second;

    Chain<T> D(n + 1);
    if (n == 0) {
      Chain<T> fx = f_.eval(t);
      if (!(augmentation(fx) == T(1)))
        throw Error("degree-0 image must have augmentation one");
      // D0(x) = -sum a_i (x, y_i), so that dD0(x) = x - f(x); the degenerate
      // pair (x, x) contributes nothing and is dropped, making D vanish on
      // the identity
      for (const auto& [img, a] : fx.terms)
        if (img[0] != t[0]) D.add(Tuple{t[0], img[0]}, T(-a));
    } else {
      Chain<T> c = single_tuple_chain<T>(t);
      c.add_chain(f_.eval(t), T(-1));
      for (std::size_t i = 0; i < t.size(); ++i) {
        Tuple face = t;
        face.erase(face.begin() + i);
        c.add_chain(at(face), T(-ring_sign<T>(static_cast<int>(i))));
      }
      if (!c.zero()) {
        PointId v = c.support_points().front();  // minimal id, deterministic
        D = cone(v, c);
      }
    }
    return memo_[n].emplace(t, std::move(D)).first->second;
  }

  /// Zero-extended evaluation used by operator_T.
  Chain<T> eval_zero_extended(const Tuple& t) {
    const int n = static_cast<int>(t.size()) - 1;
    if (n > max_dim_ || !in_domain(t)) return Chain<T>(n + 1);
    return at(t);
  }

  /// dD(sigma) + D(d sigma) - (sigma - f(sigma)); zero iff the identity holds.
  Chain<T> homotopy_defect(const Tuple& t) {
    const int n = static_cast<int>(t.size()) - 1;
    Chain<T> defect = chain_boundary(at(t));
    if (n >= 1)
      for (std::size_t i = 0; i < t.size(); ++i) {
        Tuple face = t;
        face.erase(face.begin() + i);
        defect.add_chain(at(face), ring_sign<T>(static_cast<int>(i)));
      }
    defect.add_chain(single_tuple_chain<T>(t), T(-1));
    defect.add_chain(f_.eval(t), T(1));
    return defect;
  }

  /// |D(sigma)| within rho_n(diam sigma) of sigma (the certificate bound).
  bool displacement_ok(const Tuple& t) {
    const int n = static_cast<int>(t.size()) - 1;
    double bound = f_.rho_at(n)(X_->tuple_diameter(t));
    return chain_within(*X_, at(t), t, bound);
  }

 private:
  const FiniteMetricSpace* X_;
  ControlledChainMap<T> f_;
  int max_dim_;
  std::vector<std::unordered_map<Tuple, Chain<T>, TupleHash>> memo_;
};

// -- operator T and its support audit -------------------------------------------

/// Cover adapted to a boundedly supported cochain: a bounded element U
/// containing a neighborhood of ||phi||, plus balls U_x small enough that no
/// support tuple of phi fits inside any of them.
struct AdaptedCover {
  std::vector<Selection> cover;  // cover[0] is the bounded element U
  int bounded_index = 0;
};

template <class T>
AdaptedCover build_adapted_cover(const FiniteMetricSpace& X, const Cochain<T>& phi, double eps) {
  AdaptedCover out;
  std::vector<PointId> trace;
  for (const auto& [t, v] : phi.values) {
    bool constant = true;
    for (PointId p : t) constant &= (p == t.front());
    if (constant) trace.push_back(t.front());
  }
  Selection trace_sel(std::move(trace));
  Selection U = trace_sel.empty() ? neighborhood(X, Selection({X.require_basepoint()}), eps)
                                  : neighborhood(X, trace_sel, 2 * eps);
  out.cover.push_back(std::move(U));

  for (PointId x = 0; x < X.size(); ++x) {
    double m_min = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : phi.values) {
      double m = 0;
      for (PointId p : t) m = std::max(m, X.dist(x, p));
      m_min = std::min(m_min, m);
    }
    double radius = std::min(eps, m_min - 1e-6);
    if (radius <= 0) {
      if (!out.cover[0].contains(x))
        throw CoverMismatch("point admits no phi-avoiding neighborhood");
      continue;
    }
    out.cover.push_back(neighborhood(X, Selection({x}), radius));
  }
  return out;
}

template <class T>
struct OperatorTResult {
  Cochain<T> T_star_phi;   // phi composed with T = id - dD - Dd (so T = VS far out)
  Cochain<T> D_star_phi;   // the negated homotopy transpose: -(phi . D)
  Cochain<T> D_star_dphi;  // -(dphi . D)
  SupportReport<T> support_T, support_D, support_Dd;
  bool identity_holds = false;   // phi + d(D*phi) = T*phi - D*(dphi), pointwise
  bool claim_coarse_T = false;   // (a) T*phi escapes only near b or near U
  bool claim_coarse_Dd = false;  // (b) D* preserves coarseness on dphi
  bool claim_bounded_D = false;  // (c) ||D*phi|| stays in ||phi|| plus a bounded set
  double bounded_D_radius = 0;   // realized bound for claim (c)
  std::vector<std::string> violations;

  bool all_pass() const {
    return identity_holds && claim_coarse_T && claim_coarse_Dd && claim_bounded_D;
  }
};

/// Evaluates T*phi, D*phi and D*(dphi) on the whole truncation and audits
/// the three support properties behind the coboundary correction: T*phi is
/// coarse, D* preserves coarseness, and D*phi is boundedly supported. The
/// bounds are stated in the vertex-set semantics the construction controls.
template <class T>
OperatorTResult<T> operator_T_audit(const FiniteMetricSpace& X, const Cochain<T>& phi,
                                    ConeHomotopy<T>& D, const FillingMap<T>& S,
                                    std::size_t tuple_cap = 2000000) {
  const int n = phi.degree;
  PointId b = X.require_basepoint();
  const FarSubcomplexSpec& spec = D.map().domain;
  if (!S.failures.empty()) throw CoverMismatch("cover filling carries failures");

  double tuples = std::pow(static_cast<double>(X.size()), n + 2);
  if (tuples > static_cast<double>(tuple_cap))
    throw SizeLimit("operator_T audit enumerates all tuples; space too large");

  OperatorTResult<T> out;
  out.T_star_phi = Cochain<T>(n);
  out.D_star_phi = Cochain<T>(n - 1 >= 0 ? n - 1 : 0);
  out.D_star_dphi = Cochain<T>(n);

  Cochain<T> dphi = coboundary(phi, X);

  auto for_each_tuple = [&](int arity, const std::function<void(const Tuple&)>& body) {
    Tuple t(static_cast<std::size_t>(arity), 0);
    for (;;) {
      body(t);
      int k = 0;
      while (k < arity && ++t[static_cast<std::size_t>(k)] >= X.size())
        t[static_cast<std::size_t>(k++)] = 0;
      if (k == arity) return;
    }
  };

  // T*phi(sigma) = phi(sigma) - phi(dD sigma) - phi(D d sigma)
  for_each_tuple(n + 1, [&](const Tuple& sigma) {
    T val = phi(sigma);
    Chain<T> Ds = D.eval_zero_extended(sigma);
    if (!Ds.zero()) val -= phi(chain_boundary(Ds));
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      Tuple face = sigma;
      face.erase(face.begin() + i);
      Chain<T> Df = D.eval_zero_extended(face);
      if (!Df.zero()) val -= ring_sign<T>(static_cast<int>(i)) * phi(Df);
    }
    if (!(val == T(0))) out.T_star_phi.set(sigma, val);
  });

  if (n >= 1)
    for_each_tuple(n, [&](const Tuple& tau) {
      Chain<T> Dt = D.eval_zero_extended(tau);
      if (Dt.zero()) return;
      T val = T(0) - phi(Dt);
      if (!(val == T(0))) out.D_star_phi.set(tau, val);
    });

  for_each_tuple(n + 1, [&](const Tuple& sigma) {
    Chain<T> Ds = D.eval_zero_extended(sigma);
    if (Ds.zero()) return;
    T val = T(0) - dphi(Ds);
    if (!(val == T(0))) out.D_star_dphi.set(sigma, val);
  });

  // pointwise identity phi + d(D*phi) = T*phi - D*(dphi)
  out.identity_holds = true;
  for_each_tuple(n + 1, [&](const Tuple& sigma) {
    T lhs = phi(sigma);
    if (n >= 1)
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        Tuple face = sigma;
        face.erase(face.begin() + i);
        lhs += ring_sign<T>(static_cast<int>(i)) * out.D_star_phi(face);
      }
    T rhs = out.T_star_phi(sigma) - out.D_star_dphi(sigma);
    if (!(lhs == rhs)) {
      out.identity_holds = false;
      out.violations.push_back("identity fails on a tuple");
    }
  });

  std::vector<double> report_grid{0.0, 1.0, 2.0, 4.0, X.diameter() / 2};
  out.support_T = support_report(out.T_star_phi, X, report_grid);
  out.support_D = support_report(out.D_star_phi, X, report_grid);
  out.support_Dd = support_report(out.D_star_dphi, X, report_grid);

  // support points of |phi| and |dphi| for the displacement claims
  auto support_pts = [&](const Cochain<T>& c) {
    std::vector<char> mark(static_cast<std::size_t>(X.size()), 0);
    for (const auto& [t, v] : c.values)
      for (PointId p : t) mark[static_cast<std::size_t>(p)] = 1;
    std::vector<PointId> pts;
    for (PointId p = 0; p < X.size(); ++p)
      if (mark[static_cast<std::size_t>(p)]) pts.push_back(p);
    return Selection(std::move(pts));
  };
  Selection phi_pts = support_pts(phi);
  Selection dphi_pts = support_pts(dphi);
  const Selection& U = S.bounded_cover_element;

  // (a): sigma in |T*phi| only if sigma is not far, or touches N_rho(U)
  out.claim_coarse_T = true;
  for (const auto& [sigma, v] : out.T_star_phi.values) {
    double diam = X.tuple_diameter(sigma);
    bool near_b = X.dist_tuple_to_set(sigma, spec.base) < spec.mu_at(n)(diam) - kDistTol;
    bool near_U = approx_le(X.dist_tuple_to_set(sigma, U),
                            S.realized_rho[static_cast<std::size_t>(std::min(n, S.max_dim))]);
    if (!near_b && !near_U) {
      out.claim_coarse_T = false;
      out.violations.push_back("T*phi support escapes both bounds");
    }
  }

  // (b): sigma in |D*(dphi)| stays within the certificate of |dphi|'s points
  out.claim_coarse_Dd = true;
  for (const auto& [sigma, v] : out.D_star_dphi.values) {
    double rho = D.map().rho_at(n)(X.tuple_diameter(sigma));
    if (!approx_le(X.dist_tuple_to_set(sigma, dphi_pts), rho)) {
      out.claim_coarse_Dd = false;
      out.violations.push_back("D*(dphi) support drifted from |dphi|");
    }
  }

  // (c): ||D*phi|| inside ||phi|| union a bounded set around b and |phi|
  out.claim_bounded_D = true;
  if (n >= 1) {
    double mu0 = spec.mu_at(n - 1)(0.0);
    double rho0 = D.map().rho_at(n - 1)(0.0);
    double reach = mu0;
    for (PointId p : phi_pts.ids) reach = std::max(reach, X.dist(p, b) + rho0);
    out.bounded_D_radius = reach;
    for (const auto& [tau, v] : out.D_star_phi.values) {
      bool constant = true;
      for (PointId p : tau) constant &= (p == tau.front());
      if (!constant) continue;
      PointId x = tau.front();
      bool near_b = X.dist(x, b) < mu0 + kDistTol;
      bool near_phi = approx_le(X.dist_to_set(x, phi_pts), rho0);
      if (!near_b && !near_phi) {
        out.claim_bounded_D = false;
        out.violations.push_back("||D*phi|| escapes the bounded region");
      }
    }
    if (!is_boundedly_supported(out.D_star_phi, X, out.bounded_D_radius))
      out.claim_bounded_D = false;
  }

  return out;
}

}  // namespace coarse
