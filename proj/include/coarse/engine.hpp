#pragma once

#include <sstream>
#include <string>

#include "coarse/cochains.hpp"
#include "coarse/fillings.hpp"
#include "coarse/generators.hpp"
#include "coarse/tower.hpp"

namespace coarse {

struct CoarseParams {
  int profile_max_degree = 3;
  int stages = 12;
  TowerParams tower;  // r_grid may be left empty for the default grid
};

/// Per-degree coarse cohomology verdict. Degree 0 of an unbounded model is 0
/// by the degree rule; degree k >= 1 carries the colimit analysis of the
/// complement tower in degree k-1.
struct CoarseProfile {
  struct Entry {
    int degree = 0;
    ColimitStatus status = ColimitStatus::STABILIZED;
    long rank = 0;
    std::vector<int> stage_ranks;       // tower stage betti (degree k-1)
    std::vector<int> persistent_ranks;  // tower persistent ranks (degree k-1)
  };
  std::vector<Entry> entries;
  bool bounded_case = false;
  std::vector<double> r_grid;
  std::vector<double> dropped_radii;
  double eps = 0;
  double truncation_radius = 0;
  Ring ring = Ring::GF2;
  std::string caveat;

  const Entry& degree(int k) const { return entries.at(static_cast<std::size_t>(k)); }
};

namespace detail {

/// Stage radii respecting the truncation margin r <= trunc - 2 eps.
inline std::vector<double> admissible_r_grid(const FiniteMetricSpace& X,
                                             const CoarseParams& params,
                                             std::vector<std::string>* warnings = nullptr) {
  std::vector<double> grid = params.tower.r_grid.empty()
                                 ? default_r_grid(X, params.tower.eps, params.stages)
                                 : params.tower.r_grid;
  if (X.truncation_radius > 0) {
    double margin = X.truncation_radius - 2 * params.tower.eps;
    std::vector<double> kept;
    for (double r : grid)
      if (approx_le(r, margin)) kept.push_back(r);
    if (kept.size() < grid.size() && warnings)
      warnings->push_back("stages beyond the truncation margin were discarded");
    grid = std::move(kept);
  }
  return grid;
}

template <class F>
CoarseProfile profile_from_tower(const Tower<F>& T, const CoarseParams& params) {
  CoarseProfile prof;
  prof.bounded_case = false;
  prof.eps = T.params.eps;
  prof.ring = T.params.ring;
  for (const auto& s : T.stages) prof.r_grid.push_back(s.r);
  prof.dropped_radii = T.dropped_stages;
  prof.caveat =
      "valid under the uniform-contractibility-at-infinity hypothesis; "
      "only its acyclicity consequence is machine-checkable (see check-acyclic)";

  std::vector<DegreeColimit> verdicts;
  if (T.stage_count() >= T.params.window + T.params.stability) {
    verdicts = colimit_analysis(T, T.params.window, T.params.stability);
  } else {
    // geometry capped the tower short of a stability verdict; report the
    // stage data with NON_STABILIZED entries
    prof.caveat += "; too few stages for a stability verdict";
    for (int deg = 0; deg <= T.params.max_degree; ++deg) {
      DegreeColimit dc;
      dc.degree = deg;
      for (int i = 0; i < T.stage_count(); ++i) dc.stage_betti.push_back(T.betti(i, deg));
      for (int i = 0; i + T.params.window < T.stage_count(); ++i)
        dc.persistent_ranks.push_back(T.persistent_rank(deg, i, i + T.params.window));
      dc.status = ColimitStatus::NON_STABILIZED;
      verdicts.push_back(std::move(dc));
    }
  }
  CoarseProfile::Entry deg0;
  deg0.degree = 0;
  deg0.status = ColimitStatus::STABILIZED;
  deg0.rank = 0;  // unbounded models vanish in degree 0
  prof.entries.push_back(deg0);
  for (int k = 1; k <= params.profile_max_degree; ++k) {
    const DegreeColimit& dc = verdicts.at(static_cast<std::size_t>(k - 1));
    CoarseProfile::Entry e;
    e.degree = k;
    e.status = dc.status;
    e.rank = dc.rank;
    e.stage_ranks = dc.stage_betti;
    e.persistent_ranks = dc.persistent_ranks;
    prof.entries.push_back(std::move(e));
  }
  return prof;
}

}  // namespace detail

/// Coarse cohomology profile of a space via the degree-shifted complement
/// tower about the basepoint; bounded spaces take the full-complex route.
template <class F>
std::pair<CoarseProfile, Tower<F>> coarse_cohomology_with_tower(const FiniteMetricSpace& X,
                                                                CoarseParams params) {
  if (!X.unbounded_model) {
    CoarseProfile prof;
    prof.bounded_case = true;
    prof.ring = params.tower.ring;
    auto groups = full_complex_cohomology(X, params.tower.ring, params.profile_max_degree);
    for (const auto& g : groups) {
      CoarseProfile::Entry e;
      e.degree = g.degree;
      e.status = ColimitStatus::STABILIZED;
      e.rank = g.free_rank;
      prof.entries.push_back(e);
    }
    return {prof, Tower<F>{}};
  }

  PointId b = X.require_basepoint();
  params.tower.max_degree = std::max(params.tower.max_degree, params.profile_max_degree - 1);
  std::vector<std::string> warnings;
  params.tower.r_grid = detail::admissible_r_grid(X, params, &warnings);
  if (params.tower.r_grid.empty()) throw EmptyTower("no admissible stage radii");
  Tower<F> T = build_complement_tower<F>(X, Selection({b}), params.tower);
  CoarseProfile prof = detail::profile_from_tower(T, params);
  prof.truncation_radius = X.truncation_radius;
  for (auto& w : warnings) prof.caveat += "; " + w;
  return {std::move(prof), std::move(T)};
}

template <class F>
CoarseProfile coarse_cohomology(const FiniteMetricSpace& X, const CoarseParams& params) {
  return coarse_cohomology_with_tower<F>(X, params).first;
}

/// Coarse cohomology of the complement X - A: the same tower taken about the
/// subset A instead of a point.
template <class F>
std::pair<CoarseProfile, Tower<F>> coarse_cohomology_of_complement_with_tower(
    const FiniteMetricSpace& X, const Selection& A, CoarseParams params) {
  if (A.empty()) throw EmptySubset("complement driver needs a nonempty subset");
  params.tower.max_degree = std::max(params.tower.max_degree, params.profile_max_degree - 1);
  std::vector<std::string> warnings;
  params.tower.r_grid = detail::admissible_r_grid(X, params, &warnings);
  if (params.tower.r_grid.empty()) throw EmptyTower("no admissible stage radii");

  bool any_nonempty = false;
  for (double r : params.tower.r_grid)
    any_nonempty |= !complement(X, neighborhood(X, A, r)).empty();
  if (!any_nonempty)
    throw ComplementExhausted("N_r(A) swallows the truncation at every stage radius");

  Tower<F> T = build_complement_tower<F>(X, A, params.tower);
  CoarseProfile prof = detail::profile_from_tower(T, params);
  prof.truncation_radius = X.truncation_radius;
  for (auto& w : warnings) prof.caveat += "; " + w;
  return {std::move(prof), std::move(T)};
}

template <class F>
CoarseProfile coarse_cohomology_of_complement(const FiniteMetricSpace& X, const Selection& A,
                                              const CoarseParams& params) {
  return coarse_cohomology_of_complement_with_tower<F>(X, A, params).first;
}

// -- d_A consistency cross-check ----------------------------------------------

struct DAConsistencyReport {
  bool pass = false;
  std::vector<double> r_grid;
  std::vector<std::string> mismatches;
  CoarseProfile profile_direct;    // tower on (X, d) about A
  CoarseProfile profile_quotient;  // tower on (X/A, d_A) about [A]
};

/// Builds the complement tower twice, on (X, d) about A and on the quotient
/// (X/A, d_A) about the collapsed point, and demands identical complexes for
/// stages with r > 2 eps, hence identical Betti and persistent-rank tables.
template <class F>
DAConsistencyReport consistency_check_dA(const FiniteMetricSpace& X, const Selection& A,
                                         CoarseParams params) {
  if (A.empty()) throw EmptySubset("consistency check needs a nonempty subset");
  // the complexes are provably identical only for stages with r > 2 eps,
  // so the default grid for this check starts there
  std::vector<double> far_grid;
  if (params.tower.r_grid.empty()) {
    double lo = 2 * params.tower.eps + 0.5;
    double hi = std::max(X.truncation_radius > 0 ? X.truncation_radius / 2 : X.diameter() / 2,
                         lo * 1.5);
    double ratio = std::pow(hi / lo, 1.0 / std::max(1, params.stages - 1));
    for (int i = 0; i < params.stages; ++i) far_grid.push_back(lo * std::pow(ratio, i));
  } else {
    for (double r : params.tower.r_grid)
      if (r > 2 * params.tower.eps + kDistTol) far_grid.push_back(r);
  }
  if (X.truncation_radius > 0) {
    std::vector<double> kept;
    for (double r : far_grid)
      if (approx_le(r, X.truncation_radius - 2 * params.tower.eps)) kept.push_back(r);
    far_grid = std::move(kept);
  }
  if (far_grid.empty()) throw BadInput("no stage radii beyond 2*eps");
  params.tower.r_grid = far_grid;

  DAConsistencyReport rep;
  rep.r_grid = far_grid;

  auto [prof_x, tower_x] = coarse_cohomology_of_complement_with_tower<F>(X, A, params);
  QuotientResult Q = quotient_by_subset(X, A);

  CoarseParams qparams = params;
  Tower<F> tower_q = build_complement_tower<F>(Q.space, Selection({Q.class_point}), qparams.tower);
  CoarseProfile prof_q = detail::profile_from_tower(tower_q, qparams);
  prof_q.truncation_radius = Q.space.truncation_radius;

  rep.profile_direct = prof_x;
  rep.profile_quotient = prof_q;

  auto complain = [&](const std::string& msg) { rep.mismatches.push_back(msg); };

  if (tower_x.stage_count() != tower_q.stage_count()) {
    complain("stage counts differ");
  } else {
    for (int s = 0; s < tower_x.stage_count(); ++s) {
      const SimplicialComplex& KX = tower_x.stages[s].complex;
      const SimplicialComplex& KQ = tower_q.stages[s].complex;
      for (int k = 0; k <= KX.max_dim; ++k) {
        if (KX.dim_count(k) != KQ.dim_count(k)) {
          std::ostringstream os;
          os << "stage r=" << tower_x.stages[s].r << ": simplex counts differ in dim " << k;
          complain(os.str());
          continue;
        }
        std::vector<Tuple> mapped;
        mapped.reserve(KX.dim_count(k));
        for (const Tuple& t : KX.dim(k)) {
          Tuple m;
          m.reserve(t.size());
          for (PointId v : t) m.push_back(Q.old_to_new[v]);
          std::sort(m.begin(), m.end());
          mapped.push_back(std::move(m));
        }
        std::sort(mapped.begin(), mapped.end());
        if (mapped != KQ.dim(k)) {
          std::ostringstream os;
          os << "stage r=" << tower_x.stages[s].r << ": complexes differ in dim " << k;
          complain(os.str());
        }
      }
      for (int d = 0; d <= params.tower.max_degree; ++d)
        if (tower_x.betti(s, d) != tower_q.betti(s, d)) {
          std::ostringstream os;
          os << "stage r=" << tower_x.stages[s].r << ": betti differs in degree " << d;
          complain(os.str());
        }
    }
    for (int d = 0; d <= params.tower.max_degree; ++d)
      for (int i = 0; i < tower_x.stage_count(); ++i)
        for (int j = i + 1; j < tower_x.stage_count(); ++j)
          if (tower_x.persistent_rank(d, i, j) != tower_q.persistent_rank(d, i, j)) {
            std::ostringstream os;
            os << "persistent rank differs: degree " << d << " stages " << i << "->" << j;
            complain(os.str());
          }
  }
  rep.pass = rep.mismatches.empty();
  return rep;
}

// -- uniform acyclicity at infinity --------------------------------------------

struct AcyclicitySampleSpec {
  int num_radii = 5;
  int centers_per_radius = 8;
  std::uint64_t seed = 1;
  std::vector<double> radii;  // optional override
};

struct AcyclicityViolation {
  PointId center = 0;
  double ball_radius = 0;
  double set_diameter = 0;
  int degree = 0;
  std::vector<Tuple> witness_cycle;
};

struct AcyclicityReport {
  bool pass = false;
  bool vacuous = false;
  int samples_checked = 0;
  std::vector<AcyclicityViolation> violations;
};

/// Samples balls B far from the basepoint (d(b,B) >= mu(diam B)) and checks
/// that reduced homology of Rips(B) maps to zero in Rips(N_rho(diam B)(B)).
/// A nonzero induced class is reported with a witness cycle. This checks the
/// necessary acyclicity consequence of the contractibility hypothesis only.
inline AcyclicityReport check_acyclicity_at_infinity(const FiniteMetricSpace& X,
                                                     const ControlFunction& mu,
                                                     const ControlFunction& rho,
                                                     const AcyclicitySampleSpec& spec, double eps,
                                                     int max_dim) {
  PointId b = X.require_basepoint();
  AcyclicityReport rep;
  Rng rng(spec.seed);

  std::vector<double> radii = spec.radii;
  if (radii.empty()) {
    double lo = 2 * eps;
    double hi = std::max(X.truncation_radius > 0 ? X.truncation_radius / 3 : X.diameter() / 3,
                         lo * 1.01);
    double ratio = std::pow(hi / lo, 1.0 / std::max(1, spec.num_radii - 1));
    for (int i = 0; i < spec.num_radii; ++i) radii.push_back(lo * std::pow(ratio, i));
  }

  for (double s : radii) {
    // eligible centers: the sampled ball must sit mu(diam)-far from b
    std::vector<PointId> eligible;
    std::vector<Selection> balls(static_cast<std::size_t>(X.size()));
    for (PointId x = 0; x < X.size(); ++x) {
      Selection ball = neighborhood(X, Selection({x}), s);
      double diam = 0;
      for (std::size_t i = 0; i < ball.ids.size(); ++i)
        for (std::size_t j = i + 1; j < ball.ids.size(); ++j)
          diam = std::max(diam, X.dist(ball.ids[i], ball.ids[j]));
      double d_to_b = X.dist_to_set(b, ball);
      if (d_to_b >= mu(diam) - kDistTol) {
        eligible.push_back(x);
        balls[static_cast<std::size_t>(x)] = std::move(ball);
      }
    }
    if (eligible.empty()) continue;

    for (int pick = 0; pick < spec.centers_per_radius; ++pick) {
      PointId x = eligible[rng.below(eligible.size())];
      const Selection& B = balls[static_cast<std::size_t>(x)];
      double diam = 0;
      for (std::size_t i = 0; i < B.ids.size(); ++i)
        for (std::size_t j = i + 1; j < B.ids.size(); ++j)
          diam = std::max(diam, X.dist(B.ids[i], B.ids[j]));

      SimplicialComplex KB = rips_complex(X, B, eps, max_dim);
      Selection N = neighborhood(X, B, rho(diam));
      SimplicialComplex KN = rips_complex(X, N, eps, max_dim);
      ++rep.samples_checked;

      for (int k = 0; k + 1 <= max_dim && k < max_dim; ++k) {
        // reduced homology in degree k: ker closed / im exact
        auto closed_B = (k == 0) ? augmentation_column<GF2>(KB.dim_count(0)).transpose()
                                 : boundary_matrix<GF2>(KB, k);
        auto exact_B = boundary_matrix<GF2>(KB, k + 1);
        QuotientBasis<GF2> HB(closed_B, exact_B);
        if (HB.betti() == 0) continue;
        auto closed_N = (k == 0) ? augmentation_column<GF2>(KN.dim_count(0)).transpose()
                                 : boundary_matrix<GF2>(KN, k);
        auto exact_N = boundary_matrix<GF2>(KN, k + 1);
        QuotientBasis<GF2> HN(closed_N, exact_N);

        for (const auto& rep_cycle : HB.representatives()) {
          SparseVec<GF2> mapped;
          for (const auto& [idx, v] : rep_cycle) {
            int t = KN.index_of(k, KB.dim(k)[idx]);
            if (t < 0) throw Error("ball complex is not a subcomplex of its neighborhood");
            mapped.emplace_back(t, v);
          }
          std::sort(mapped.begin(), mapped.end(),
                    [](const auto& a, const auto& b2) { return a.first < b2.first; });
          auto coords = HN.coordinates(mapped);
          bool nonzero = false;
          for (const auto& cval : coords) nonzero |= !(cval == GF2(0));
          if (nonzero) {
            AcyclicityViolation v;
            v.center = x;
            v.ball_radius = s;
            v.set_diameter = diam;
            v.degree = k;
            for (const auto& [idx, coeff] : rep_cycle) v.witness_cycle.push_back(KB.dim(k)[idx]);
            rep.violations.push_back(std::move(v));
          }
        }
      }
    }
  }
  rep.vacuous = rep.samples_checked == 0;
  rep.pass = rep.violations.empty();
  return rep;
}

/// Far-subcomplex spec adapted to the circle pack: on top of the affine
/// (n+1) r + 2n schedule, tuples wide enough to wrap circle i (diameter at
/// least sqrt(3) r_i) must sit beyond that circle's far side, so every far
/// boundary cycle stays fillable.
inline FarSubcomplexSpec circle_pack_far_spec(const CirclePackSpace& pack, int max_dim) {
  FarSubcomplexSpec spec;
  spec.base = Selection({pack.space.require_basepoint()});
  const auto& L = pack.layout;
  const int n_circles = static_cast<int>(L.tangent_x.size());
  for (int n = 0; n <= max_dim; ++n) {
    std::vector<std::pair<double, double>> knots{{0.0, 2.0 * n}};
    for (int i = 0; i < n_circles; ++i) {
      double r = L.radius(i);
      auto c = L.center(i);
      double dist_b = std::sqrt(c[0] * c[0] + c[1] * c[1]) - r;
      double wrap_diam = std::sqrt(3.0) * r;
      knots.emplace_back(wrap_diam, dist_b + r + 1.0 + (n + 1) * wrap_diam + 2.0 * n);
    }
    double tail = n + 1.0;
    if (knots.size() >= 2) {
      const auto& a = knots[knots.size() - 2];
      const auto& b = knots.back();
      tail = std::max(tail, (b.second - a.second) / (b.first - a.first));
    }
    spec.mu.push_back(ControlFunction(std::move(knots), tail));
  }
  return spec;
}

/// Control function matching the circle-pack figure: sets of diameter 2r_i
/// must sit farther out than circle i, so no eligible ball contains a whole
/// circle.
inline ControlFunction circle_pack_mu(const CirclePackSpace& pack) {
  std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
  const auto& L = pack.layout;
  int n = static_cast<int>(L.tangent_x.size());
  for (int i = 0; i < n; ++i) {
    double r = L.radius(i);
    auto c = L.center(i);
    double dist_b = std::sqrt(c[0] * c[0] + c[1] * c[1]) - r;
    knots.emplace_back(2 * r, dist_b + 1.0);
  }
  double tail = 1.0;
  if (knots.size() >= 2) {
    const auto& a = knots[knots.size() - 2];
    const auto& b = knots.back();
    tail = (b.second - a.second) / (b.first - a.first);
  }
  return ControlFunction(std::move(knots), tail);
}

}  // namespace coarse
