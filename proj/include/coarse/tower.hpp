#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>
#include <vector>

#include "coarse/cohomology.hpp"
#include "coarse/metric_space.hpp"

namespace coarse {

struct TowerParams {
  std::vector<double> r_grid;  // increasing stage radii
  double eps = 1.5;
  int max_degree = 2;  // top cohomology degree computed per stage
  Ring ring = Ring::GF2;
  int threads = 0;  // 0: hardware concurrency
  std::size_t simplex_cap = kSimplexCap;
  int window = 2;     // persistent-rank window
  int stability = 3;  // equal trailing values needed for a STABILIZED verdict
};

/// Default stage radii: geometric spacing from eps to truncation_radius / 2.
inline std::vector<double> default_r_grid(const FiniteMetricSpace& X, double eps,
                                          int stages = 12) {
  double lo = eps;
  double hi = std::max(X.truncation_radius > 0 ? X.truncation_radius / 2 : X.diameter() / 2,
                       lo * 1.01);
  std::vector<double> out;
  double ratio = std::pow(hi / lo, 1.0 / (stages - 1));
  for (int i = 0; i < stages; ++i) out.push_back(lo * std::pow(ratio, i));
  return out;
}

struct TowerStage {
  double r = 0;
  Selection complement_points;
  SimplicialComplex complex;
  std::vector<CohomologyGroup> groups;  // reduced cohomology, degrees 0..max_degree
};

template <class F>
struct Tower {
  TowerParams params;
  std::vector<TowerStage> stages;
  std::vector<ComplexCohomology<F>> stage_coh;
  std::vector<double> dropped_stages;  // radii whose complement was empty
  // restriction-induced map H(stage i) -> H(stage j), keyed (degree, i, j)
  std::map<std::tuple<int, int, int>, std::vector<std::vector<F>>> maps;

  int stage_count() const { return static_cast<int>(stages.size()); }

  const std::vector<std::vector<F>>& map(int degree, int i, int j) const {
    return maps.at({degree, i, j});
  }

  int persistent_rank(int degree, int i, int j) const { return dense_rank(map(degree, i, j)); }

  int betti(int stage, int degree) const {
    return static_cast<int>(stages[stage].groups[degree].free_rank);
  }
};

/// Builds the directed system r -> X - N_r(base): per-stage Rips complexes on
/// complement selections, reduced cohomology, and the restriction-induced
/// maps H(stage r_i) -> H(stage r_j) for i < j. Stages with an empty
/// complement are dropped (recorded in dropped_stages).
template <class F>
Tower<F> build_complement_tower(const FiniteMetricSpace& X, const Selection& base,
                                const TowerParams& params) {
  if (base.empty()) throw EmptySubset("tower needs a nonempty base");
  for (std::size_t i = 1; i < params.r_grid.size(); ++i)
    if (params.r_grid[i] <= params.r_grid[i - 1])
      throw BadInput("tower radii must be strictly increasing");

  Tower<F> T;
  T.params = params;
  for (double r : params.r_grid) {
    Selection comp = complement(X, neighborhood(X, base, r));
    if (comp.empty()) {
      T.dropped_stages.push_back(r);
      continue;
    }
    TowerStage stage;
    stage.r = r;
    stage.complement_points = std::move(comp);
    T.stages.push_back(std::move(stage));
  }
  if (T.stages.empty()) throw EmptyTower("every stage complement is empty");

  const int n = T.stage_count();
  T.stage_coh.resize(n);
  parallel_for(n, params.threads, [&](int i) {
    TowerStage& stage = T.stages[i];
    stage.complex = rips_complex(X, stage.complement_points, params.eps, params.max_degree + 1,
                                 params.simplex_cap);
    T.stage_coh[i] = cohomology_over_field<F>(stage.complex, params.max_degree, /*reduced=*/true);
    stage.groups = (params.ring == Ring::Z)
                       ? cohomology_groups(stage.complex, Ring::Z, params.max_degree, true)
                       : std::vector<CohomologyGroup>();
    if (stage.groups.empty()) {
      for (int d = 0; d <= params.max_degree; ++d) {
        CohomologyGroup g;
        g.degree = d;
        g.free_rank = T.stage_coh[i].betti(d);
        stage.groups.push_back(g);
      }
    }
  });

  for (int deg = 0; deg <= params.max_degree; ++deg)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        T.maps[{deg, i, j}] = restriction_matrix(T.stages[i].complex, T.stage_coh[i],
                                                 T.stages[j].complex, T.stage_coh[j], deg);
  return T;
}

/// Per-stage reduced cohomology as group lists (ring-dispatched convenience).
inline std::vector<CohomologyGroup> reduced_cohomology(const SimplicialComplex& K, Ring ring,
                                                       int max_degree) {
  if (K.dim_count(0) == 0) throw EmptyComplex("reduced cohomology of an empty complex");
  return cohomology_groups(K, ring, max_degree, /*reduced=*/true);
}

// -- colimit analysis ---------------------------------------------------------

enum class ColimitStatus { STABILIZED, NON_STABILIZED };

struct DegreeColimit {
  int degree = 0;
  ColimitStatus status = ColimitStatus::NON_STABILIZED;
  int rank = 0;  // meaningful when STABILIZED
  std::vector<int> persistent_ranks;
  std::vector<int> stage_betti;
};

/// Persistent ranks rank(map(i, i+w)) per degree; STABILIZED(rank) when the
/// last s values agree. A finite grid only approximates the true colimit.
template <class F>
std::vector<DegreeColimit> colimit_analysis(const Tower<F>& T, int window, int stability) {
  const int n = T.stage_count();
  if (n < window + stability)
    throw InsufficientStages("tower too short for the requested window and stability");
  std::vector<DegreeColimit> out;
  for (int deg = 0; deg <= T.params.max_degree; ++deg) {
    DegreeColimit dc;
    dc.degree = deg;
    for (int i = 0; i < n; ++i) dc.stage_betti.push_back(T.betti(i, deg));
    for (int i = 0; i + window < n; ++i)
      dc.persistent_ranks.push_back(T.persistent_rank(deg, i, i + window));
    bool stable = static_cast<int>(dc.persistent_ranks.size()) >= stability;
    if (stable) {
      for (int k = 1; k < stability; ++k)
        stable &= dc.persistent_ranks[dc.persistent_ranks.size() - 1 - k] ==
                  dc.persistent_ranks.back();
    }
    dc.status = stable ? ColimitStatus::STABILIZED : ColimitStatus::NON_STABILIZED;
    dc.rank = stable ? dc.persistent_ranks.back() : 0;
    out.push_back(std::move(dc));
  }
  return out;
}

}  // namespace coarse
