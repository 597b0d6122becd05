#include <catch2/catch_amalgamated.hpp>

#include "coarse/generators.hpp"
#include "coarse/tower.hpp"
#include "oracles.hpp"

using namespace coarse;

namespace {

FiniteMetricSpace circle_sample(double radius, int n, double shift_x = 0) {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < n; ++k) {
    double a = 2 * M_PI * k / n;
    pts.push_back({shift_x + radius * std::cos(a), radius * std::sin(a)});
  }
  return from_points(std::move(pts));
}

FiniteMetricSpace two_circles(double radius, int n, double gap) {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < n; ++k) {
    double a = 2 * M_PI * k / n;
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  for (int k = 0; k < n; ++k) {
    double a = 2 * M_PI * k / n;
    pts.push_back({gap + radius * std::cos(a), radius * std::sin(a)});
  }
  return from_points(std::move(pts));
}

}  // namespace

TEST_CASE("reduced cohomology of small complexes") {
  SECTION("a point has trivial reduced cohomology") {
    auto X = from_distance_matrix({{0.0}});
    auto K = rips_complex(X, 1.0, 3);
    auto g = reduced_cohomology(K, Ring::Q, 2);
    for (const auto& grp : g) REQUIRE(grp.free_rank == 0);
  }
  SECTION("8-point circle at adjacent-chord scale is a cycle graph") {
    auto X = circle_sample(1.0, 8);
    double chord = X.dist(0, 1);
    auto K = rips_complex(X, chord + 0.01, 2);
    REQUIRE(K.dim_count(2) == 0);
    auto g = reduced_cohomology(K, Ring::GF2, 1);
    REQUIRE(g[0].free_rank == 0);
    REQUIRE(g[1].free_rank == 1);
  }
  SECTION("two disjoint circles: block-diagonal matrices") {
    auto X = two_circles(1.0, 8, 10.0);
    double chord = X.dist(0, 1);
    auto K = rips_complex(X, chord + 0.01, 2);
    for (Ring ring : {Ring::GF2, Ring::Q, Ring::Z}) {
      auto g = reduced_cohomology(K, ring, 1);
      REQUIRE(g[0].free_rank == 1);
      REQUIRE(g[1].free_rank == 2);
    }
  }
  SECTION("empty complex rejected") {
    SimplicialComplex K;
    K.simplices.assign(1, {});
    K.rebuild_index();
    REQUIRE_THROWS_AS(reduced_cohomology(K, Ring::GF2, 0), EmptyComplex);
  }
}

TEST_CASE("complement towers") {
  SECTION("two-ray stages on the line: reduced b0 = 1, maps of rank 1") {
    auto X = generate_grid(1, 10, 1);
    TowerParams p;
    p.r_grid = {1.5, 3.5, 5.5};
    p.eps = 1.5;
    p.max_degree = 1;
    auto T = build_complement_tower<GF2>(X, Selection({*X.basepoint}), p);
    REQUIRE(T.stage_count() == 3);
    for (int s = 0; s < 3; ++s) {
      REQUIRE(T.betti(s, 0) == 1);
      REQUIRE(T.betti(s, 1) == 0);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) REQUIRE(T.persistent_rank(0, i, j) == 1);
  }
  SECTION("annulus stages in the plane: reduced b1 = 1, maps of rank 1") {
    auto X = generate_grid(2, 12, 1);
    TowerParams p;
    p.r_grid = {2.0, 4.0, 6.0};
    p.eps = 1.5;
    p.max_degree = 1;
    auto T = build_complement_tower<GF2>(X, Selection({*X.basepoint}), p);
    for (int s = 0; s < T.stage_count(); ++s) {
      REQUIRE(T.betti(s, 0) == 0);
      REQUIRE(T.betti(s, 1) == 1);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) REQUIRE(T.persistent_rank(1, i, j) == 1);
  }
  SECTION("circle pack with N_r(b) between circles 2 and 3") {
    auto pack = generate_circle_pack(4, 24);
    // r engulfing circles 1 and 2 entirely, circles 3 and 4 untouched
    double r = 18.0;
    REQUIRE(oracles::circles_intact(pack, r) == 2);
    TowerParams p;
    p.r_grid = {r};
    p.eps = 1.5;
    p.max_degree = 1;
    auto T = build_complement_tower<GF2>(pack.space, Selection({*pack.space.basepoint}), p);
    REQUIRE(T.betti(0, 1) == 2);
  }
  SECTION("stages with empty complements are dropped; all empty throws") {
    auto X = generate_grid(1, 3, 1);
    TowerParams p;
    p.r_grid = {1.0, 2.0, 100.0};
    p.eps = 1.0;
    p.max_degree = 1;
    auto T = build_complement_tower<GF2>(X, Selection({*X.basepoint}), p);
    REQUIRE(T.stage_count() == 2);
    REQUIRE(T.dropped_stages == std::vector<double>{100.0});
    p.r_grid = {50.0, 100.0};
    REQUIRE_THROWS_AS(build_complement_tower<GF2>(X, Selection({*X.basepoint}), p), EmptyTower);
  }
}

TEST_CASE("colimit analysis") {
  SECTION("line tower stabilizes at rank 1 in degree 0") {
    auto X = generate_grid(1, 12, 1);
    TowerParams p;
    p.r_grid = default_r_grid(X, 1.5, 8);
    p.eps = 1.5;
    p.max_degree = 2;
    auto T = build_complement_tower<GF2>(X, Selection({*X.basepoint}), p);
    auto verdicts = colimit_analysis(T, 2, 3);
    REQUIRE(verdicts[0].status == ColimitStatus::STABILIZED);
    REQUIRE(verdicts[0].rank == 1);
    REQUIRE(verdicts[1].rank == 0);
    REQUIRE(verdicts[2].rank == 0);
  }
  SECTION("circle-pack tower does not stabilize in degree 1") {
    auto pack = generate_circle_pack(4, 24);
    TowerParams p;
    p.r_grid = default_r_grid(pack.space, 1.5, 12);
    p.eps = 1.5;
    p.max_degree = 1;
    auto T = build_complement_tower<GF2>(pack.space, Selection({*pack.space.basepoint}), p);
    auto verdicts = colimit_analysis(T, 2, 3);
    REQUIRE(verdicts[1].status == ColimitStatus::NON_STABILIZED);
    // stage ranks equal the geometric circle count and decrease to 1
    for (int s = 0; s < T.stage_count(); ++s)
      REQUIRE(T.betti(s, 1) == oracles::circles_intact(pack, T.stages[s].r));
    REQUIRE(verdicts[1].stage_betti.back() <= 1);
  }
  SECTION("insufficient stages") {
    auto X = generate_grid(1, 6, 1);
    TowerParams p;
    p.r_grid = {1.5, 2.5};
    p.eps = 1.5;
    p.max_degree = 0;
    auto T = build_complement_tower<GF2>(X, Selection({*X.basepoint}), p);
    REQUIRE_THROWS_AS(colimit_analysis(T, 2, 3), InsufficientStages);
  }
}

TEST_CASE("persistent-rank monotonicity and cross-ring agreement") {
  auto pack = generate_circle_pack(3, 16);
  TowerParams p;
  p.r_grid = default_r_grid(pack.space, 1.5, 8);
  p.eps = 1.5;
  p.max_degree = 2;
  Selection base({*pack.space.basepoint});

  auto T2 = build_complement_tower<GF2>(pack.space, base, p);
  p.ring = Ring::Q;
  auto TQ = build_complement_tower<Rational>(pack.space, base, p);

  auto check = [&](const auto& T) {
    const int n = T.stage_count();
    for (int deg = 0; deg <= 2; ++deg)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = j + 1; k < n; ++k) {
            int rik = T.persistent_rank(deg, i, k);
            REQUIRE(rik <= T.persistent_rank(deg, i, j));
            REQUIRE(rik <= T.persistent_rank(deg, j, k));
            // restriction composes on the nose in the chosen bases
            auto composed = dense_product(T.map(deg, j, k), T.map(deg, i, j));
            REQUIRE(composed == T.map(deg, i, k));
          }
  };
  check(T2);
  check(TQ);

  // torsion-free stages: GF(2) and Q agree on betti and persistent ranks
  REQUIRE(T2.stage_count() == TQ.stage_count());
  for (int s = 0; s < T2.stage_count(); ++s)
    for (int deg = 0; deg <= 2; ++deg) REQUIRE(T2.betti(s, deg) == TQ.betti(s, deg));
  for (int deg = 0; deg <= 2; ++deg)
    for (int i = 0; i < T2.stage_count(); ++i)
      for (int j = i + 1; j < T2.stage_count(); ++j)
        REQUIRE(T2.persistent_rank(deg, i, j) == TQ.persistent_rank(deg, i, j));
}

TEST_CASE("tower over Z records per-stage torsion fields") {
  auto X = generate_grid(1, 8, 1);
  TowerParams p;
  p.r_grid = {1.5, 3.5};
  p.eps = 1.5;
  p.max_degree = 1;
  p.ring = Ring::Z;
  auto T = build_complement_tower<Rational>(X, Selection({*X.basepoint}), p);
  for (int s = 0; s < T.stage_count(); ++s) {
    REQUIRE(T.stages[s].groups[0].free_rank == 1);
    REQUIRE(T.stages[s].groups[0].torsion.empty());
  }
}
