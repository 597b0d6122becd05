#include <catch2/catch_amalgamated.hpp>

#include "coarse/generators.hpp"

using namespace coarse;

TEST_CASE("from_distance_matrix validates") {
  SECTION("single point") {
    auto X = from_distance_matrix({{0.0}});
    REQUIRE(X.size() == 1);
    REQUIRE(X.diameter() == 0.0);
  }
  SECTION("two points") {
    auto X = from_distance_matrix({{0, 1}, {1, 0}});
    REQUIRE(X.size() == 2);
    REQUIRE(X.diameter() == 1.0);
  }
  SECTION("asymmetric input rejected") {
    REQUIRE_THROWS_AS(from_distance_matrix({{0, 1}, {2, 0}}), AsymmetricInput);
  }
  SECTION("negative distance rejected") {
    REQUIRE_THROWS_AS(from_distance_matrix({{0, -1}, {-1, 0}}), NegativeDistance);
  }
  SECTION("triangle violation only under the strict flag") {
    std::vector<std::vector<double>> bad{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
    REQUIRE_NOTHROW(from_distance_matrix(bad));
    REQUIRE_THROWS_AS(from_distance_matrix(bad, FromTableOptions{true}), TriangleViolation);
  }
}

TEST_CASE("generate_grid samples [-L,L]^n") {
  SECTION("1d: 7 collinear points") {
    auto X = generate_grid(1, 3, 1);
    REQUIRE(X.size() == 7);
    REQUIRE(X.unbounded_model);
    REQUIRE(X.truncation_radius == 3.0);
    REQUIRE(X.dist(*X.basepoint, 0) == 3.0);  // corner at -3
  }
  SECTION("2d: 25 points, diameter 4*sqrt(2)") {
    auto X = generate_grid(2, 2, 1);
    REQUIRE(X.size() == 25);
    REQUIRE_THAT(X.diameter(), Catch::Matchers::WithinAbs(4 * std::sqrt(2.0), 1e-12));
  }
  SECTION("3d: 27 points") { REQUIRE(generate_grid(3, 1, 1).size() == 27); }
  SECTION("preconditions") {
    REQUIRE_THROWS_AS(generate_grid(1, 0.5, 1), BadInput);
    REQUIRE_THROWS_AS(generate_grid(4, 3, 1), BadInput);
    REQUIRE_THROWS_AS(generate_grid(3, 40, 0.1), SizeLimit);
  }
}

TEST_CASE("generate_circle_pack matches the figure") {
  SECTION("one circle plus the ray") {
    auto pack = generate_circle_pack(1, 8);
    REQUIRE(pack.circle_points.size() == 1);
    REQUIRE(pack.circle_points[0].size() == 8);
    REQUIRE(pack.space.unbounded_model);
    REQUIRE(*pack.space.basepoint == 0);
    // the tangent sample of circle 1 lies on the ray
    PointId tangent = pack.circle_points[0][0];
    REQUIRE(pack.space.coords[tangent][1] == 0.0);
  }
  SECTION("circles are pairwise disjoint (computed from coordinates)") {
    auto pack = generate_circle_pack(3, 16);
    const auto& L = pack.layout;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        auto ci = L.center(i), cj = L.center(j);
        double dx = ci[0] - cj[0], dy = ci[1] - cj[1];
        double center_dist = std::sqrt(dx * dx + dy * dy);
        REQUIRE(center_dist > L.radius(i) + L.radius(j));
      }
    // and the sampled points agree with that
    for (PointId p : pack.circle_points[0])
      for (PointId q : pack.circle_points[1])
        REQUIRE(pack.space.dist(p, q) > 0.5);
  }
  SECTION("consecutive gaps grow") {
    auto pack = generate_circle_pack(4, 8);
    const auto& L = pack.layout;
    for (int i = 0; i + 1 < 3; ++i) {
      double gap_i = (L.tangent_x[i + 1] - L.radius(i + 1)) - (L.tangent_x[i] + L.radius(i));
      double gap_next = (L.tangent_x[i + 2] - L.radius(i + 2)) - (L.tangent_x[i + 1] + L.radius(i + 1));
      REQUIRE(gap_next > gap_i);
    }
  }
  SECTION("precondition") { REQUIRE_THROWS_AS(generate_circle_pack(0, 8), BadInput); }
}

TEST_CASE("d_A pseudometric") {
  SECTION("collinear formula") {
    // X = {0, 3, 7} on the line, A = {0}
    auto X = from_points({{0}, {3}, {7}});
    auto Y = d_A_pseudometric(X, Selection({0}));
    REQUIRE(Y.dist(1, 2) == 4.0);  // min(3 + 7, 4)
  }
  SECTION("shortcut through A wins") {
    auto X = from_points({{0}, {0.5}, {2.3}, {2.8}});  // A = {1, 2} at 0.5 and 2.3
    auto Y = d_A_pseudometric(X, Selection({1, 2}));
    // d(x,A) = 0.5 at point 0, d(y,A) = 0.5 at point 3, d(x,y) = 2.8
    REQUIRE_THAT(Y.dist(0, 3), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  SECTION("A collapses to distance zero") {
    auto X = generate_grid(1, 4, 1);
    Selection A({0, 5});
    auto Y = d_A_pseudometric(X, A);
    REQUIRE(Y.dist(0, 5) == 0.0);
    REQUIRE(Y.pseudometric);
  }
  SECTION("empty subset") {
    auto X = generate_grid(1, 2, 1);
    REQUIRE_THROWS_AS(d_A_pseudometric(X, Selection{}), EmptySubset);
  }
}

TEST_CASE("d_A properties") {
  auto X = generate_grid(2, 4, 1);
  Rng rng(7);
  std::vector<PointId> ids;
  for (int k = 0; k < 5; ++k) ids.push_back(static_cast<PointId>(rng.below(X.size())));
  Selection A(std::move(ids));
  auto Y = d_A_pseudometric(X, A);

  SECTION("d_A <= d pointwise, equal when the shortcut loses") {
    for (PointId a = 0; a < X.size(); ++a)
      for (PointId b = 0; b < X.size(); ++b) {
        REQUIRE(Y.dist(a, b) <= X.dist(a, b) + kDistTol);
        if (X.dist(a, b) <= X.dist_to_set(a, A) + X.dist_to_set(b, A))
          REQUIRE(Y.dist(a, b) == X.dist(a, b));
      }
  }
  SECTION("balls far from A are isometric under d and d_A") {
    double r = 1.5;
    for (PointId a = 0; a < X.size(); ++a)
      for (PointId b = 0; b < X.size(); ++b) {
        if (X.dist_to_set(a, A) > 2 * r && X.dist_to_set(b, A) > 2 * r && X.dist(a, b) < 2 * r)
          REQUIRE(Y.dist(a, b) == X.dist(a, b));
      }
  }
}

TEST_CASE("quotient_by_subset") {
  SECTION("counting") {
    auto X = from_points({{0}, {1}, {2}, {3}, {4}});
    auto Q = quotient_by_subset(X, Selection({1, 2}));
    REQUIRE(Q.space.size() == 4);
    REQUIRE(*Q.space.basepoint == Q.class_point);
  }
  SECTION("collapse everything") {
    auto X = generate_grid(1, 2, 1);
    auto Q = quotient_by_subset(X, X.all_points());
    REQUIRE(Q.space.size() == 1);
  }
  SECTION("half-line quotient is the nonnegative ray (evaluated on representatives)") {
    auto X = generate_grid(1, 5, 1);
    std::vector<PointId> left;
    for (PointId p = 0; p < X.size(); ++p)
      if (X.coords[p][0] <= kDistTol) left.push_back(p);
    auto Q = quotient_by_subset(X, Selection(std::move(left)));
    REQUIRE(Q.space.size() == 6);  // [A], 1, 2, 3, 4, 5
    // distances from the class point are 1..5, and gaps are unit
    std::vector<double> from_base;
    for (PointId p = 1; p < Q.space.size(); ++p) from_base.push_back(Q.space.dist(0, p));
    std::sort(from_base.begin(), from_base.end());
    for (int k = 0; k < 5; ++k) REQUIRE_THAT(from_base[k], Catch::Matchers::WithinAbs(k + 1, 1e-12));
    REQUIRE_NOTHROW(Q.space.validate(/*strict_metric=*/true));
  }
  SECTION("quotient of d_A satisfies the strict metric axioms") {
    auto pack = generate_circle_pack(2, 8);
    auto Q = quotient_by_subset(pack.space, pack.ray_selection());
    REQUIRE_NOTHROW(Q.space.validate(/*strict_metric=*/true));
  }
}

TEST_CASE("neighborhood and complement") {
  auto X = generate_grid(1, 3, 1);
  PointId origin = *X.basepoint;

  SECTION("r = 0 keeps the closure") {
    auto N = neighborhood(X, Selection({origin}), 0);
    REQUIRE(N.size() == 1);
    REQUIRE(N.contains(origin));
  }
  SECTION("grid ball and its complement") {
    auto N = neighborhood(X, Selection({origin}), 1.5);
    REQUIRE(N.size() == 3);  // -1, 0, 1
    auto C = complement(X, N);
    REQUIRE(C.size() == 4);  // -3, -2, 2, 3
    for (PointId p : C.ids) REQUIRE(X.dist(p, origin) > 1.5);
  }
  SECTION("r beyond the diameter empties the complement") {
    auto N = neighborhood(X, Selection({origin}), X.diameter() + 1);
    REQUIRE(complement(X, N).empty());
  }
  SECTION("complements are antitone in r") {
    for (double r = 0; r < 4; r += 0.5) {
      auto big = complement(X, neighborhood(X, Selection({origin}), r));
      auto small = complement(X, neighborhood(X, Selection({origin}), r + 0.5));
      for (PointId p : small.ids) REQUIRE(big.contains(p));
    }
  }
}
