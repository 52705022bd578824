#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "variastar/error.hpp"
#include "variastar/graphmap.hpp"
#include "variastar/heuristics.hpp"

using namespace variastar;
using doctest::Approx;

TEST_CASE("base heuristic examples") {
  CHECK(h_manhattan({0, 0, 0}, {3, 4, 0}) == 7.0);
  CHECK(h_manhattan({1, 1, 1}, {2, 2, 2}, 2.0) == 6.0);
  CHECK(h_manhattan({4, 2, 1}, {4, 2, 1}) == 0.0);
  CHECK(h_euclidean({0, 0, 0}, {3, 4, 0}) == 5.0);
  CHECK(h_euclidean({0, 0, 0}, {1, 1, 1}) == Approx(std::sqrt(3.0)));
  CHECK(h_euclidean({2, 2, 2}, {2, 2, 2}) == 0.0);
  CHECK(h_diagonal({0, 0, 0}, {2, 5, 0}) == Approx(5.0 + (std::sqrt(2.0) - 1.0) * 2.0));
  CHECK(h_diagonal({0, 0, 0}, {3, 3, 0}) == Approx(3.0 * std::sqrt(2.0)));
  CHECK(h_diagonal({1, 2, 3}, {1, 2, 3}) == 0.0);
  // 3D: (1,2,3) deltas sorted 3,2,1.
  CHECK(h_diagonal({0, 0, 0}, {1, 2, 3}) ==
        Approx(3.0 + (std::sqrt(2.0) - 1.0) * 2.0 + (std::sqrt(3.0) - std::sqrt(2.0)) * 1.0));
  CHECK(h_diagonal({0, 0, 0}, {2, 2, 2}) == Approx(2.0 * std::sqrt(3.0)));
}

TEST_CASE("velocity_weight examples") {
  const Vec3 pos{0, 0, 0}, goal{10, 0, 0};
  CHECK(velocity_weight(pos, goal, make_weight_params({5, 0, 0}, 5.0)) == Approx(1.0));
  CHECK(velocity_weight(pos, goal, make_weight_params({0, 5, 0}, 5.0)) == Approx(0.1));
  CHECK(velocity_weight(pos, goal, make_weight_params({3, 4, 0}, 5.0)) == Approx(0.6));
  CHECK(velocity_weight(pos, goal, make_weight_params({-5, 0, 0}, 5.0)) == Approx(0.1));
  CHECK(velocity_weight(pos, goal, make_weight_params({50, 0, 0}, 1.0, 0.1, 2.0)) == 2.0);
  CHECK_THROWS_AS(velocity_weight(goal, goal, make_weight_params({1, 0, 0})), ConfigError);
}

TEST_CASE("weight parameter validation") {
  CHECK_THROWS_AS(make_weight_params({0, 0, 0}), ConfigError);
  CHECK_NOTHROW(make_weight_params({0, 0, 0}, 1.0));
  CHECK_THROWS_AS(make_weight_params({1, 0, 0}, 0.0), ConfigError);
  CHECK_THROWS_AS(make_weight_params({1, 0, 0}, 1.0, 2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_weight_params({1, 0, 0}, 1.0, -0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(make_weight_params({NAN, 0, 0}, 1.0), ConfigError);
  CHECK(make_weight_params({3, 4, 0}).v_ref == Approx(5.0));
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(ZeroHeuristic{}, Vec3{0, 0, 0}, Vec3{9, 9, 9}) == 0.0);
  const Fixture f = figure2_fixture();
  CHECK(evaluate(TableHeuristic{}, f.graph, *f.graph.find("C"), f.goal) == 1.0);
  const VelocityWeightedHeuristic vw{EuclideanHeuristic{}, make_weight_params({3, 4, 0})};
  CHECK(evaluate(vw, Vec3{0, 0, 0}, Vec3{3, 4, 0}) == Approx(5.0));
  CHECK_THROWS_AS(evaluate(TableHeuristic{}, Vec3{0, 0, 0}, Vec3{1, 0, 0}), ConfigError);
}

TEST_CASE("grid evaluation works in cell units") {
  const GridMap map(10, 10, 1, 2.5);
  CHECK(evaluate(EuclideanHeuristic{}, map, {0, 0, 0}, {3, 4, 0}) == 5.0);
  CHECK(evaluate(ManhattanHeuristic{}, map, {0, 0, 0}, {3, 4, 0}) == 7.0);
}

TEST_CASE("every variant is non-negative and zero at the goal") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const std::vector<HeuristicSpec> specs = {
      ZeroHeuristic{},
      ManhattanHeuristic{1.5},
      EuclideanHeuristic{},
      DiagonalHeuristic{},
      VelocityWeightedHeuristic{EuclideanHeuristic{}, make_weight_params({1, -2, 0.5})},
      VelocityWeightedHeuristic{DiagonalHeuristic{}, make_weight_params({0, 0, 0}, 1.0, 0.3, 4.0)},
  };
  for (int n = 0; n < 2000; ++n) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    const Vec3 b{u(rng), u(rng), u(rng)};
    for (const auto& s : specs) {
      CHECK(evaluate(s, a, b) >= 0.0);
      CHECK(evaluate(s, b, b) == 0.0);
    }
  }
}

TEST_CASE("velocity_weight is clamped and scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(0.05, 20.0);
  for (int n = 0; n < 5000; ++n) {
    const Vec3 a{u(rng), u(rng), u(rng)};
    const Vec3 b{u(rng), u(rng), u(rng)};
    if (a == b) continue;
    const Vec3 v{u(rng), u(rng), u(rng)};
    const double v_ref = pos(rng);
    const double w_min = pos(rng) / 40.0;
    const double w_max = w_min + pos(rng);
    const WeightParams p = make_weight_params(v, v_ref, w_min, w_max);
    const double w = velocity_weight(a, b, p);
    CHECK(w >= w_min);
    CHECK(w <= w_max);

    const double k = pos(rng);
    const WeightParams scaled = make_weight_params(v * k, v_ref * k, w_min, w_max);
    CHECK(velocity_weight(a, b, scaled) == Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("manhattan >= diagonal >= euclidean on unit 2D grids") {
  const GridMap map(12, 12);
  for (int i0 = 0; i0 < 12; ++i0)
    for (int j0 = 0; j0 < 12; ++j0)
      for (int i1 = 0; i1 < 12; i1 += 3)
        for (int j1 = 0; j1 < 12; j1 += 2) {
          const Cell a{i0, j0, 0}, b{i1, j1, 0};
          const double m = evaluate(ManhattanHeuristic{}, map, a, b);
          const double d = evaluate(DiagonalHeuristic{}, map, a, b);
          const double e = evaluate(EuclideanHeuristic{}, map, a, b);
          CHECK(m >= d - 1e-12);
          CHECK(d >= e - 1e-12);
        }
}

TEST_CASE("euclidean is consistent with neighbor edge costs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const bool three_d = seed % 2 == 1;
    const GridMap map = three_d ? random_grid(seed, 6, 6, 6, 0.2) : random_grid(seed, 12, 12, 1, 0.2);
    const Connectivity conn = three_d ? Connectivity::TwentySix : Connectivity::Eight;
    const Cell goal{map.width() - 1, map.height() - 1, map.depth() - 1};
    for (std::size_t idx = 0; idx < map.cell_count(); ++idx) {
      const Cell a = map.cell_at(idx);
      if (map.occupied(a)) continue;
      const double ha = evaluate(EuclideanHeuristic{}, map, a, goal);
      for (const auto& nb : neighbors(map, a, conn)) {
        const double hb = evaluate(EuclideanHeuristic{}, map, nb.cell, goal);
        CHECK(std::abs(ha - hb) <= nb.cost + 1e-12);
      }
    }
  }
}

TEST_CASE("diagonal is exact on empty grids") {
  // Breadth-first over unit 26-connected moves in an empty cube matches the
  // closed form, so the heuristic is tight as well as admissible.
  const GridMap cube(5, 5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        const double h = evaluate(DiagonalHeuristic{}, cube, {0, 0, 0}, {i, j, k});
        // Decompose by hand: take min-axis steps along the 3-diagonal, etc.
        int d[3] = {i, j, k};
        std::sort(d, d + 3);
        const double exact = d[0] * std::sqrt(3.0) + (d[1] - d[0]) * std::sqrt(2.0) + (d[2] - d[1]);
        CHECK(h == Approx(exact).epsilon(1e-12));
      }
}

TEST_CASE("heuristic text round-trips") {
  for (const char* text : {"zero", "manhattan", "manhattan:2.5", "euclidean", "diagonal", "table",
                           "velocity:euclidean:1,2,3", "velocity:diagonal:1,0,0:0.5:0.2:3",
                           "velocity:manhattan:2:0,0,1:1"}) {
    const HeuristicSpec spec = parse_heuristic(text);
    const std::string canon = to_string(spec);
    CHECK(parse_heuristic(canon) == spec);
    CHECK(to_string(parse_heuristic(canon)) == canon);
  }
  CHECK(parse_heuristic("octile") == HeuristicSpec{DiagonalHeuristic{}});
  CHECK(to_string(parse_heuristic("manhattan:1")) == "manhattan");
  const auto v = std::get<VelocityWeightedHeuristic>(parse_heuristic("velocity:euclidean:3,4,0"));
  CHECK(v.params.v_ref == Approx(5.0));
  CHECK(v.params.w_min == 0.1);
  CHECK(v.params.w_max == 10.0);
}

TEST_CASE("heuristic parse errors") {
  for (const char* bad : {"", "astar", "manhattan:-1", "manhattan:x", "velocity", "velocity:euclidean",
                          "velocity:euclidean:0,0,0", "velocity:velocity:euclidean:1,0,0:1,0,0",
                          "velocity:euclidean:1,0:1", "velocity:euclidean:1,0,0:1:2:1",
                          "euclidean:3"}) {
    CHECK_THROWS_AS(parse_heuristic(bad), ConfigError);
  }
}
