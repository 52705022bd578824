#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "variastar/error.hpp"
#include "variastar/variational.hpp"

using namespace variastar;
using doctest::Approx;

namespace {

constexpr double kG = 9.81;

Vec3 rotate_z(const Vec3& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

std::vector<Vec3> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Vec3> pts;
  for (std::size_t k = 0; k < n; ++k) pts.push_back({u(rng), u(rng), u(rng)});
  return pts;
}

// Central finite difference of f with respect to every coordinate of
// every interior point.
template <class F>
void check_gradient(F f, const std::vector<Vec3>& pts, const std::vector<Vec3>& grad) {
  const double h = 1e-6;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    for (int axis = 0; axis < 3; ++axis) {
      auto plus = pts, minus = pts;
      double* p = axis == 0 ? &plus[n].x : axis == 1 ? &plus[n].y : &plus[n].z;
      double* m = axis == 0 ? &minus[n].x : axis == 1 ? &minus[n].y : &minus[n].z;
      *p += h;
      *m -= h;
      const double fd = (n == 0 || n + 1 == pts.size()) ? 0.0 : (f(plus) - f(minus)) / (2 * h);
      const double an = axis == 0 ? grad[n].x : axis == 1 ? grad[n].y : grad[n].z;
      CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

}  // namespace

TEST_CASE("arc_length examples and triangle inequality") {
  CHECK(arc_length(DiscretePath({{0, 0, 0}, {1.5, 2, 0}, {3, 4, 0}})) == Approx(5.0));
  CHECK(arc_length(DiscretePath({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}})) == 2.0);
  CHECK(arc_length(DiscretePath({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 0, 0}})) == 2.0);

  std::mt19937_64 rng(2);
  for (int n = 0; n < 200; ++n) {
    const auto pts = random_points(rng, 3 + n % 9);
    CHECK(arc_length(pts) >= distance(pts.front(), pts.back()) - 1e-12);
  }
  CHECK_THROWS_AS(DiscretePath({{0, 0, 0}, {1, 0, 0}}), ConfigError);
}

TEST_CASE("analytic gradients match finite differences") {
  std::mt19937_64 rng(8);
  const MechanicsParams p{1.3, kG};
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 4 + trial % 6);
    check_gradient([](const std::vector<Vec3>& q) { return arc_length(q); }, pts,
                   arc_length_gradient(pts));
    check_gradient([&](const std::vector<Vec3>& q) { return discrete_action(q, 0.5, 2.0, p); },
                   pts, discrete_action_gradient(pts, 0.5, 2.0, p));
  }
}

TEST_CASE("geodesic between (0,0) and (1,1)") {
  const Vec3 a{0, 0, 0}, b{1, 1, 0};
  const DiscretePath init = perturbed_chord(a, b, 33, 0.2);
  CHECK(max_chord_deviation(init) == Approx(0.2).epsilon(1e-3));
  const PathMinimization r = minimize_arclength(a, b, 33, init);
  CHECK(max_chord_deviation(r.path) < 1e-3);
  CHECK(std::abs(arc_length(r.path) - std::sqrt(2.0)) / std::sqrt(2.0) < 1e-6);
  CHECK(arc_length(r.path) <= arc_length(init));
  CHECK(r.path.front() == a);
  CHECK(r.path.back() == b);
  CHECK(euler_residual(resample_uniform_x(r.path, 33)) < 1e-3);

  const auto& hist = r.report.objective_history;
  REQUIRE(hist.size() >= 2);
  for (std::size_t n = 1; n < hist.size(); ++n) CHECK(hist[n] <= hist[n - 1]);
}

TEST_CASE("geodesic is rotation invariant") {
  const Vec3 a{0.3, -0.2, 0}, b{2.0, 1.1, 0};
  const DiscretePath init = perturbed_chord(a, b, 17, 0.4);
  const PathMinimization base = minimize_arclength(a, b, 17, init);
  for (double angle : {0.7, 2.1, -1.3}) {
    std::vector<Vec3> rot;
    for (const Vec3& q : init.waypoints()) rot.push_back(rotate_z(q, angle));
    const PathMinimization r =
        minimize_arclength(rotate_z(a, angle), rotate_z(b, angle), 17, DiscretePath(rot));
    for (std::size_t n = 0; n < r.path.size(); ++n) {
      CHECK(distance(r.path[n], rotate_z(base.path[n], angle)) < 1e-6);
    }
  }
}

TEST_CASE("a path already on the chord is a fixed point") {
  const Vec3 a{0, 0, 0}, b{4, 2, 0};
  const DiscretePath chord = perturbed_chord(a, b, 9, 0.0);
  const PathMinimization r = minimize_arclength(a, b, 9, chord);
  for (std::size_t n = 0; n < 9; ++n) CHECK(distance(r.path[n], chord[n]) < 1e-9);
}

TEST_CASE("minimize_arclength errors") {
  CHECK_THROWS_AS(minimize_arclength({1, 1, 0}, {1, 1, 0}, 9), ConfigError);
  CHECK_THROWS_AS(minimize_arclength({0, 0, 0}, {1, 1, 0}, 2), ConfigError);
  MinimizeOptions opts;
  opts.max_iter = 3;
  try {
    minimize_arclength({0, 0, 0}, {1, 1, 0}, 33, {}, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 1e-3);
  }
}

TEST_CASE("euler_residual") {
  std::vector<CurveSample> line, parabola;
  for (int n = 0; n <= 100; ++n) {
    const double x = n / 100.0;
    line.push_back({x, 2 * x + 1});
    parabola.push_back({x, x * x});
  }
  CHECK(euler_residual(line) < 1e-9);
  // y'' / (1 + y'^2)^(3/2) equals 2 at x = 0 for y = x^2.
  CHECK(euler_residual(parabola) > 0.1);
  CHECK(euler_residual(parabola) == Approx(2.0).epsilon(2e-3));
  std::vector<CurveSample> uneven = {{0, 0}, {0.1, 0}, {0.2, 0}, {0.35, 0}, {0.4, 0}};
  CHECK_THROWS_AS(euler_residual(uneven), ConfigError);
  CHECK_THROWS_AS(euler_residual(std::vector<CurveSample>(line.begin(), line.begin() + 4)),
                  ConfigError);
}

TEST_CASE("least action recovers the projectile") {
  const MechanicsParams p{1.0, kG};
  const TrajectoryMinimization r = minimize_action({0.0, {0, 0, 0}}, {1.0, {0, 0, 0}}, 33, p);
  REQUIRE(r.trajectory.size() == 33);
  CHECK(r.trajectory[16].time == Approx(0.5));
  CHECK(std::abs(r.trajectory[16].position.z - kG / 8.0) < 1e-3);
  for (const auto& s : r.trajectory.samples()) {
    const double z = kG / 2.0 * s.time - 0.5 * kG * s.time * s.time;
    CHECK(std::abs(s.position.z - z) < 1e-3);
    CHECK(std::abs(s.velocity.z - (kG / 2.0 - kG * s.time)) < 1e-3);
  }
  const auto& hist = r.report.objective_history;
  for (std::size_t n = 1; n < hist.size(); ++n) CHECK(hist[n] <= hist[n - 1]);
}

TEST_CASE("least action without gravity is uniform motion") {
  const TrajectoryMinimization r =
      minimize_action({0.0, {0, 0, 0}}, {1.0, {1, 0, 0}}, 11, {1.0, 0.0});
  for (const auto& s : r.trajectory.samples()) {
    CHECK(distance(s.position, {s.time, 0, 0}) < 1e-9);
    CHECK(distance(s.velocity, {1, 0, 0}) < 1e-6);
  }
}

TEST_CASE("least action from a perturbed start decreases monotonically") {
  std::vector<Vec3> init;
  for (int n = 0; n < 21; ++n) {
    const double t = n / 20.0;
    init.push_back({0.3 * std::sin(std::numbers::pi * t), 0.0, -0.5 * std::sin(2 * std::numbers::pi * t)});
  }
  init.back() = {0, 0, 0};  // sin(pi) is not exactly zero
  const MechanicsParams p{2.0, kG};
  const TrajectoryMinimization r = minimize_action({0.0, {0, 0, 0}}, {1.0, {0, 0, 0}}, 21, p, {}, init);
  const auto& hist = r.report.objective_history;
  REQUIRE(hist.size() > 2);
  for (std::size_t n = 1; n < hist.size(); ++n) CHECK(hist[n] <= hist[n - 1]);
  CHECK(std::abs(r.trajectory[10].position.z - kG / 8.0) < 1e-3);
  CHECK(std::abs(r.trajectory[10].position.x) < 1e-6);
}

TEST_CASE("minimize_action errors") {
  const MechanicsParams p{};
  CHECK_THROWS_AS(minimize_action({1.0, {0, 0, 0}}, {1.0, {1, 0, 0}}, 5, p), ConfigError);
  CHECK_THROWS_AS(minimize_action({0.0, {0, 0, 0}}, {1.0, {1, 0, 0}}, 2, p), ConfigError);
  MinimizeOptions opts;
  opts.max_iter = 2;
  CHECK_THROWS_AS(minimize_action({0.0, {0, 0, 0}}, {1.0, {0, 0, 0}}, 33, p, opts),
                  ConvergenceError);
}

TEST_CASE("path CSV") {
  CHECK(path_csv(DiscretePath({{0, 0, 0}, {0.5, 0.25, 0}, {1, 1, 0}})) ==
        "index,x,y,z\n0,0,0,0\n1,0.5,0.25,0\n2,1,1,0\n");
}
