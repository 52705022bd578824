#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "variastar/dynamics.hpp"
#include "variastar/vec3.hpp"

namespace variastar {

/// Polyline with fixed endpoints, the varied curve of a discrete
/// variational problem. Holds at least 3 waypoints; 2D paths use z = 0.
class DiscretePath {
 public:
  explicit DiscretePath(std::vector<Vec3> waypoints);

  std::span<const Vec3> waypoints() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Vec3& front() const noexcept { return points_.front(); }
  const Vec3& back() const noexcept { return points_.back(); }
  const Vec3& operator[](std::size_t n) const { return points_[n]; }

 private:
  std::vector<Vec3> points_;
};

struct MinimizeOptions {
  // Converged once an iteration moves no waypoint farther than tol.
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  // Initial descent step; doubled after each accepted step and halved on
  // insufficient decrease.
  double step = 0.1;
};

struct MinimizeReport {
  std::size_t iterations = 0;
  double final_move = 0.0;
  // Objective value before the first step and after every accepted step.
  std::vector<double> objective_history;
};

struct PathMinimization {
  DiscretePath path;
  MinimizeReport report;
};

struct TrajectoryMinimization {
  Trajectory trajectory;
  MinimizeReport report;
};

double arc_length(const DiscretePath& path);
double arc_length(std::span<const Vec3> points);
// d(arc length)/d(waypoint); zero at the endpoints.
std::vector<Vec3> arc_length_gradient(std::span<const Vec3> points);

// Chord from a to b with interior points displaced perpendicular to it by
// amplitude * sin(pi s), s in [0, 1] the chord parameter.
DiscretePath perturbed_chord(const Vec3& a, const Vec3& b, std::size_t n_points,
                             double amplitude);

// Largest perpendicular distance of an interior waypoint from the line
// through the endpoints.
double max_chord_deviation(const DiscretePath& path);

// Gradient descent on the interior waypoints of the discrete arc length.
// `init` defaults to perturbed_chord(a, b, n_points, 0.2 |b - a|).
// Throws ConvergenceError (residual = chord deviation) when max_iter runs out.
PathMinimization minimize_arclength(const Vec3& a, const Vec3& b, std::size_t n_points,
                                    const std::optional<DiscretePath>& init = {},
                                    const MinimizeOptions& opts = {});

struct CurveSample {
  double x = 0.0;
  double y = 0.0;
};

// Max over interior samples of |d/dx (y' / sqrt(1 + y'^2))|, the
// Euler-equation residual of the arc-length integrand, by central
// differences. Needs >= 5 samples with uniform, strictly increasing x.
double euler_residual(std::span<const CurveSample> samples);

// Linear interpolation of a path (x strictly increasing) onto n uniformly
// spaced x values between its endpoints.
std::vector<CurveSample> resample_uniform_x(const DiscretePath& path, std::size_t n);

struct TimedPoint {
  double t = 0.0;
  Vec3 position;
};

// Trapezoidal action of uniformly time-sampled positions with
// piecewise-constant segment velocities.
double discrete_action(std::span<const Vec3> positions, double t0, double t1,
                       const MechanicsParams& params);
std::vector<Vec3> discrete_action_gradient(std::span<const Vec3> positions, double t0,
                                           double t1, const MechanicsParams& params);

// Gradient descent on the interior positions of a uniformly time-sampled
// trajectory between fixed endpoints. `init` (interior and endpoints)
// defaults to constant-velocity motion from a to b. Throws ConvergenceError
// (residual = gradient norm) when max_iter runs out.
TrajectoryMinimization minimize_action(const TimedPoint& a, const TimedPoint& b,
                                       std::size_t n_points, const MechanicsParams& params,
                                       const MinimizeOptions& opts = {},
                                       const std::optional<std::vector<Vec3>>& init = {});

// CSV with header `index,x,y,z`.
std::string path_csv(const DiscretePath& path);

}  // namespace variastar
