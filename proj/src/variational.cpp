#include "variastar/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "text_util.hpp"
#include "variastar/error.hpp"

namespace variastar {

DiscretePath::DiscretePath(std::vector<Vec3> waypoints) : points_(std::move(waypoints)) {
  if (points_.size() < 3) throw ConfigError("a discrete path needs at least 3 waypoints");
  for (const Vec3& p : points_) {
    if (!is_finite(p)) throw ConfigError("waypoints must be finite");
  }
}

double arc_length(std::span<const Vec3> points) {
  double len = 0.0;
  for (std::size_t n = 1; n < points.size(); ++n) len += distance(points[n - 1], points[n]);
  return len;
}

double arc_length(const DiscretePath& path) { return arc_length(path.waypoints()); }

std::vector<Vec3> arc_length_gradient(std::span<const Vec3> points) {
  std::vector<Vec3> grad(points.size());
  for (std::size_t n = 1; n < points.size(); ++n) {
    const Vec3 seg = points[n] - points[n - 1];
    const double len = norm(seg);
    if (len == 0.0) continue;  // subgradient 0 at a repeated waypoint
    const Vec3 unit = seg / len;
    grad[n] += unit;
    grad[n - 1] -= unit;
  }
  grad.front() = {};
  grad.back() = {};
  return grad;
}

namespace {

Vec3 unit_perpendicular(const Vec3& dir) {
  Vec3 p = cross(dir, Vec3{0.0, 0.0, 1.0});
  if (norm(p) < 1e-12 * norm(dir)) p = cross(dir, Vec3{1.0, 0.0, 0.0});
  return p / norm(p);
}

double sum_sq(const std::vector<Vec3>& v) {
  double s = 0.0;
  for (const Vec3& e : v) s += dot(e, e);
  return s;
}

double max_norm(const std::vector<Vec3>& v) {
  double m = 0.0;
  for (const Vec3& e : v) m = std::max(m, norm(e));
  return m;
}

struct DescentOutcome {
  MinimizeReport report;
  bool converged = false;
};

// Gradient descent with backtracking: a step is accepted when it achieves
// half the decrease predicted by the gradient, otherwise the step is halved.
// Converged when the accepted (or smallest tried) move drops below tol.
template <class Objective, class Gradient>
DescentOutcome descend(std::vector<Vec3>& x, Objective objective, Gradient gradient,
                       const MinimizeOptions& opts) {
  DescentOutcome out;
  double f = objective(x);
  out.report.objective_history.push_back(f);
  double step = opts.step;
  std::vector<Vec3> cand(x.size());
  while (out.report.iterations < opts.max_iter) {
    const std::vector<Vec3> g = gradient(x);
    const double gmax = max_norm(g);
    const double gsq = sum_sq(g);
    for (double s = step;; s *= 0.5) {
      const double move = s * gmax;
      if (move < opts.tol) {
        out.report.final_move = move;
        out.converged = true;
        return out;
      }
      for (std::size_t n = 0; n < x.size(); ++n) cand[n] = x[n] - g[n] * s;
      const double fc = objective(cand);
      if (fc <= f - 0.5 * s * gsq) {
        x.swap(cand);
        f = fc;
        out.report.objective_history.push_back(f);
        out.report.final_move = move;
        ++out.report.iterations;
        step = 2.0 * s;
        break;
      }
    }
  }
  return out;
}

void validate(const MinimizeOptions& opts) {
  if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
  if (opts.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(opts.step > 0.0) || !std::isfinite(opts.step)) {
    throw ConfigError("step must be positive and finite");
  }
}

}  // namespace

DiscretePath perturbed_chord(const Vec3& a, const Vec3& b, std::size_t n_points,
                             double amplitude) {
  if (n_points < 3) throw ConfigError("n_points must be at least 3");
  const Vec3 chord = b - a;
  if (norm(chord) == 0.0) throw ConfigError("endpoints coincide; the chord is degenerate");
  const Vec3 perp = unit_perpendicular(chord);
  std::vector<Vec3> pts(n_points);
  for (std::size_t n = 0; n < n_points; ++n) {
    const double s = static_cast<double>(n) / static_cast<double>(n_points - 1);
    pts[n] = a + chord * s + perp * (amplitude * std::sin(std::numbers::pi * s));
  }
  pts.front() = a;
  pts.back() = b;
  return DiscretePath(std::move(pts));
}

double max_chord_deviation(const DiscretePath& path) {
  const Vec3 a = path.front();
  const Vec3 chord = path.back() - a;
  const double len = norm(chord);
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < path.size(); ++n) {
    const Vec3 rel = path[n] - a;
    const double d = len == 0.0 ? norm(rel) : norm(cross(rel, chord)) / len;
    worst = std::max(worst, d);
  }
  return worst;
}

PathMinimization minimize_arclength(const Vec3& a, const Vec3& b, std::size_t n_points,
                                    const std::optional<DiscretePath>& init,
                                    const MinimizeOptions& opts) {
  validate(opts);
  if (n_points < 3) throw ConfigError("n_points must be at least 3");
  if (!is_finite(a) || !is_finite(b)) throw ConfigError("endpoints must be finite");
  if (a == b) throw ConfigError("endpoints coincide; the chord is degenerate");
  DiscretePath start = init ? *init : perturbed_chord(a, b, n_points, 0.2 * distance(a, b));
  if (start.size() != n_points) throw ConfigError("initial path has the wrong point count");
  if (start.front() != a || start.back() != b) {
    throw ConfigError("initial path endpoints must equal a and b");
  }

  std::vector<Vec3> x(start.waypoints().begin(), start.waypoints().end());
  auto outcome = descend(
      x, [](const std::vector<Vec3>& p) { return arc_length(p); },
      [](const std::vector<Vec3>& p) { return arc_length_gradient(p); }, opts);
  DiscretePath result(std::move(x));
  if (!outcome.converged) {
    const double dev = max_chord_deviation(result);
    throw ConvergenceError("arc-length minimization hit max_iter; chord deviation " +
                               detail::format_number(dev),
                           dev);
  }
  return {std::move(result), std::move(outcome.report)};
}

double euler_residual(std::span<const CurveSample> s) {
  if (s.size() < 5) throw ConfigError("euler_residual needs at least 5 samples");
  const double h = s[1].x - s[0].x;
  if (!(h > 0.0)) throw ConfigError("sample x values must be strictly increasing");
  for (std::size_t n = 2; n < s.size(); ++n) {
    if (std::abs((s[n].x - s[n - 1].x) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw ConfigError("euler_residual needs uniformly spaced x");
    }
  }
  // dF/dy' for F = sqrt(1 + y'^2), at samples 1..n-2.
  std::vector<double> momentum(s.size());
  for (std::size_t n = 1; n + 1 < s.size(); ++n) {
    const double slope = (s[n + 1].y - s[n - 1].y) / (2.0 * h);
    momentum[n] = slope / std::sqrt(1.0 + slope * slope);
  }
  double worst = 0.0;
  for (std::size_t n = 2; n + 2 < s.size(); ++n) {
    worst = std::max(worst, std::abs((momentum[n + 1] - momentum[n - 1]) / (2.0 * h)));
  }
  return worst;
}

std::vector<CurveSample> resample_uniform_x(const DiscretePath& path, std::size_t n) {
  if (n < 2) throw ConfigError("resampling needs at least 2 samples");
  const auto pts = path.waypoints();
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (!(pts[k].x > pts[k - 1].x)) {
      throw ConfigError("resampling needs strictly increasing x along the path");
    }
  }
  const double x0 = pts.front().x;
  const double x1 = pts.back().x;
  std::vector<CurveSample> out(n);
  std::size_t seg = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = k + 1 == n ? x1 : x0 + (x1 - x0) * static_cast<double>(k) /
                                             static_cast<double>(n - 1);
    while (seg + 1 < pts.size() && pts[seg].x < x) ++seg;
    const Vec3& p = pts[seg - 1];
    const Vec3& q = pts[seg];
    const double u = (x - p.x) / (q.x - p.x);
    out[k] = {x, p.y + u * (q.y - p.y)};
  }
  return out;
}

double discrete_action(std::span<const Vec3> q, double t0, double t1,
                       const MechanicsParams& params) {
  validate(params);
  if (q.size() < 2 || !(t1 > t0)) throw ConfigError("discrete action needs t1 > t0, >= 2 points");
  const double dt = (t1 - t0) / static_cast<double>(q.size() - 1);
  const double m = params.mass;
  const double g = params.gravity;
  double s = 0.0;
  for (std::size_t n = 1; n < q.size(); ++n) {
    const Vec3 dq = q[n] - q[n - 1];
    s += 0.5 * m * dot(dq, dq) / dt - dt * 0.5 * m * g * (q[n].z + q[n - 1].z);
  }
  return s;
}

std::vector<Vec3> discrete_action_gradient(std::span<const Vec3> q, double t0, double t1,
                                           const MechanicsParams& params) {
  validate(params);
  if (q.size() < 2 || !(t1 > t0)) throw ConfigError("discrete action needs t1 > t0, >= 2 points");
  const double dt = (t1 - t0) / static_cast<double>(q.size() - 1);
  const double m = params.mass;
  std::vector<Vec3> grad(q.size());
  for (std::size_t n = 1; n + 1 < q.size(); ++n) {
    grad[n] = (2.0 * q[n] - q[n - 1] - q[n + 1]) * (m / dt);
    grad[n].z -= dt * m * params.gravity;
  }
  return grad;
}

TrajectoryMinimization minimize_action(const TimedPoint& a, const TimedPoint& b,
                                       std::size_t n_points, const MechanicsParams& params,
                                       const MinimizeOptions& opts,
                                       const std::optional<std::vector<Vec3>>& init) {
  validate(opts);
  validate(params);
  if (n_points < 3) throw ConfigError("n_points must be at least 3");
  if (!(b.t > a.t)) throw ConfigError("end time must exceed start time");
  if (!is_finite(a.position) || !is_finite(b.position)) {
    throw ConfigError("endpoints must be finite");
  }

  std::vector<Vec3> x;
  if (init) {
    if (init->size() != n_points) throw ConfigError("initial trajectory has the wrong point count");
    if (init->front() != a.position || init->back() != b.position) {
      throw ConfigError("initial trajectory endpoints must equal a and b");
    }
    x = *init;
  } else {
    x.resize(n_points);
    for (std::size_t n = 0; n < n_points; ++n) {
      const double s = static_cast<double>(n) / static_cast<double>(n_points - 1);
      x[n] = a.position + (b.position - a.position) * s;
    }
    x.back() = b.position;
  }

  auto outcome = descend(
      x, [&](const std::vector<Vec3>& q) { return discrete_action(q, a.t, b.t, params); },
      [&](const std::vector<Vec3>& q) { return discrete_action_gradient(q, a.t, b.t, params); },
      opts);
  if (!outcome.converged) {
    const double gnorm = std::sqrt(sum_sq(discrete_action_gradient(x, a.t, b.t, params)));
    throw ConvergenceError("action minimization hit max_iter; gradient norm " +
                               detail::format_number(gnorm),
                           gnorm);
  }

  const double dt = (b.t - a.t) / static_cast<double>(n_points - 1);
  std::vector<KinematicState> states(n_points);
  for (std::size_t n = 0; n < n_points; ++n) {
    Vec3 v;
    if (n == 0) {
      v = (x[1] * 4.0 - x[0] * 3.0 - x[2]) / (2.0 * dt);
    } else if (n + 1 == n_points) {
      v = (x[n] * 3.0 - x[n - 1] * 4.0 + x[n - 2]) / (2.0 * dt);
    } else {
      v = (x[n + 1] - x[n - 1]) / (2.0 * dt);
    }
    states[n] = {x[n], v, n + 1 == n_points ? b.t : a.t + static_cast<double>(n) * dt};
  }
  return {Trajectory(std::move(states)), std::move(outcome.report)};
}

std::string path_csv(const DiscretePath& path) {
  using detail::format_number;
  std::string out = "index,x,y,z\n";
  for (std::size_t n = 0; n < path.size(); ++n) {
    out += std::to_string(n) + "," + format_number(path[n].x) + "," +
           format_number(path[n].y) + "," + format_number(path[n].z) + "\n";
  }
  return out;
}

}  // namespace variastar
