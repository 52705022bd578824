#include "variastar/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "text_util.hpp"
#include "variastar/error.hpp"

namespace variastar {

namespace {

bool finite_state(const KinematicState& s) {
  return is_finite(s.position) && is_finite(s.velocity) && std::isfinite(s.time);
}

}  // namespace

void validate(const MechanicsParams& params) {
  if (!(params.mass > 0.0) || !std::isfinite(params.mass)) {
    throw ConfigError("mass must be positive and finite");
  }
  if (!(params.gravity >= 0.0) || !std::isfinite(params.gravity)) {
    throw ConfigError("gravity must be non-negative and finite");
  }
}

Trajectory::Trajectory(std::vector<KinematicState> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw ConfigError("a trajectory needs at least 2 samples");
  for (std::size_t n = 0; n < samples_.size(); ++n) {
    if (!finite_state(samples_[n])) throw ConfigError("trajectory sample is not finite");
    if (n > 0 && !(samples_[n].time > samples_[n - 1].time)) {
      throw ConfigError("trajectory times must be strictly increasing");
    }
  }
}

double kinetic_energy(const KinematicState& s, const MechanicsParams& p) {
  return 0.5 * p.mass * dot(s.velocity, s.velocity);
}

double potential_energy(const KinematicState& s, const MechanicsParams& p) {
  return p.mass * p.gravity * s.position.z;
}

double lagrangian(const KinematicState& s, const MechanicsParams& p) {
  return kinetic_energy(s, p) - potential_energy(s, p);
}

double action(const Trajectory& traj, const MechanicsParams& params) {
  validate(params);
  const auto samples = traj.samples();
  double sum = 0.0;
  double prev = lagrangian(samples[0], params);
  for (std::size_t n = 1; n < samples.size(); ++n) {
    const double cur = lagrangian(samples[n], params);
    sum += 0.5 * (prev + cur) * (samples[n].time - samples[n - 1].time);
    prev = cur;
  }
  return sum;
}

KinematicState analytic_state(const KinematicState& initial, double t,
                              const MechanicsParams& params) {
  validate(params);
  if (!(t >= initial.time)) throw ConfigError("analytic_state needs t >= initial time");
  const double dt = t - initial.time;
  const double g = params.gravity;
  KinematicState out = initial;
  out.time = t;
  out.position.x += initial.velocity.x * dt;
  out.position.y += initial.velocity.y * dt;
  out.position.z += initial.velocity.z * dt - 0.5 * g * dt * dt;
  out.velocity.z -= g * dt;
  return out;
}

namespace {

struct Derivative {
  Vec3 dpos;
  Vec3 dvel;
};

KinematicState rk4_step(const KinematicState& s, double h, const Vec3& accel) {
  // The acceleration field is uniform, so each stage only needs velocities.
  auto f = [&](const Vec3& vel) { return Derivative{vel, accel}; };
  const Derivative k1 = f(s.velocity);
  const Derivative k2 = f(s.velocity + k1.dvel * (0.5 * h));
  const Derivative k3 = f(s.velocity + k2.dvel * (0.5 * h));
  const Derivative k4 = f(s.velocity + k3.dvel * h);
  KinematicState out = s;
  out.position += (k1.dpos + 2.0 * k2.dpos + 2.0 * k3.dpos + k4.dpos) * (h / 6.0);
  out.velocity += (k1.dvel + 2.0 * k2.dvel + 2.0 * k3.dvel + k4.dvel) * (h / 6.0);
  out.time = s.time + h;
  return out;
}

}  // namespace

Trajectory integrate_rk4(const KinematicState& initial, double dt, double t_end,
                         const MechanicsParams& params) {
  validate(params);
  if (!finite_state(initial) || !std::isfinite(dt) || !std::isfinite(t_end)) {
    throw ConfigError("integrate_rk4 inputs must be finite");
  }
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_end > initial.time)) throw ConfigError("t_end must exceed the initial time");

  const Vec3 accel{0.0, 0.0, -params.gravity};
  const double span = t_end - initial.time;
  const double ratio = span / dt;
  // A ratio within rounding of an integer means dt divides the span.
  const bool exact = std::round(ratio) >= 1.0 &&
                     std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio);
  const auto full_steps =
      static_cast<std::size_t>(exact ? std::round(ratio) : std::floor(ratio));
  std::vector<KinematicState> out;
  out.reserve(full_steps + 2);
  out.push_back(initial);
  KinematicState s = initial;
  for (std::size_t n = 1; n <= full_steps; ++n) {
    s = rk4_step(s, dt, accel);
    // Re-anchor time to avoid accumulating rounding in the clock.
    s.time = initial.time + static_cast<double>(n) * dt;
    out.push_back(s);
  }
  if (exact) {
    out.back().time = t_end;
  } else {
    s = rk4_step(out.back(), t_end - out.back().time, accel);
    s.time = t_end;
    out.push_back(s);
  }
  return Trajectory(std::move(out));
}

double resultant_velocity_toward(const KinematicState& state, const Vec3& goal) {
  const Vec3 to_goal = goal - state.position;
  const double len = norm(to_goal);
  if (len == 0.0) throw ConfigError("direction to goal is undefined at the goal");
  return dot(state.velocity, to_goal) / len;
}

double EomResidual::max() const noexcept { return std::max({rx, ry, rz}); }

EomResidual eom_residual(const Trajectory& traj, const MechanicsParams& params) {
  validate(params);
  const auto s = traj.samples();
  if (s.size() < 3) throw ConfigError("eom_residual needs at least 3 samples");
  const double dt = s[1].time - s[0].time;
  for (std::size_t n = 2; n < s.size(); ++n) {
    if (std::abs((s[n].time - s[n - 1].time) - dt) > 1e-9) {
      throw ConfigError("eom_residual needs uniformly spaced samples");
    }
  }
  EomResidual r;
  const double inv = 1.0 / (dt * dt);
  for (std::size_t n = 1; n + 1 < s.size(); ++n) {
    const Vec3 acc = (s[n + 1].position - 2.0 * s[n].position + s[n - 1].position) * inv;
    r.rx = std::max(r.rx, std::abs(acc.x));
    r.ry = std::max(r.ry, std::abs(acc.y));
    r.rz = std::max(r.rz, std::abs(acc.z + params.gravity));
  }
  return r;
}

std::string trajectory_csv(const Trajectory& traj) {
  using detail::format_number;
  std::string out = "t,x,y,z,vx,vy,vz\n";
  for (const KinematicState& s : traj.samples()) {
    out += format_number(s.time) + "," + format_number(s.position.x) + "," +
           format_number(s.position.y) + "," + format_number(s.position.z) + "," +
           format_number(s.velocity.x) + "," + format_number(s.velocity.y) + "," +
           format_number(s.velocity.z) + "\n";
  }
  return out;
}

}  // namespace variastar
