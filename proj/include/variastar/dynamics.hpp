#pragma once

#include <span>
#include <string>
#include <vector>

#include "variastar/vec3.hpp"

namespace variastar {

struct KinematicState {
  Vec3 position;  // m
  Vec3 velocity;  // m/s
  double time = 0.0;  // s
};

struct MechanicsParams {
  double mass = 1.0;     // kg
  double gravity = 9.81; // m/s^2, acting along -z
};

void validate(const MechanicsParams& params);

/// Time-ordered samples of a point-mass trajectory. Construction enforces
/// at least two samples with strictly increasing, finite times.
class Trajectory {
 public:
  explicit Trajectory(std::vector<KinematicState> samples);

  std::span<const KinematicState> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const KinematicState& front() const noexcept { return samples_.front(); }
  const KinematicState& back() const noexcept { return samples_.back(); }
  const KinematicState& operator[](std::size_t n) const { return samples_[n]; }

 private:
  std::vector<KinematicState> samples_;
};

// L = T - V with V = m g z.
double lagrangian(const KinematicState& state, const MechanicsParams& params);
double kinetic_energy(const KinematicState& state, const MechanicsParams& params);
double potential_energy(const KinematicState& state, const MechanicsParams& params);

// Trapezoidal quadrature of L over the samples.
double action(const Trajectory& traj, const MechanicsParams& params);

// Closed-form solution of the Euler-Lagrange equations under uniform
// gravity: x, y uniform motion, z'' = -g.
KinematicState analytic_state(const KinematicState& initial, double t,
                              const MechanicsParams& params);

// Classic RK4 on (x'', y'', z'') = (0, 0, -g). The last step is shortened so
// the final sample lands exactly on t_end.
Trajectory integrate_rk4(const KinematicState& initial, double dt, double t_end,
                         const MechanicsParams& params);

// Signed speed along the direction from the state's position to `goal`.
double resultant_velocity_toward(const KinematicState& state, const Vec3& goal);

struct EomResidual {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double max() const noexcept;
};

// Max over interior samples of |x''|, |y''|, |z'' + g| by central
// differences of positions. Requires >= 3 uniformly spaced samples.
EomResidual eom_residual(const Trajectory& traj, const MechanicsParams& params);

// CSV with header `t,x,y,z,vx,vy,vz`.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace variastar
