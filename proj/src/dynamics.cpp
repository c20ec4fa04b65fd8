#include "searchplan/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace searchplan {

AgentParams::AgentParams(double mass, double air_resistance, double dt,
                         const Vec3& u_min, const Vec3& u_max,
                         const Vec3& v_min, const Vec3& v_max, double gravity)
    : mass_(mass),
      air_resistance_(air_resistance),
      dt_(dt),
      gravity_(gravity),
      u_min_(u_min),
      u_max_(u_max),
      v_min_(v_min),
      v_max_(v_max) {
  if (!(mass > 0.0)) throw std::invalid_argument("AgentParams: mass must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("AgentParams: dt must be > 0");
  if (!(air_resistance >= 0.0 && air_resistance < 1.0)) {
    throw std::invalid_argument("AgentParams: air_resistance must be in [0,1)");
  }
  if (!(gravity >= 0.0)) {
    throw std::invalid_argument("AgentParams: gravity must be >= 0");
  }
  if ((u_min.array() >= u_max.array()).any() ||
      (v_min.array() >= v_max.array()).any()) {
    throw std::invalid_argument("AgentParams: bounds must satisfy min < max");
  }
  const double hover_z = mass * gravity;
  if (hover_z < u_min.z() || hover_z > u_max.z()) {
    throw std::invalid_argument(
        "AgentParams: hover input m*g outside the z force bounds");
  }
  phi_.setZero();
  phi_.topLeftCorner<3, 3>() = Eigen::Matrix3d::Identity();
  phi_.topRightCorner<3, 3>() = dt * Eigen::Matrix3d::Identity();
  phi_.bottomRightCorner<3, 3>() = damping() * Eigen::Matrix3d::Identity();
  gamma_.setZero();
  gamma_.bottomRows<3>() = force_gain() * Eigen::Matrix3d::Identity();
}

State step(const State& x, const ControlInput& u, const AgentParams& p) {
  if (!x.position.allFinite() || !x.velocity.allFinite() ||
      !u.force.allFinite()) {
    throw std::invalid_argument("step: non-finite state or control");
  }
  State next;
  next.position = x.position + p.dt() * x.velocity;
  next.velocity =
      p.damping() * x.velocity + p.force_gain() * (u.force - p.hover_force());
  return next;
}

std::vector<State> rollout(const State& x0,
                           const std::vector<ControlInput>& controls,
                           const AgentParams& p) {
  std::vector<State> states;
  states.reserve(controls.size());
  State cur = x0;
  for (const ControlInput& u : controls) {
    cur = step(cur, u, p);
    states.push_back(cur);
  }
  return states;
}

State closed_form_state(const State& x0,
                        const std::vector<ControlInput>& controls, int t,
                        const AgentParams& p) {
  if (t < 1 || t > static_cast<int>(controls.size())) {
    throw std::out_of_range("closed_form_state: t out of range");
  }
  // Phi^t x0 plus the convolution sum, accumulating Phi^tau incrementally.
  Eigen::Matrix<double, 6, 1> acc = Eigen::Matrix<double, 6, 1>::Zero();
  Matrix6d phi_pow = Matrix6d::Identity();
  const Vec3 hover = p.hover_force();
  for (int tau = 0; tau < t; ++tau) {
    acc += phi_pow * (p.gamma() * (controls[t - tau - 1].force - hover));
    phi_pow = phi_pow * p.phi();
  }
  acc += phi_pow * x0.as_vector();  // phi_pow is now Phi^t
  return State::from_vector(acc);
}

}  // namespace searchplan
