#ifndef SEARCHPLAN_DYNAMICS_HPP
#define SEARCHPLAN_DYNAMICS_HPP

#include <Eigen/Dense>

#include <vector>

#include "searchplan/geometry.hpp"

namespace searchplan {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix63d = Eigen::Matrix<double, 6, 3>;

/// Discrete-time point-mass parameters. The transition matrices are built
/// once at construction:
///
///   x_t = Phi x_{t-1} + Gamma (u_{t-1} - u_hover)
///
/// with Phi = [I, dt*I; 0, (1-eta)*I] and Gamma = [0; (dt/m)*I].
class AgentParams {
 public:
  AgentParams(double mass, double air_resistance, double dt,
              const Vec3& u_min, const Vec3& u_max, const Vec3& v_min,
              const Vec3& v_max, double gravity = 9.81);

  double mass() const { return mass_; }
  double air_resistance() const { return air_resistance_; }
  double dt() const { return dt_; }
  double gravity() const { return gravity_; }
  double damping() const { return 1.0 - air_resistance_; }
  double force_gain() const { return dt_ / mass_; }

  const Vec3& u_min() const { return u_min_; }
  const Vec3& u_max() const { return u_max_; }
  const Vec3& v_min() const { return v_min_; }
  const Vec3& v_max() const { return v_max_; }

  /// Gravity-compensating input [0, 0, m*g].
  Vec3 hover_force() const { return Vec3(0.0, 0.0, mass_ * gravity_); }

  const Matrix6d& phi() const { return phi_; }
  const Matrix63d& gamma() const { return gamma_; }

 private:
  double mass_;
  double air_resistance_;
  double dt_;
  double gravity_;
  Vec3 u_min_, u_max_, v_min_, v_max_;
  Matrix6d phi_;
  Matrix63d gamma_;
};

struct State {
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> v;
    v << position, velocity;
    return v;
  }
  static State from_vector(const Eigen::Matrix<double, 6, 1>& v) {
    return State{v.head<3>(), v.tail<3>()};
  }
};

struct ControlInput {
  Vec3 force{Vec3::Zero()};
};

/// One step of the dynamics. Unconstrained: input/velocity bounds are the
/// optimizer's business, not the simulator's.
State step(const State& x, const ControlInput& u, const AgentParams& p);

/// Iterated step(); result[t] is the state after applying controls[0..t].
std::vector<State> rollout(const State& x0,
                           const std::vector<ControlInput>& controls,
                           const AgentParams& p);

/// State at step t (1-based) from the closed form
///   x_t = Phi^t x_0 + sum_{tau=0}^{t-1} Phi^tau Gamma (u_{t-tau-1} - u_hover).
/// Independent evaluation path used as an oracle against rollout().
State closed_form_state(const State& x0,
                        const std::vector<ControlInput>& controls, int t,
                        const AgentParams& p);

}  // namespace searchplan

#endif  // SEARCHPLAN_DYNAMICS_HPP
