#include "roundabout/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "roundabout/errors.hpp"

namespace roundabout::kinematics {

namespace {

constexpr double kValidityFraction = 0.999;

// Lateral term tau v sin(delta) and the remaining square root.
struct SteerTerms {
  double w;
  double root;
};

SteerTerms steer_terms(double v, double delta, const SolverParams& p) {
  const double b = p.wheelbase_b;
  const double w = p.tau_s * v * std::sin(delta);
  if (!(std::abs(w) <= kValidityFraction * b)) {
    std::ostringstream msg;
    msg << "kinematic model invalid: |tau_s v sin(delta)| = " << std::abs(w) << " exceeds " << kValidityFraction
        << " b (v=" << v << ", delta=" << delta << ")";
    throw DomainError(msg.str());
  }
  return {w, std::sqrt(b * b - w * w)};
}

}  // namespace

double f_r(double v, double delta, const SolverParams& p) {
  const auto [w, root] = steer_terms(v, delta, p);
  (void)w;
  return p.wheelbase_b + p.tau_s * v * std::cos(delta) - root;
}

VehicleState step(const VehicleState& x, const ControlInput& u, const SolverParams& p) {
  const auto [w, root] = steer_terms(x.v, u.delta, p);
  const double travel = p.wheelbase_b + p.tau_s * x.v * std::cos(u.delta) - root;
  return {x.px + travel * std::cos(x.theta), x.py + travel * std::sin(x.theta),
          x.theta + std::asin(w / p.wheelbase_b), x.v + p.tau_s * u.a};
}

Trajectory rollout(const VehicleState& x0, std::span<const ControlInput> inputs, const SolverParams& p) {
  Trajectory traj;
  traj.inputs.assign(inputs.begin(), inputs.end());
  traj.states.reserve(inputs.size() + 1);
  traj.states.push_back(x0);
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    try {
      traj.states.push_back(step(traj.states.back(), inputs[t], p));
    } catch (const DomainError& e) {
      throw DomainError("rollout failed at t=" + std::to_string(t) + ": " + e.what());
    }
  }
  return traj;
}

LinearizedDynamics linearize(const VehicleState& x, const ControlInput& u, const SolverParams& p) {
  const auto [w, root] = steer_terms(x.v, u.delta, p);
  const double tau = p.tau_s;
  const double b = p.wheelbase_b;
  const double cd = std::cos(u.delta);
  const double sd = std::sin(u.delta);
  const double ct = std::cos(x.theta);
  const double st = std::sin(x.theta);

  const double travel = b + tau * x.v * cd - root;
  const double dtravel_dv = tau * cd + w * tau * sd / root;
  const double dtravel_ddelta = -tau * x.v * sd + w * tau * x.v * cd / root;
  // d/dz asin(w/b) = (dw/dz) / sqrt(b^2 - w^2)
  const double dheading_dv = tau * sd / root;
  const double dheading_ddelta = tau * x.v * cd / root;

  LinearizedDynamics lin;
  lin.A.setIdentity();
  lin.A(0, 2) = -travel * st;
  lin.A(0, 3) = dtravel_dv * ct;
  lin.A(1, 2) = travel * ct;
  lin.A(1, 3) = dtravel_dv * st;
  lin.A(2, 3) = dheading_dv;

  lin.B.setZero();
  lin.B(0, 0) = dtravel_ddelta * ct;
  lin.B(1, 0) = dtravel_ddelta * st;
  lin.B(2, 0) = dheading_ddelta;
  lin.B(3, 1) = tau;
  return lin;
}

}  // namespace roundabout::kinematics
