#pragma once

#include <span>

#include "roundabout/params.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

/// Discrete-time kinematic bicycle model about the rear axle.
///
/// Validity requires |tau_s v sin(delta)| <= 0.999 b; outside that band the
/// displacement square root and the heading arcsin lose their meaning and all
/// functions here throw DomainError instead of clamping.
namespace kinematics {

/// Per-step travel of the rear axle: b + tau v cos(d) - sqrt(b^2 - (tau v sin(d))^2).
double f_r(double v, double delta, const SolverParams& p);

VehicleState step(const VehicleState& x, const ControlInput& u, const SolverParams& p);

Trajectory rollout(const VehicleState& x0, std::span<const ControlInput> inputs, const SolverParams& p);

struct LinearizedDynamics {
  Mat4 A;
  Mat42 B;
};

/// Analytic Jacobians of step() at (x, u).
LinearizedDynamics linearize(const VehicleState& x, const ControlInput& u, const SolverParams& p);

}  // namespace kinematics
}  // namespace roundabout
