#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "roundabout/convexify.hpp"
#include "roundabout/kinematics.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

/// min  sum_{t=0..T} dx'H_t dx + h_t'dx + sum_{t<T} du'G_t du + g_t'du
/// s.t. dx_{t+1} = A_t dx_t + B_t du_t,  dx_0 = 0.
struct AffineLqrProblem {
  std::vector<Mat4> H;
  std::vector<Vec4> h;
  std::vector<Mat2> G;
  std::vector<Vec2> g;
  std::vector<Mat4> A;
  std::vector<Mat42> B;

  int horizon() const { return static_cast<int>(G.size()); }
  double objective(const TrajectoryVariation& dX) const;
};

/// Expands tracking + eta * ||J^i dX + r||^2 for one vehicle. Terms from
/// rows not carrying this vehicle are dropped (they are constant in dX^i).
AffineLqrProblem assemble_subproblem(const TrackingCost& tracking, const ConstraintSystem& system, int vehicle,
                                     const Eigen::VectorXd& r, double eta,
                                     std::span<const kinematics::LinearizedDynamics> dynamics);

struct LqrSolution {
  TrajectoryVariation dX;
  double value = 0.0;
};

/// Backward Riccati recursion with affine terms, then forward rollout from
/// dx_0 = 0. Throws NumericalError if a stage Hessian is not positive definite.
LqrSolution solve_lqr(const AffineLqrProblem& prob);

}  // namespace roundabout
