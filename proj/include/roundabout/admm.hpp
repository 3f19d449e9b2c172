#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "roundabout/convexify.hpp"
#include "roundabout/kinematics.hpp"
#include "roundabout/lqr.hpp"

namespace roundabout::admm {

/// 1 / (2 (sigma + 2 rho (N - 1))).
double derive_eta(double sigma, double rho, int num_vehicles);

struct AdmmConfig {
  double sigma = 0.2;
  double rho = 0.02;
  double eta = 0.0;
  double epsilon = 0.3;
  int num_vehicles = 1;

  static AdmmConfig make(double sigma, double rho, int num_vehicles, double epsilon);
  static AdmmConfig from(const SolverParams& p, int num_vehicles) {
    return make(p.sigma, p.rho, num_vehicles, p.epsilon);
  }
};

/// One vehicle's copy of the dual/consensus vectors, all of length n.
struct AdmmWorkerState {
  Eigen::VectorXd p, s, y, z, r;
  int k = 0;

  static AdmmWorkerState cold(int n);
  /// Outer-iteration restart: p = s = 0, y and z carried over.
  void warm_restart();
};

/// p, s and r updates (dual steps before the primal solve). ys is the
/// broadcast snapshot of every vehicle's y, indexed by vehicle id; the sums
/// over j != i run in ascending id order.
void dual_steps(AdmmWorkerState& state, int vehicle, std::span<const Eigen::VectorXd> ys, const AdmmConfig& cfg);

struct ProxResult {
  Eigen::VectorXd z_star;
  Eigen::VectorXd z;
};

/// z* = max(N (s + sigma y), -l + epsilon) element-wise, then
/// z = s / sigma + y - z* / (N sigma).
ProxResult prox_z(const Eigen::VectorXd& s, const Eigen::VectorXd& y, const Eigen::VectorXd& l,
                  const AdmmConfig& cfg);

/// Per-vehicle data that stays fixed during an inner loop.
struct VehicleSubproblem {
  const TrackingCost* cost = nullptr;
  std::span<const kinematics::LinearizedDynamics> dynamics;
};

/// One synchronized round for all vehicles: snapshot y, dual steps, LQR
/// primal solve, y update, prox. Returns each vehicle's primal dX.
std::vector<LqrSolution> inner_iteration(std::vector<AdmmWorkerState>& states, const ConstraintSystem& system,
                                         std::span<const VehicleSubproblem> subproblems, const AdmmConfig& cfg,
                                         int workers = 1);

}  // namespace roundabout::admm
