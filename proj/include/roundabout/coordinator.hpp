#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

/// Pure-pursuit steering toward the path point one lookahead ahead of the
/// nearest waypoint, clamped to the steering bounds.
double pure_pursuit_steering(const VehicleState& x, const ReferencePath& path, double lookahead,
                             const SolverParams& p);

/// Snapshot passed to CoordinatorOptions::on_iteration after each outer iteration.
struct IterationInfo {
  int outer = 0;
  double cost = 0.0;
  double min_distance = 0.0;
  /// Most negative entry of sum_i J^i dX^i + l for the last inner iterate.
  double min_linear_residual = 0.0;
  std::vector<double> step_sizes;
  const std::vector<Trajectory>* trajectories = nullptr;
};

struct CoordinatorOptions {
  int workers = 1;
  double init_lookahead = 6.0;
  std::function<void(const IterationInfo&)> on_iteration;
};

/// Constant-speed pure-pursuit rollouts, one per vehicle.
std::vector<Trajectory> initialize_trajectories(const Scenario& scenario, double lookahead = 6.0);

/// Step the inputs along du (clamped to the box), re-roll from the fixed
/// initial state and backtrack alpha = 1, 1/2, ... while the true cost
/// rises; alpha = 1/16 is accepted unconditionally.
Trajectory update_trajectory(const Trajectory& nominal, const TrajectoryVariation& dX, const ReferencePath& path,
                             const SolverParams& p);

struct TrajectoryUpdate {
  Trajectory trajectory;
  double alpha = 1.0;
};
TrajectoryUpdate line_search_update(const Trajectory& nominal, const TrajectoryVariation& dX,
                                    const ReferencePath& path, const SolverParams& p);

enum class SolveStatus { converged, max_iterations };

struct SolveReport {
  SolveStatus status = SolveStatus::max_iterations;
  int outer_iterations = 0;
  double final_cost = 0.0;
  std::vector<double> cost_trace;  // entry 0 is the initial nominal
  double min_pairwise_distance = 0.0;
  double wall_time = 0.0;
  std::map<int, double> group_average_velocity;
  int workers = 1;
};

struct SolveResult {
  std::vector<Trajectory> trajectories;
  SolveReport report;
};

/// Sequential convexification with k_max dual-consensus ADMM rounds per
/// outer iteration. Stops once the cost change is below zeta and the
/// committed trajectories keep every circle pair at least d_safe apart.
SolveResult solve(const Scenario& scenario, const CoordinatorOptions& options = {});

double total_cost(std::span<const Trajectory> trajs, const Scenario& scenario);

/// Mean over each group's vehicles of their time-averaged speed (t = 0..T).
std::map<int, double> group_average_velocities(std::span<const Trajectory> trajs, std::span<const int> groups);

}  // namespace roundabout
