#include "roundabout/coordinator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "parallel.hpp"
#include "roundabout/errors.hpp"
#include "roundabout/admm.hpp"
#include "roundabout/convexify.hpp"
#include "roundabout/geometry.hpp"
#include "roundabout/kinematics.hpp"
#include "roundabout/lqr.hpp"

namespace roundabout {

double pure_pursuit_steering(const VehicleState& x, const ReferencePath& path, double lookahead,
                             const SolverParams& p) {
  const Vec2 pos = x.position();
  std::size_t k = path.nearest(pos);
  while (k + 1 < path.size() && (path.waypoints[k] - pos).norm() < lookahead) ++k;
  Vec2 target = path.waypoints[k];
  const double reach = (target - pos).norm();
  if (reach < lookahead) target += path.tangents[k] * (lookahead - reach);

  const Vec2 to_target = target - pos;
  const double dist = to_target.norm();
  if (dist == 0.0) return 0.0;
  const double alpha = std::atan2(to_target.y(), to_target.x()) - x.theta;
  const double delta = std::atan2(2.0 * p.wheelbase_b * std::sin(alpha), dist);
  return std::clamp(delta, p.delta_min, p.delta_max);
}

std::vector<Trajectory> initialize_trajectories(const Scenario& scenario, double lookahead) {
  const auto& p = scenario.params;
  std::vector<Trajectory> out;
  out.reserve(scenario.vehicles.size());
  for (const auto& veh : scenario.vehicles) {
    Trajectory traj;
    traj.states.push_back(veh.start);
    for (int t = 0; t < p.horizon_T; ++t) {
      const auto& x = traj.states.back();
      const ControlInput u{pure_pursuit_steering(x, veh.path, lookahead, p), 0.0};
      traj.inputs.push_back(u);
      traj.states.push_back(kinematics::step(x, u, p));
    }
    out.push_back(std::move(traj));
  }
  return out;
}

namespace {

std::vector<ControlInput> stepped_inputs(const Trajectory& nominal, const TrajectoryVariation& dX, double alpha,
                                         const SolverParams& p) {
  std::vector<ControlInput> inputs(nominal.inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    const auto& u = nominal.inputs[t];
    inputs[t].delta = std::clamp(u.delta + alpha * dX.du[t][0], p.delta_min, p.delta_max);
    inputs[t].a = std::clamp(u.a + alpha * dX.du[t][1], p.a_min, p.a_max);
  }
  return inputs;
}

}  // namespace

TrajectoryUpdate line_search_update(const Trajectory& nominal, const TrajectoryVariation& dX,
                                    const ReferencePath& path, const SolverParams& p) {
  constexpr double kMinStep = 1.0 / 16.0;
  const double nominal_cost = trajectory_cost(nominal, path, p);
  for (double alpha = 1.0;; alpha *= 0.5) {
    const auto inputs = stepped_inputs(nominal, dX, alpha, p);
    if (alpha <= kMinStep) return {kinematics::rollout(nominal.states.front(), inputs, p), alpha};
    try {
      Trajectory candidate = kinematics::rollout(nominal.states.front(), inputs, p);
      if (trajectory_cost(candidate, path, p) <= nominal_cost) return {std::move(candidate), alpha};
    } catch (const DomainError&) {
      // shorten the step
    }
  }
}

Trajectory update_trajectory(const Trajectory& nominal, const TrajectoryVariation& dX, const ReferencePath& path,
                             const SolverParams& p) {
  return line_search_update(nominal, dX, path, p).trajectory;
}

double total_cost(std::span<const Trajectory> trajs, const Scenario& scenario) {
  double total = 0.0;
  for (std::size_t i = 0; i < trajs.size(); ++i)
    total += trajectory_cost(trajs[i], scenario.vehicles[i].path, scenario.params);
  return total;
}

std::map<int, double> group_average_velocities(std::span<const Trajectory> trajs, std::span<const int> groups) {
  std::map<int, double> sum;
  std::map<int, int> count;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    double v = 0.0;
    for (const auto& x : trajs[i].states) v += x.v;
    sum[groups[i]] += v / static_cast<double>(trajs[i].states.size());
    count[groups[i]] += 1;
  }
  for (auto& [g, s] : sum) s /= count[g];
  return sum;
}

SolveResult solve(const Scenario& scenario, const CoordinatorOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const SolverParams& p = scenario.params;
  const int n = scenario.num_vehicles();
  const int horizon = p.horizon_T;
  const int workers = std::clamp(options.workers, 1, std::max(1, n));
  const auto cfg = admm::AdmmConfig::from(p, n);

  SolveResult result;
  auto& report = result.report;
  report.workers = workers;
  std::vector<Trajectory> nominal = initialize_trajectories(scenario, options.init_lookahead);
  double prev_cost = total_cost(nominal, scenario);
  report.cost_trace.push_back(prev_cost);

  const int rows = static_cast<int>(ConstraintSystem::expected_size(n, horizon));
  std::vector<admm::AdmmWorkerState> states(n, admm::AdmmWorkerState::cold(rows));
  std::vector<std::vector<kinematics::LinearizedDynamics>> dynamics(n);
  std::vector<TrackingCost> costs(n);
  std::vector<admm::VehicleSubproblem> subproblems(n);

  for (int outer = 1; outer <= p.max_outer_iters; ++outer) {
    detail::parallel_for(workers, n, [&](int i) {
      const Trajectory& traj = nominal[i];
      dynamics[i].resize(horizon);
      for (int t = 0; t < horizon; ++t) dynamics[i][t] = kinematics::linearize(traj.states[t], traj.inputs[t], p);
      const auto refs = assign_references(traj, scenario.vehicles[i].path);
      costs[i] = build_tracking_cost(traj, refs, p);
      subproblems[i] = {&costs[i], dynamics[i]};
      states[i].warm_restart();
    });
    const ConstraintSystem system = build_constraint_system(nominal, scenario.boundary, p, workers);

    std::vector<LqrSolution> primal;
    for (int k = 0; k < p.k_max; ++k) primal = admm::inner_iteration(states, system, subproblems, cfg, workers);

    std::vector<Trajectory> next(n);
    std::vector<double> alphas(n);
    detail::parallel_for(workers, n, [&](int i) {
      auto upd = line_search_update(nominal[i], primal[i].dX, scenario.vehicles[i].path, p);
      next[i] = std::move(upd.trajectory);
      alphas[i] = upd.alpha;
    });
    double min_residual = 0.0;
    if (options.on_iteration) {
      std::vector<TrajectoryVariation> dXs;
      for (const auto& sol : primal) dXs.push_back(sol.dX);
      min_residual = system.residual(dXs).minCoeff();
    }
    nominal = std::move(next);

    const double cost = total_cost(nominal, scenario);
    report.cost_trace.push_back(cost);
    report.outer_iterations = outer;
    const double min_dist = min_pairwise_distance(nominal, p);
    const bool settled = std::abs(cost - prev_cost) < p.zeta;
    prev_cost = cost;
    if (options.on_iteration) options.on_iteration({outer, cost, min_dist, min_residual, alphas, &nominal});
    if (settled && (n < 2 || min_dist >= p.d_safe)) {
      report.status = SolveStatus::converged;
      break;
    }
  }

  std::vector<int> groups(n);
  for (int i = 0; i < n; ++i) groups[i] = scenario.vehicles[i].group;
  report.final_cost = prev_cost;
  report.min_pairwise_distance = min_pairwise_distance(nominal, p);
  report.group_average_velocity = group_average_velocities(nominal, groups);
  result.trajectories = std::move(nominal);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace roundabout
