#include "roundabout/convexify.hpp"

#include <sstream>

#include "parallel.hpp"
#include "roundabout/errors.hpp"

namespace roundabout {

std::vector<ReferenceAssignment> assign_references(const Trajectory& traj, const ReferencePath& path) {
  std::vector<ReferenceAssignment> refs;
  refs.reserve(traj.states.size());
  for (const auto& x : traj.states) {
    const std::size_t k = path.nearest(x.position());
    refs.push_back({k, path.waypoints[k], path.tangents[k]});
  }
  return refs;
}

namespace {

Mat4 weight_matrix(const Vec2& tangent, const SolverParams& p) {
  const Vec2 lateral(-tangent.y(), tangent.x());
  Mat4 Q = Mat4::Zero();
  Q.topLeftCorner<2, 2>() = p.w_lat * lateral * lateral.transpose();
  Q(3, 3) = p.w_vel;
  return Q;
}

// Heading is unweighted, so the reference heading is taken equal to the nominal.
Vec4 reference_state(const VehicleState& x, const ReferenceAssignment& ref, const SolverParams& p) {
  return {ref.point.x(), ref.point.y(), x.theta, p.v_ref};
}

Mat2 input_weight(const SolverParams& p) {
  Mat2 R = Mat2::Zero();
  R(0, 0) = p.w_delta;
  R(1, 1) = p.w_acc;
  return R;
}

}  // namespace

TrackingCost build_tracking_cost(const Trajectory& traj, std::span<const ReferenceAssignment> refs,
                                 const SolverParams& p) {
  TrackingCost cost;
  const std::size_t steps = traj.states.size();
  cost.Q.resize(steps);
  cost.q.resize(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    cost.Q[t] = weight_matrix(refs[t].tangent, p);
    cost.q[t] = 2.0 * cost.Q[t] * (traj.states[t].vec() - reference_state(traj.states[t], refs[t], p));
  }
  cost.R = input_weight(p);
  cost.r.resize(traj.inputs.size());
  for (std::size_t t = 0; t < traj.inputs.size(); ++t) cost.r[t] = 2.0 * cost.R * traj.inputs[t].vec();
  return cost;
}

double trajectory_cost(const Trajectory& traj, const ReferencePath& path, const SolverParams& p) {
  const auto refs = assign_references(traj, path);
  double total = 0.0;
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    const Vec4 e = traj.states[t].vec() - reference_state(traj.states[t], refs[t], p);
    total += e.dot(weight_matrix(refs[t].tangent, p) * e);
  }
  const Mat2 R = input_weight(p);
  for (const auto& u : traj.inputs) total += u.vec().dot(R * u.vec());
  return total;
}

ConstraintSystem::ConstraintSystem(std::vector<LinearConstraintRow> rows, int num_vehicles, int horizon)
    : rows_(std::move(rows)), vehicle_rows_(num_vehicles), num_vehicles_(num_vehicles), horizon_(horizon) {
  l_.resize(static_cast<Eigen::Index>(rows_.size()));
  for (int k = 0; k < size(); ++k) {
    const auto& row = rows_[k];
    l_[k] = row.offset;
    for (int t = 0; t < row.term_count; ++t) {
      const int v = row.terms[t].vehicle;
      if (v < 0 || v >= num_vehicles) throw ValidationError("constraint row references unknown vehicle");
      vehicle_rows_[v].push_back({k, t});
    }
  }
}

double ConstraintSystem::term_value(const RowRef& ref, const TrajectoryVariation& dX) const {
  const auto& row = rows_[ref.row];
  const auto& c = row.terms[ref.term].coeff;
  const int tau = row.meta.tau;
  if (row.is_input_row()) {
    const Vec2& du = dX.du[tau];
    return c[0] * du[0] + c[1] * du[1];
  }
  const Vec4& dx = dX.dx[tau];
  return c[0] * dx[0] + c[1] * dx[1] + c[2] * dx[2] + c[3] * dx[3];
}

void ConstraintSystem::add_product(int vehicle, const TrajectoryVariation& dX, Eigen::VectorXd& out) const {
  for (const auto& ref : vehicle_rows_[vehicle]) out[ref.row] += term_value(ref, dX);
}

Eigen::VectorXd ConstraintSystem::residual(std::span<const TrajectoryVariation> dXs) const {
  Eigen::VectorXd res = l_;
  for (int i = 0; i < num_vehicles_; ++i) add_product(i, dXs[i], res);
  return res;
}

long ConstraintSystem::expected_size(int num_vehicles, int horizon) {
  const long n = num_vehicles;
  const long steps = horizon + 1;
  return 2 * n * (n - 1) * steps + 2 * n * steps + 4 * n * horizon;
}

ConstraintSystem build_constraint_system(std::span<const Trajectory> trajs, const BoundaryCloud& boundary,
                                         const SolverParams& p, int workers) {
  const int n = static_cast<int>(trajs.size());
  if (n == 0) throw ValidationError("constraint system needs at least one trajectory");
  const int horizon = trajs.front().horizon();
  const int steps = horizon + 1;

  std::vector<std::vector<LinearConstraintRow>> collision(steps);
  detail::parallel_for(workers, steps, [&](int tau) { append_collision_rows_at(trajs, tau, p, collision[tau]); });
  std::vector<std::vector<LinearConstraintRow>> boundary_per(n);
  std::vector<std::vector<LinearConstraintRow>> input_per(n);
  detail::parallel_for(workers, n, [&](int i) {
    boundary_per[i] = boundary_rows(trajs[i], i, boundary, p);
    input_per[i] = input_rows(trajs[i], i, p);
  });

  std::vector<LinearConstraintRow> rows;
  rows.reserve(static_cast<std::size_t>(ConstraintSystem::expected_size(n, horizon)));
  for (auto& block : collision) rows.insert(rows.end(), block.begin(), block.end());
  for (int tau = 0; tau < steps; ++tau)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < 2; ++b) rows.push_back(boundary_per[i][2 * tau + b]);
  for (int tau = 0; tau < horizon; ++tau)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 4; ++k) rows.push_back(input_per[i][4 * tau + k]);
  return ConstraintSystem(std::move(rows), n, horizon);
}

}  // namespace roundabout
