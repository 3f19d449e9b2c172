#include "roundabout/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "roundabout/errors.hpp"

namespace roundabout {

namespace {

const char* circle_name(Circle c) { return c == Circle::front ? "front" : "rear"; }

std::array<double, 4> project(const Vec2& n, const Mat24& J, double scale) {
  const Eigen::RowVector4d c = scale * n.transpose() * J;
  return {c[0], c[1], c[2], c[3]};
}

}  // namespace

CirclePair circle_centers(const VehicleState& x, const SolverParams& p) {
  const Vec2 dir(std::cos(x.theta), std::sin(x.theta));
  return {x.position() + p.d_f * dir, x.position() + p.d_r * dir};
}

Mat24 position_jacobian(double theta, double d_beta) {
  Mat24 J;
  J << 1.0, 0.0, -d_beta * std::sin(theta), 0.0,  //
      0.0, 1.0, d_beta * std::cos(theta), 0.0;
  return J;
}

void append_collision_rows_at(std::span<const Trajectory> trajs, int tau, const SolverParams& p,
                              std::vector<LinearConstraintRow>& out) {
  const int n = static_cast<int>(trajs.size());
  std::vector<CirclePair> centers(n);
  for (int i = 0; i < n; ++i) centers[i] = circle_centers(trajs[i].states[tau], p);
  for (int i = 0; i < n; ++i) {
    const double theta_i = trajs[i].states[tau].theta;
    for (int j = i + 1; j < n; ++j) {
      const double theta_j = trajs[j].states[tau].theta;
      for (Circle beta : kCircles) {
        for (Circle gamma : kCircles) {
          const Vec2 diff = centers[i][beta] - centers[j][gamma];
          const double d = diff.norm();
          if (!(d > 0.0)) {
            std::ostringstream msg;
            msg << "coincident circle centers at t=" << tau << ": vehicle " << i << " " << circle_name(beta)
                << " and vehicle " << j << " " << circle_name(gamma);
            throw GeometryError(msg.str());
          }
          const Vec2 normal = diff / d;
          LinearConstraintRow row;
          row.kind = RowKind::collision;
          row.term_count = 2;
          row.terms[0] = {i, project(normal, position_jacobian(theta_i, circle_bias(beta, p)), 1.0)};
          row.terms[1] = {j, project(normal, position_jacobian(theta_j, circle_bias(gamma, p)), -1.0)};
          row.offset = d - p.d_safe;
          row.meta.tau = tau;
          row.meta.circle_a = beta;
          row.meta.circle_b = gamma;
          row.meta.normal = normal;
          out.push_back(row);
        }
      }
    }
  }
}

std::vector<LinearConstraintRow> collision_rows(std::span<const Trajectory> trajs, const SolverParams& p) {
  std::vector<LinearConstraintRow> rows;
  if (trajs.empty()) return rows;
  const int n = static_cast<int>(trajs.size());
  const int steps = static_cast<int>(trajs.front().states.size());
  rows.reserve(static_cast<std::size_t>(2 * n * (n - 1) * steps));
  for (int tau = 0; tau < steps; ++tau) append_collision_rows_at(trajs, tau, p, rows);
  return rows;
}

std::vector<LinearConstraintRow> boundary_rows(const Trajectory& traj, int vehicle, const BoundaryCloud& boundary,
                                               const SolverParams& p) {
  std::vector<LinearConstraintRow> rows;
  rows.reserve(2 * traj.states.size());
  for (int tau = 0; tau < static_cast<int>(traj.states.size()); ++tau) {
    const auto& x = traj.states[tau];
    const CirclePair centers = circle_centers(x, p);
    for (Circle beta : kCircles) {
      const Vec2& c = centers[beta];
      const Vec2 diff = c - boundary.nearest(c);
      const double d = diff.norm();
      if (!(d > 0.0)) {
        std::ostringstream msg;
        msg << "vehicle " << vehicle << " " << circle_name(beta) << " circle center lies on a boundary point at t="
            << tau;
        throw GeometryError(msg.str());
      }
      const Vec2 normal = diff / d;
      LinearConstraintRow row;
      row.kind = RowKind::boundary;
      row.term_count = 1;
      row.terms[0] = {vehicle, project(normal, position_jacobian(x.theta, circle_bias(beta, p)), 2.0)};
      row.offset = 2.0 * d - p.d_safe;
      row.meta.tau = tau;
      row.meta.circle_a = beta;
      row.meta.normal = normal;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<LinearConstraintRow> input_rows(const Trajectory& traj, int vehicle, const SolverParams& p) {
  std::vector<LinearConstraintRow> rows;
  rows.reserve(4 * traj.inputs.size());
  auto make = [&](int tau, RowKind kind, InputChannel ch, double coeff, double offset) {
    LinearConstraintRow row;
    row.kind = kind;
    row.term_count = 1;
    row.terms[0].vehicle = vehicle;
    row.terms[0].coeff[ch == InputChannel::steer ? 0 : 1] = coeff;
    row.offset = offset;
    row.meta.tau = tau;
    row.meta.channel = ch;
    rows.push_back(row);
  };
  for (int tau = 0; tau < static_cast<int>(traj.inputs.size()); ++tau) {
    const auto& u = traj.inputs[tau];
    make(tau, RowKind::input_lower, InputChannel::accel, 1.0, u.a - p.a_min);
    make(tau, RowKind::input_upper, InputChannel::accel, -1.0, p.a_max - u.a);
    make(tau, RowKind::input_lower, InputChannel::steer, 1.0, u.delta - p.delta_min);
    make(tau, RowKind::input_upper, InputChannel::steer, -1.0, p.delta_max - u.delta);
  }
  return rows;
}

double min_pairwise_distance_at(std::span<const Trajectory> trajs, int tau, const SolverParams& p) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(trajs.size());
  for (int i = 0; i < n; ++i) {
    const CirclePair ci = circle_centers(trajs[i].states[tau], p);
    for (int j = i + 1; j < n; ++j) {
      const CirclePair cj = circle_centers(trajs[j].states[tau], p);
      for (Circle beta : kCircles)
        for (Circle gamma : kCircles) best = std::min(best, (ci[beta] - cj[gamma]).norm());
    }
  }
  return best;
}

double min_pairwise_distance(std::span<const Trajectory> trajs, const SolverParams& p) {
  double best = std::numeric_limits<double>::infinity();
  if (trajs.empty()) return best;
  for (int tau = 0; tau < static_cast<int>(trajs.front().states.size()); ++tau)
    best = std::min(best, min_pairwise_distance_at(trajs, tau, p));
  return best;
}

}  // namespace roundabout
