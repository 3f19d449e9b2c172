#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "roundabout/geometry.hpp"
#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

struct ReferenceAssignment {
  std::size_t index = 0;
  Vec2 point = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();
};

/// Nearest path waypoint to each nominal rear-axle position, t = 0..T.
std::vector<ReferenceAssignment> assign_references(const Trajectory& traj, const ReferencePath& path);

/// Quadratic model of one vehicle's objective about its nominal:
///   sum_t dx'Q_t dx + q_t'dx  +  sum_t du'R du + r_t'du.
/// Only the lateral offset from the path and the speed error are weighted.
struct TrackingCost {
  std::vector<Mat4> Q;  // T+1
  std::vector<Vec4> q;  // T+1
  Mat2 R = Mat2::Identity();
  std::vector<Vec2> r;  // T
};

TrackingCost build_tracking_cost(const Trajectory& traj, std::span<const ReferenceAssignment> refs,
                                 const SolverParams& p);

/// Objective of the original problem on a committed trajectory, with
/// references reassigned by nearest neighbor.
double trajectory_cost(const Trajectory& traj, const ReferencePath& path, const SolverParams& p);

/// Stacked rows sum_i J^i dX^i + l >= 0 in canonical order: collision
/// (tau, i, j, beta, gamma), boundary (tau, i, beta), input (tau, i, kind).
class ConstraintSystem {
 public:
  struct RowRef {
    int row;
    int term;
  };

  ConstraintSystem() = default;
  ConstraintSystem(std::vector<LinearConstraintRow> rows, int num_vehicles, int horizon);

  int size() const { return static_cast<int>(rows_.size()); }
  int num_vehicles() const { return num_vehicles_; }
  int horizon() const { return horizon_; }
  const std::vector<LinearConstraintRow>& rows() const { return rows_; }
  const Eigen::VectorXd& offsets() const { return l_; }
  /// Rows carrying a block for this vehicle, ascending.
  std::span<const RowRef> vehicle_rows(int vehicle) const { return vehicle_rows_[vehicle]; }

  /// Value of vehicle's coefficient block on its row (the J^i dX^i entry).
  double term_value(const RowRef& ref, const TrajectoryVariation& dX) const;
  /// out += J^i dX^i.
  void add_product(int vehicle, const TrajectoryVariation& dX, Eigen::VectorXd& out) const;
  /// sum_i J^i dX^i + l.
  Eigen::VectorXd residual(std::span<const TrajectoryVariation> dXs) const;

  static long expected_size(int num_vehicles, int horizon);

 private:
  std::vector<LinearConstraintRow> rows_;
  Eigen::VectorXd l_;
  std::vector<std::vector<RowRef>> vehicle_rows_;
  int num_vehicles_ = 0;
  int horizon_ = 0;
};

ConstraintSystem build_constraint_system(std::span<const Trajectory> trajs, const BoundaryCloud& boundary,
                                         const SolverParams& p, int workers = 1);

}  // namespace roundabout
