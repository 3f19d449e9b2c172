#pragma once

#include <array>
#include <span>
#include <vector>

#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

enum class Circle : int { front = 0, rear = 1 };
inline constexpr std::array<Circle, 2> kCircles{Circle::front, Circle::rear};

inline double circle_bias(Circle c, const SolverParams& p) { return c == Circle::front ? p.d_f : p.d_r; }

struct CirclePair {
  Vec2 front;
  Vec2 rear;
  const Vec2& operator[](Circle c) const { return c == Circle::front ? front : rear; }
};

CirclePair circle_centers(const VehicleState& x, const SolverParams& p);

/// d(circle center)/d(state) for a circle d_beta ahead of the rear axle.
Mat24 position_jacobian(double theta, double d_beta);

enum class RowKind : int { collision = 0, boundary = 1, input_upper = 2, input_lower = 3 };
enum class InputChannel : int { accel = 0, steer = 1 };

/// One vehicle's coefficient block in a row: a 1x4 state block at the row's
/// timestamp, or a 1x2 input block (delta, a) stored in the first two slots.
struct RowTerm {
  int vehicle = -1;
  std::array<double, 4> coeff{};
};

struct RowMeta {
  int tau = 0;
  Circle circle_a = Circle::front;  // beta, on terms[0].vehicle
  Circle circle_b = Circle::front;  // gamma, on terms[1].vehicle
  InputChannel channel = InputChannel::accel;
  Vec2 normal = Vec2::Zero();
};

/// sum_k terms[k].coeff . dvar(terms[k].vehicle) + offset >= 0.
struct LinearConstraintRow {
  RowKind kind = RowKind::collision;
  std::array<RowTerm, 2> terms;
  int term_count = 0;
  double offset = 0.0;
  RowMeta meta;

  bool is_input_row() const { return kind == RowKind::input_upper || kind == RowKind::input_lower; }
  std::span<const RowTerm> active_terms() const { return {terms.data(), static_cast<std::size_t>(term_count)}; }
};

/// Rows for one timestamp, ordered by (i, j, beta, gamma) with i < j.
void append_collision_rows_at(std::span<const Trajectory> trajs, int tau, const SolverParams& p,
                              std::vector<LinearConstraintRow>& out);

/// All collision rows, ordered by (tau, i, j, beta, gamma). Throws GeometryError
/// when two circle centers coincide.
std::vector<LinearConstraintRow> collision_rows(std::span<const Trajectory> trajs, const SolverParams& p);

/// Boundary rows for one vehicle, ordered by (tau, beta). Throws GeometryError
/// when a circle center sits on a boundary sample.
std::vector<LinearConstraintRow> boundary_rows(const Trajectory& traj, int vehicle, const BoundaryCloud& boundary,
                                               const SolverParams& p);

/// Input rows for one vehicle, ordered by (tau, kind): accel lower/upper, steer lower/upper.
std::vector<LinearConstraintRow> input_rows(const Trajectory& traj, int vehicle, const SolverParams& p);

/// Smallest center distance between circles of different vehicles at one timestamp.
double min_pairwise_distance_at(std::span<const Trajectory> trajs, int tau, const SolverParams& p);
/// Minimum over all timestamps.
double min_pairwise_distance(std::span<const Trajectory> trajs, const SolverParams& p);

}  // namespace roundabout
