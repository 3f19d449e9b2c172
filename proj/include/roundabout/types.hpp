#pragma once

#include <Eigen/Core>
#include <vector>

namespace roundabout {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat24 = Eigen::Matrix<double, 2, 4>;

inline constexpr int kStateDim = 4;
inline constexpr int kInputDim = 2;

/// Rear-axle midpoint, heading and speed.
struct VehicleState {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double v = 0.0;

  Vec2 position() const { return {px, py}; }
  Vec4 vec() const { return {px, py, theta, v}; }
  static VehicleState from(const Vec4& x) { return {x[0], x[1], x[2], x[3]}; }

  bool operator==(const VehicleState&) const = default;
};

/// Steering angle and longitudinal acceleration.
struct ControlInput {
  double delta = 0.0;
  double a = 0.0;

  Vec2 vec() const { return {delta, a}; }
  static ControlInput from(const Vec2& u) { return {u[0], u[1]}; }

  bool operator==(const ControlInput&) const = default;
};

/// T+1 states and T inputs; states[t+1] = step(states[t], inputs[t]).
struct Trajectory {
  std::vector<VehicleState> states;
  std::vector<ControlInput> inputs;

  int horizon() const { return static_cast<int>(inputs.size()); }

  bool operator==(const Trajectory&) const = default;
};

/// Variations about a nominal trajectory: dx has T+1 entries, du has T.
struct TrajectoryVariation {
  std::vector<Vec4> dx;
  std::vector<Vec2> du;

  static TrajectoryVariation zero(int horizon) {
    return {std::vector<Vec4>(horizon + 1, Vec4::Zero()), std::vector<Vec2>(horizon, Vec2::Zero())};
  }
  int horizon() const { return static_cast<int>(du.size()); }
};

}  // namespace roundabout
