#pragma once

#include <json.hpp>

namespace roundabout {

/// Solver and vehicle parameters. Defaults are the published experiment
/// settings; cost weights are the project's own choice.
struct SolverParams {
  double wheelbase_b = 2.875;
  double tau_s = 0.1;
  int horizon_T = 75;
  double a_min = -12.0;
  double a_max = 8.0;
  double delta_min = -0.62;
  double delta_max = 0.62;
  double d_safe = 2.62;
  double d_f = 2.79;
  double d_r = -0.05;
  double v_ref = 10.0;
  double sigma = 0.2;
  double rho = 0.02;
  double epsilon = 0.3;
  int k_max = 2;
  double zeta = 1.0;
  int max_outer_iters = 100;
  double w_lat = 1.0;
  double w_vel = 0.5;
  double w_delta = 1.0;
  double w_acc = 0.1;
  double max_gap = 0.25;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  /// Conservative length used for the t=0 spacing check: circle span plus
  /// one diameter.
  double vehicle_length() const { return d_f - d_r + d_safe; }
};

void to_json(nlohmann::json& j, const SolverParams& p);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, SolverParams& p);

}  // namespace roundabout
