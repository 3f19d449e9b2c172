#pragma once

#include <span>
#include <vector>

#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"
#include "roundabout/types.hpp"

namespace roundabout::baseline {

/// Rule-based comparison policy: pure-pursuit path tracking, proportional
/// speed control toward v_ref, and a hard brake whenever another vehicle's
/// circle is within brake_distance ahead.
struct BaselineConfig {
  double lookahead = 6.0;
  double brake_distance = 10.0;  // measured from the front circle center
  double a_brake = -6.0;
  double a_cruise = 1.0;         // gain on (v_ref - v), 1/s
  double cone_half_angle = 1.0471975511965976;  // 60 degrees

  void validate(const SolverParams& p) const;
};

/// Memoryless: inputs depend only on the current states.
std::vector<ControlInput> baseline_step(std::span<const VehicleState> states,
                                        std::span<const ReferencePath* const> paths, const BaselineConfig& cfg,
                                        const SolverParams& p);

/// Closed-loop simulation over the scenario horizon.
std::vector<Trajectory> run_baseline(const Scenario& scenario, const BaselineConfig& cfg = {});

}  // namespace roundabout::baseline
