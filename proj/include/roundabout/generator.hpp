#pragma once

#include <cstdint>

#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"

namespace roundabout {

/// Circular single-island roundabout with radial two-way arms and
/// counter-clockwise circulation. Vehicles queue on the inbound lanes and
/// leave by a randomly chosen other arm.
struct RoundaboutLayout {
  int n_vehicles = 16;
  int entrances = 4;
  double inner_radius = 16.0;
  double outer_radius = 26.0;
  double arm_length = 70.0;     // beyond the outer circle
  double arm_half_width = 5.0;
  double lane_offset = 2.5;     // lane centerline from the arm axis
  double fillet_radius = 7.0;   // entry/exit curve radius
  double first_vehicle_gap = 8.0;  // leader's distance behind the fillet start
  double spacing = 20.0;        // rear-axle headway inside a group
  double entry_stagger = 0.0;   // extra leader gap per entrance index
  double spacing_jitter = 1.0;  // uniform +/- jitter on each headway
  std::uint64_t seed = 1;
  SolverParams params;

  /// Throws ValidationError on inconsistent geometry (e.g. inner >= outer).
  void validate() const;
  double ring_radius() const { return 0.5 * (inner_radius + outer_radius); }
};

ScenarioDocument generate_roundabout(const RoundaboutLayout& layout);

}  // namespace roundabout
