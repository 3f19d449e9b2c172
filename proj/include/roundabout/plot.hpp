#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "roundabout/scenario.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

struct PlotSet {
  std::string trajectories;  // overhead view with boundary cloud
  std::string inputs;        // steering and acceleration vs time, with bounds
  std::string min_distance;  // min circle distance vs time, with d_safe
};

/// Pure function of its inputs. Throws ValidationError on empty or
/// mismatched trajectories.
PlotSet render_plots(const Scenario& scenario, std::span<const Trajectory> trajs);

/// Renders everything first, then writes <dir>/<prefix>{trajectories,inputs,min_distance}.svg.
void write_plots(const PlotSet& plots, const std::filesystem::path& dir, const std::string& prefix = "");

}  // namespace roundabout
