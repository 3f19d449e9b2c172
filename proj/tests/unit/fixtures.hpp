#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "roundabout/generator.hpp"
#include "roundabout/scenario.hpp"

namespace roundabout::testing {

/// Straight road along +x bounded by y = +/- half_width; each vehicle's
/// path is the horizontal line through its start.
inline ScenarioDocument straight_road(const std::vector<VehicleState>& starts, int horizon = 20,
                                      double half_width = 6.0) {
  ScenarioDocument doc;
  doc.params.horizon_T = horizon;
  doc.boundary_polylines = {{{-50.0, -half_width}, {250.0, -half_width}}, {{-50.0, half_width}, {250.0, half_width}}};
  for (const auto& x : starts) {
    ScenarioDocument::Vehicle v;
    v.start = x;
    v.reference_polyline = {{-40.0, x.py}, {240.0, x.py}};
    v.group = 1;
    doc.vehicles.push_back(v);
  }
  return doc;
}

/// Generated roundabout restricted to the listed vehicles of the default layout.
inline ScenarioDocument roundabout_subset(const std::vector<int>& keep, int horizon = 75) {
  RoundaboutLayout layout;
  layout.params.horizon_T = horizon;
  ScenarioDocument full = generate_roundabout(layout);
  ScenarioDocument doc = full;
  doc.vehicles.clear();
  for (int k : keep) doc.vehicles.push_back(full.vehicles[k]);
  return doc;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("roundabout_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace roundabout::testing
