#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "roundabout/kdtree.hpp"
#include "roundabout/params.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

/// Densely sampled road-boundary points (raw, not shifted inward).
struct BoundaryCloud {
  std::vector<Vec2> points;
  KdTree2 index;

  static BoundaryCloud from_polylines(const std::vector<std::vector<Vec2>>& polylines, double max_gap);
  const Vec2& nearest(const Vec2& q) const { return points[index.nearest(q)]; }
};

/// Waypoints of a navigation path with unit tangents and cumulative arc length.
struct ReferencePath {
  std::vector<Vec2> waypoints;
  std::vector<Vec2> tangents;
  std::vector<double> arc_length;
  KdTree2 index;

  /// Densifies to max_gap spacing; throws ValidationError when fewer than two
  /// distinct points remain.
  static ReferencePath from_polyline(std::span<const Vec2> polyline, double max_gap);
  std::size_t nearest(const Vec2& q) const { return index.nearest(q); }
  std::size_t size() const { return waypoints.size(); }
};

struct VehicleSpec {
  VehicleState start;
  ReferencePath path;
  int group = 1;
};

struct Scenario {
  SolverParams params;
  BoundaryCloud boundary;
  std::vector<VehicleSpec> vehicles;

  int num_vehicles() const { return static_cast<int>(vehicles.size()); }
  /// Throws ValidationError describing the first violated invariant.
  void validate() const;
};

/// Inserts samples so consecutive points are at most max_gap apart. Original
/// vertices are kept; zero-length segments are dropped.
std::vector<Vec2> densify(std::span<const Vec2> polyline, double max_gap);

/// Raw file contents, before densification.
struct ScenarioDocument {
  SolverParams params;
  std::vector<std::vector<Vec2>> boundary_polylines;
  struct Vehicle {
    VehicleState start;
    std::vector<Vec2> reference_polyline;
    int group = 1;
  };
  std::vector<Vehicle> vehicles;

  nlohmann::json to_json() const;
  static ScenarioDocument from_json(const nlohmann::json& j);
};

Scenario build_scenario(const ScenarioDocument& doc);
Scenario parse_scenario(const std::string& text);
/// Throws IoError, ParseError or ValidationError.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace roundabout
