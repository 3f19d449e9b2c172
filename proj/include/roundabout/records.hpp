#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "roundabout/coordinator.hpp"
#include "roundabout/params.hpp"
#include "roundabout/scenario.hpp"
#include "roundabout/types.hpp"

namespace roundabout {

/// One CSV line. The terminal timestamp has no input; its delta and a are 0.
struct TrajectoryRecord {
  int vehicle_id = 0;
  int tau = 0;
  double time = 0.0;
  double px = 0.0, py = 0.0, theta = 0.0, v = 0.0;
  double delta = 0.0, a = 0.0;

  bool operator==(const TrajectoryRecord&) const = default;
};

inline constexpr const char* kCsvHeader = "vehicle_id,tau,time,px,py,theta,v,delta,a";
inline constexpr int kReportSchemaVersion = 1;

std::vector<TrajectoryRecord> to_records(std::span<const Trajectory> trajs, const SolverParams& p);
/// Throws ParseError unless records form complete, ordered per-vehicle runs.
std::vector<Trajectory> to_trajectories(std::span<const TrajectoryRecord> records);

/// Fixed column order, 9 significant digits.
void write_csv(std::ostream& out, std::span<const TrajectoryRecord> records);
std::string format_csv(std::span<const TrajectoryRecord> records);
std::vector<TrajectoryRecord> read_csv(std::istream& in);

/// Quantities reported for a set of committed trajectories.
struct TrajectoryMetrics {
  double min_distance = 0.0;
  std::vector<double> min_distance_per_tau;
  std::map<int, double> group_average_velocity;
  bool inputs_within_bounds = true;
  double max_abs_delta = 0.0;
  double min_a = 0.0;
  double max_a = 0.0;
};

TrajectoryMetrics compute_metrics(std::span<const Trajectory> trajs, const Scenario& scenario);

nlohmann::json metrics_json(const TrajectoryMetrics& m);

/// Report document for `solve` / `baseline`. Metrics are computed from the
/// trajectories as written to CSV so the file pair is self-consistent.
nlohmann::json report_json(const std::string& command, const SolveReport* report, const TrajectoryMetrics& metrics,
                           int n_vehicles, int horizon, int workers, double wall_time);

}  // namespace roundabout
