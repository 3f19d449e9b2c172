#include "roundabout/records.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "roundabout/errors.hpp"
#include "roundabout/geometry.hpp"

namespace roundabout {

std::vector<TrajectoryRecord> to_records(std::span<const Trajectory> trajs, const SolverParams& p) {
  std::vector<TrajectoryRecord> out;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto& tr = trajs[i];
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      const auto& x = tr.states[t];
      const ControlInput u = t < tr.inputs.size() ? tr.inputs[t] : ControlInput{};
      out.push_back({static_cast<int>(i), static_cast<int>(t), static_cast<double>(t) * p.tau_s, x.px, x.py,
                     x.theta, x.v, u.delta, u.a});
    }
  }
  return out;
}

std::vector<Trajectory> to_trajectories(std::span<const TrajectoryRecord> records) {
  std::vector<Trajectory> out;
  std::vector<ControlInput> pending;
  for (const auto& r : records) {
    if (r.vehicle_id == static_cast<int>(out.size())) {
      if (r.tau != 0) throw ParseError("vehicle " + std::to_string(r.vehicle_id) + " does not start at tau=0");
      out.emplace_back();
      pending.emplace_back();
    } else if (r.vehicle_id != static_cast<int>(out.size()) - 1) {
      throw ParseError("records out of order at vehicle " + std::to_string(r.vehicle_id));
    }
    auto& tr = out.back();
    if (r.tau != static_cast<int>(tr.states.size()))
      throw ParseError("vehicle " + std::to_string(r.vehicle_id) + " has a gap at tau=" + std::to_string(r.tau));
    if (!tr.states.empty()) tr.inputs.push_back(pending.back());
    tr.states.push_back({r.px, r.py, r.theta, r.v});
    pending.back() = {r.delta, r.a};
  }
  if (out.empty()) throw ParseError("no trajectory records");
  const std::size_t steps = out.front().states.size();
  for (const auto& tr : out)
    if (tr.states.size() != steps) throw ParseError("vehicles have different horizons");
  if (steps < 2) throw ParseError("trajectories need at least two timestamps");
  return out;
}

namespace {

void append_number(std::string& line, double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.9g", value);
  line.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

void write_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const auto& r : records) {
    line = std::to_string(r.vehicle_id) + ',' + std::to_string(r.tau);
    for (double v : {r.time, r.px, r.py, r.theta, r.v, r.delta, r.a}) {
      line += ',';
      append_number(line, v);
    }
    out << line << '\n';
  }
}

std::string format_csv(std::span<const TrajectoryRecord> records) {
  std::ostringstream ss;
  write_csv(ss, records);
  return ss.str();
}

namespace {

template <typename T>
T parse_field(std::string_view text, int line_no) {
  T value{};
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("CSV line " + std::to_string(line_no) + ": bad field '" + std::string(text) + "'");
  return value;
}

}  // namespace

std::vector<TrajectoryRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("CSV header mismatch");
  std::vector<TrajectoryRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      fields.push_back(rest.substr(0, pos));
    fields.push_back(rest);
    if (fields.size() != 9) throw ParseError("CSV line " + std::to_string(line_no) + ": expected 9 fields");
    TrajectoryRecord r;
    r.vehicle_id = parse_field<int>(fields[0], line_no);
    r.tau = parse_field<int>(fields[1], line_no);
    double* dst[] = {&r.time, &r.px, &r.py, &r.theta, &r.v, &r.delta, &r.a};
    for (int k = 0; k < 7; ++k) *dst[k] = parse_field<double>(fields[k + 2], line_no);
    out.push_back(r);
  }
  return out;
}

TrajectoryMetrics compute_metrics(std::span<const Trajectory> trajs, const Scenario& scenario) {
  const auto& p = scenario.params;
  if (trajs.size() != scenario.vehicles.size())
    throw ValidationError("trajectory count " + std::to_string(trajs.size()) + " does not match scenario (" +
                          std::to_string(scenario.vehicles.size()) + " vehicles)");
  TrajectoryMetrics m;
  const int steps = static_cast<int>(trajs.front().states.size());
  m.min_distance = std::numeric_limits<double>::infinity();
  for (int t = 0; t < steps; ++t) {
    const double d = min_pairwise_distance_at(trajs, t, p);
    m.min_distance_per_tau.push_back(d);
    m.min_distance = std::min(m.min_distance, d);
  }
  std::vector<int> groups;
  for (const auto& v : scenario.vehicles) groups.push_back(v.group);
  m.group_average_velocity = group_average_velocities(trajs, groups);
  m.min_a = std::numeric_limits<double>::infinity();
  m.max_a = -std::numeric_limits<double>::infinity();
  for (const auto& tr : trajs) {
    for (const auto& u : tr.inputs) {
      m.max_abs_delta = std::max(m.max_abs_delta, std::abs(u.delta));
      m.min_a = std::min(m.min_a, u.a);
      m.max_a = std::max(m.max_a, u.a);
      if (u.a < p.a_min || u.a > p.a_max || u.delta < p.delta_min || u.delta > p.delta_max)
        m.inputs_within_bounds = false;
    }
  }
  return m;
}

nlohmann::json metrics_json(const TrajectoryMetrics& m) {
  nlohmann::json j;
  j["min_distance"] = m.min_distance;
  j["min_distance_per_tau"] = m.min_distance_per_tau;
  auto groups = nlohmann::json::object();
  for (const auto& [g, v] : m.group_average_velocity) groups[std::to_string(g)] = v;
  j["group_average_velocity"] = groups;
  j["inputs_within_bounds"] = m.inputs_within_bounds;
  j["max_abs_delta"] = m.max_abs_delta;
  j["min_a"] = m.min_a;
  j["max_a"] = m.max_a;
  return j;
}

nlohmann::json report_json(const std::string& command, const SolveReport* report, const TrajectoryMetrics& metrics,
                           int n_vehicles, int horizon, int workers, double wall_time) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["n_vehicles"] = n_vehicles;
  j["horizon"] = horizon;
  j["workers"] = workers;
  if (report) {
    j["status"] = report->status == SolveStatus::converged ? "converged" : "max_iterations";
    j["outer_iterations"] = report->outer_iterations;
    j["final_cost"] = report->final_cost;
    j["cost_trace"] = report->cost_trace;
  } else {
    j["status"] = "simulated";
  }
  j["metrics"] = metrics_json(metrics);
  j["min_distance"] = metrics.min_distance;
  j["wall_time"] = wall_time;
  return j;
}

}  // namespace roundabout
