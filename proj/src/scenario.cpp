#include "roundabout/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "roundabout/errors.hpp"

namespace roundabout {

std::vector<Vec2> densify(std::span<const Vec2> polyline, double max_gap) {
  std::vector<Vec2> out;
  if (polyline.empty()) return out;
  out.push_back(polyline.front());
  for (std::size_t k = 1; k < polyline.size(); ++k) {
    const Vec2 a = out.back();
    const Vec2 b = polyline[k];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const int pieces = static_cast<int>(std::ceil(len / max_gap));
    for (int s = 1; s < pieces; ++s) out.push_back(a + (b - a) * (static_cast<double>(s) / pieces));
    out.push_back(b);
  }
  return out;
}

BoundaryCloud BoundaryCloud::from_polylines(const std::vector<std::vector<Vec2>>& polylines,
                                            double max_gap) {
  BoundaryCloud cloud;
  for (const auto& line : polylines) {
    auto dense = densify(line, max_gap);
    cloud.points.insert(cloud.points.end(), dense.begin(), dense.end());
  }
  if (cloud.points.empty()) throw ValidationError("boundary point cloud is empty");
  cloud.index = KdTree2(cloud.points);
  return cloud;
}

ReferencePath ReferencePath::from_polyline(std::span<const Vec2> polyline, double max_gap) {
  ReferencePath path;
  path.waypoints = densify(polyline, max_gap);
  const std::size_t n = path.waypoints.size();
  if (n < 2) throw ValidationError("reference path needs at least two distinct waypoints");
  path.tangents.resize(n);
  path.arc_length.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& prev = path.waypoints[k == 0 ? 0 : k - 1];
    const Vec2& next = path.waypoints[k + 1 == n ? n - 1 : k + 1];
    Vec2 t = next - prev;
    if (t.norm() == 0.0) throw ValidationError("reference path folds back on itself");
    path.tangents[k] = t.normalized();
    if (k > 0) path.arc_length[k] = path.arc_length[k - 1] + (path.waypoints[k] - path.waypoints[k - 1]).norm();
  }
  path.index = KdTree2(path.waypoints);
  return path;
}

void Scenario::validate() const {
  params.validate();
  if (vehicles.empty()) throw ValidationError("scenario has no vehicles");
  const double clearance = params.d_safe / 2.0;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto& s = vehicles[i].start;
    if (!std::isfinite(s.px) || !std::isfinite(s.py) || !std::isfinite(s.theta) || !std::isfinite(s.v))
      throw ValidationError("vehicle " + std::to_string(i) + " has a non-finite start state");
    if (vehicles[i].group < 1)
      throw ValidationError("vehicle " + std::to_string(i) + " has group < 1");
    const double d = (boundary.nearest(s.position()) - s.position()).norm();
    if (!(d > clearance)) {
      std::ostringstream msg;
      msg << "vehicle " << i << " starts " << d << " m from the road boundary (needs > " << clearance << ")";
      throw ValidationError(msg.str());
    }
  }
  const double min_gap = params.d_safe + params.vehicle_length();
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
      const double d = (vehicles[i].start.position() - vehicles[j].start.position()).norm();
      if (!(d > min_gap)) {
        std::ostringstream msg;
        msg << "vehicles " << i << " and " << j << " initially closer than d_safe + vehicle length (" << d
            << " m <= " << min_gap << " m)";
        throw ValidationError(msg.str());
      }
    }
  }
}

namespace {

Vec2 parse_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected [x, y] point, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> parse_polyline(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("expected an array of points");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(parse_point(p));
  return out;
}

nlohmann::json polyline_json(const std::vector<Vec2>& line) {
  auto arr = nlohmann::json::array();
  for (const auto& p : line) arr.push_back({p.x(), p.y()});
  return arr;
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

nlohmann::json ScenarioDocument::to_json() const {
  nlohmann::json j;
  j["params"] = params;
  auto lines = nlohmann::json::array();
  for (const auto& l : boundary_polylines) lines.push_back(polyline_json(l));
  j["boundary_polylines"] = std::move(lines);
  auto vs = nlohmann::json::array();
  for (const auto& v : vehicles) {
    vs.push_back({{"start", {v.start.px, v.start.py, v.start.theta, v.start.v}},
                  {"reference_polyline", polyline_json(v.reference_polyline)},
                  {"group", v.group}});
  }
  j["vehicles"] = std::move(vs);
  return j;
}

ScenarioDocument ScenarioDocument::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");
  ScenarioDocument doc;
  if (auto it = j.find("params"); it != j.end()) doc.params = it->get<SolverParams>();
  const auto& lines = field(j, "boundary_polylines");
  if (!lines.is_array()) throw ParseError("boundary_polylines must be an array");
  for (const auto& l : lines) doc.boundary_polylines.push_back(parse_polyline(l));
  const auto& vs = field(j, "vehicles");
  if (!vs.is_array()) throw ParseError("vehicles must be an array");
  for (const auto& v : vs) {
    Vehicle out;
    const auto& start = field(v, "start");
    if (!start.is_array() || start.size() != 4) throw ParseError("vehicle start must be [x, y, theta, v]");
    for (const auto& e : start)
      if (!e.is_number()) throw ParseError("vehicle start entries must be numbers");
    out.start = {start[0].get<double>(), start[1].get<double>(), start[2].get<double>(), start[3].get<double>()};
    out.reference_polyline = parse_polyline(field(v, "reference_polyline"));
    const auto& g = field(v, "group");
    if (!g.is_number_integer()) throw ParseError("vehicle group must be an integer");
    out.group = g.get<int>();
    doc.vehicles.push_back(std::move(out));
  }
  return doc;
}

Scenario build_scenario(const ScenarioDocument& doc) {
  doc.params.validate();
  Scenario sc;
  sc.params = doc.params;
  sc.boundary = BoundaryCloud::from_polylines(doc.boundary_polylines, doc.params.max_gap);
  for (const auto& v : doc.vehicles) {
    sc.vehicles.push_back({v.start, ReferencePath::from_polyline(v.reference_polyline, doc.params.max_gap), v.group});
  }
  sc.validate();
  return sc;
}

Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario parse error: ") + e.what());
  }
  ScenarioDocument doc;
  try {
    doc = ScenarioDocument::from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario schema error: ") + e.what());
  }
  return build_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace roundabout
