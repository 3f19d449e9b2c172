#include "roundabout/generator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "roundabout/errors.hpp"

namespace roundabout {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSampleStep = 0.2;

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

void append_arc(std::vector<Vec2>& out, const Vec2& center, double radius, double from, double to) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(to - from) * radius / kSampleStep)));
  for (int k = 0; k <= pieces; ++k) {
    const double a = from + (to - from) * k / pieces;
    out.push_back(center + radius * Vec2(std::cos(a), std::sin(a)));
  }
}

// Platform-independent uniform double in [0, 1).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Fillet {
  double center_x;  // along the arm axis, local frame
  double ring_angle;  // angular offset of the ring tangency point from the arm axis
};

Fillet fillet_geometry(const RoundaboutLayout& L) {
  const double lateral = L.lane_offset + L.fillet_radius;
  const double reach = L.ring_radius() + L.fillet_radius;
  const double cx = std::sqrt(reach * reach - lateral * lateral);
  return {cx, std::atan2(lateral, cx)};
}

std::vector<Vec2> vehicle_path(const RoundaboutLayout& L, int entry, int quarter_turns) {
  const double step = 2.0 * kPi / L.entrances;
  const double phi_in = entry * step;
  const double phi_out = (entry + quarter_turns) * step;
  const Fillet f = fillet_geometry(L);
  const double o = L.lane_offset;
  const double rf = L.fillet_radius;
  const double arm_end = L.outer_radius + L.arm_length;

  std::vector<Vec2> local_in;
  local_in.push_back({arm_end, o});
  local_in.push_back({f.center_x, o});
  append_arc(local_in, {f.center_x, o + rf}, rf, -kPi / 2.0, std::atan2(-(o + rf), -f.center_x));

  std::vector<Vec2> path;
  for (const auto& p : local_in) path.push_back(rotate(p, phi_in));
  std::vector<Vec2> ring;
  append_arc(ring, Vec2::Zero(), L.ring_radius(), phi_in + f.ring_angle, phi_out - f.ring_angle);
  path.insert(path.end(), ring.begin() + 1, ring.end());

  std::vector<Vec2> local_out;
  append_arc(local_out, {f.center_x, -(o + rf)}, rf, std::atan2(o + rf, -f.center_x), kPi / 2.0);
  local_out.push_back({arm_end, -o});
  for (std::size_t k = 1; k < local_out.size(); ++k) path.push_back(rotate(local_out[k], phi_out));
  return path;
}

}  // namespace

void RoundaboutLayout::validate() const {
  auto fail = [](const char* what) { throw ValidationError(std::string("invalid roundabout layout: ") + what); };
  if (n_vehicles < 1) fail("n_vehicles >= 1");
  if (entrances < 2) fail("entrances >= 2");
  if (!(inner_radius > 0.0)) fail("inner_radius > 0");
  if (!(inner_radius < outer_radius)) fail("inner_radius < outer_radius");
  if (!(arm_half_width > lane_offset && lane_offset > 0.0)) fail("0 < lane_offset < arm_half_width");
  if (!(arm_half_width < outer_radius)) fail("arm_half_width < outer_radius");
  if (!(fillet_radius > 0.0 && arm_length > 0.0 && spacing > 2.0 * spacing_jitter && spacing_jitter >= 0.0 &&
        entry_stagger >= 0.0))
    fail("positive fillet_radius, arm_length and spacing > 2 jitter, entry_stagger >= 0");
  const double half_sector = kPi / entrances;
  if (!(fillet_geometry(*this).ring_angle < half_sector)) fail("entry and exit curves overlap; reduce fillet_radius");
  if (!(std::asin(arm_half_width / outer_radius) < half_sector)) fail("arms overlap; reduce arm_half_width");
  params.validate();
}

ScenarioDocument generate_roundabout(const RoundaboutLayout& L) {
  L.validate();
  ScenarioDocument doc;
  doc.params = L.params;

  const double step = 2.0 * kPi / L.entrances;
  std::vector<Vec2> island;
  append_arc(island, Vec2::Zero(), L.inner_radius, 0.0, 2.0 * kPi);
  doc.boundary_polylines.push_back(island);
  const double gap = std::asin(L.arm_half_width / L.outer_radius);
  const double root = std::sqrt(L.outer_radius * L.outer_radius - L.arm_half_width * L.arm_half_width);
  const double arm_end = L.outer_radius + L.arm_length;
  for (int k = 0; k < L.entrances; ++k) {
    std::vector<Vec2> arc;
    append_arc(arc, Vec2::Zero(), L.outer_radius, k * step + gap, (k + 1) * step - gap);
    doc.boundary_polylines.push_back(arc);
    for (double side : {1.0, -1.0}) {
      doc.boundary_polylines.push_back({rotate({root, side * L.arm_half_width}, k * step),
                                        rotate({arm_end, side * L.arm_half_width}, k * step)});
    }
  }

  std::mt19937_64 rng(L.seed);
  const Fillet f = fillet_geometry(L);
  std::vector<double> next_offset(L.entrances);
  for (int e = 0; e < L.entrances; ++e) next_offset[e] = f.center_x + L.first_vehicle_gap + e * L.entry_stagger;
  for (int v = 0; v < L.n_vehicles; ++v) {
    const int entry = v % L.entrances;
    const int turns = 1 + static_cast<int>(uniform01(rng) * (L.entrances - 1));
    const double jitter = (2.0 * uniform01(rng) - 1.0) * L.spacing_jitter;
    const double along = next_offset[entry];
    next_offset[entry] += L.spacing + jitter;

    const double phi = entry * step;
    const Vec2 pos = rotate({along, L.lane_offset}, phi);
    ScenarioDocument::Vehicle veh;
    veh.start = {pos.x(), pos.y(), std::atan2(-std::sin(phi), -std::cos(phi)), L.params.v_ref};
    veh.reference_polyline = vehicle_path(L, entry, turns);
    veh.group = entry + 1;
    doc.vehicles.push_back(std::move(veh));
  }
  return doc;
}

}  // namespace roundabout
