#include "roundabout/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "roundabout/coordinator.hpp"
#include "roundabout/errors.hpp"
#include "roundabout/geometry.hpp"
#include "roundabout/kinematics.hpp"

namespace roundabout::baseline {

void BaselineConfig::validate(const SolverParams& p) const {
  if (!(brake_distance > p.d_safe)) throw ValidationError("baseline: brake_distance must exceed d_safe");
  if (!(a_brake >= p.a_min && a_brake < 0.0)) throw ValidationError("baseline: a_brake must lie in [a_min, 0)");
  if (!(lookahead > 0.0)) throw ValidationError("baseline: lookahead must be positive");
}

namespace {

bool obstacle_ahead(std::span<const VehicleState> states, std::size_t ego, const BaselineConfig& cfg,
                    const SolverParams& p) {
  const auto& x = states[ego];
  const Vec2 heading(std::cos(x.theta), std::sin(x.theta));
  const Vec2 nose = circle_centers(x, p).front;
  const double cos_cone = std::cos(cfg.cone_half_angle);
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (j == ego) continue;
    const CirclePair other = circle_centers(states[j], p);
    for (Circle c : kCircles) {
      const Vec2 rel = other[c] - nose;
      const double d = rel.norm();
      if (d > cfg.brake_distance) continue;
      if (d == 0.0 || rel.dot(heading) >= cos_cone * d) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<ControlInput> baseline_step(std::span<const VehicleState> states,
                                        std::span<const ReferencePath* const> paths, const BaselineConfig& cfg,
                                        const SolverParams& p) {
  std::vector<ControlInput> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& x = states[i];
    double a = obstacle_ahead(states, i, cfg, p) ? cfg.a_brake : cfg.a_cruise * (p.v_ref - x.v);
    a = std::clamp(a, p.a_min, p.a_max);
    a = std::max(a, -std::max(x.v, 0.0) / p.tau_s);  // stop, never reverse
    out[i] = {pure_pursuit_steering(x, *paths[i], cfg.lookahead, p), a};
  }
  return out;
}

std::vector<Trajectory> run_baseline(const Scenario& scenario, const BaselineConfig& cfg) {
  const auto& p = scenario.params;
  cfg.validate(p);
  const std::size_t n = scenario.vehicles.size();
  std::vector<const ReferencePath*> paths(n);
  std::vector<VehicleState> states(n);
  std::vector<Trajectory> trajs(n);
  for (std::size_t i = 0; i < n; ++i) {
    paths[i] = &scenario.vehicles[i].path;
    states[i] = scenario.vehicles[i].start;
    trajs[i].states.push_back(states[i]);
  }
  for (int t = 0; t < p.horizon_T; ++t) {
    const auto inputs = baseline_step(states, paths, cfg, p);
    for (std::size_t i = 0; i < n; ++i) {
      states[i] = kinematics::step(states[i], inputs[i], p);
      trajs[i].inputs.push_back(inputs[i]);
      trajs[i].states.push_back(states[i]);
    }
  }
  return trajs;
}

}  // namespace roundabout::baseline
