#include "roundabout/params.hpp"

#include <string>

#include "roundabout/errors.hpp"

namespace roundabout {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(std::string("invalid parameters: ") + what);
}

}  // namespace

void SolverParams::validate() const {
  require(wheelbase_b > 0.0, "wheelbase_b > 0");
  require(tau_s > 0.0, "tau_s > 0");
  require(horizon_T >= 1, "horizon_T >= 1");
  require(a_min < a_max, "a_min < a_max");
  require(delta_min < delta_max, "delta_min < delta_max");
  require(d_safe > 0.0, "d_safe > 0");
  require(sigma > 0.0, "sigma > 0");
  require(rho > 0.0, "rho > 0");
  require(epsilon >= 0.0, "epsilon >= 0");
  require(zeta > 0.0, "zeta > 0");
  require(k_max >= 1, "k_max >= 1");
  require(max_outer_iters >= 1, "max_outer_iters >= 1");
  require(w_lat > 0.0 && w_vel > 0.0 && w_delta > 0.0 && w_acc > 0.0, "cost weights > 0");
  require(max_gap > 0.0, "max_gap > 0");
}

#define ROUNDABOUT_PARAM_FIELDS(X)                                                              \
  X(wheelbase_b) X(tau_s) X(horizon_T) X(a_min) X(a_max) X(delta_min) X(delta_max) X(d_safe) \
  X(d_f) X(d_r) X(v_ref) X(sigma) X(rho) X(epsilon) X(k_max) X(zeta) X(max_outer_iters)      \
  X(w_lat) X(w_vel) X(w_delta) X(w_acc) X(max_gap)

void to_json(nlohmann::json& j, const SolverParams& p) {
  j = nlohmann::json::object();
#define X(name) j[#name] = p.name;
  ROUNDABOUT_PARAM_FIELDS(X)
#undef X
}

void from_json(const nlohmann::json& j, SolverParams& p) {
  if (!j.is_object()) throw ParseError("params must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
#define X(name)                                                                     \
  if (key == #name) {                                                               \
    known = true;                                                                   \
    if (!value.is_number()) throw ParseError("params." + key + " must be a number"); \
    p.name = value.get<decltype(p.name)>();                                         \
  }
    ROUNDABOUT_PARAM_FIELDS(X)
#undef X
    if (!known) throw ParseError("unknown parameter '" + key + "'");
  }
}

}  // namespace roundabout
