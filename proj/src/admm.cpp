#include "roundabout/admm.hpp"

#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "roundabout/errors.hpp"

namespace roundabout::admm {

double derive_eta(double sigma, double rho, int num_vehicles) {
  return 1.0 / (2.0 * (sigma + 2.0 * rho * (num_vehicles - 1)));
}

AdmmConfig AdmmConfig::make(double sigma, double rho, int num_vehicles, double epsilon) {
  return {sigma, rho, derive_eta(sigma, rho, num_vehicles), epsilon, num_vehicles};
}

AdmmWorkerState AdmmWorkerState::cold(int n) {
  AdmmWorkerState st;
  st.p = Eigen::VectorXd::Zero(n);
  st.s = Eigen::VectorXd::Zero(n);
  st.y = Eigen::VectorXd::Zero(n);
  st.z = Eigen::VectorXd::Zero(n);
  st.r = Eigen::VectorXd::Zero(n);
  return st;
}

void AdmmWorkerState::warm_restart() {
  p.setZero();
  s.setZero();
  k = 0;
}

void dual_steps(AdmmWorkerState& state, int vehicle, std::span<const Eigen::VectorXd> ys, const AdmmConfig& cfg) {
  const Eigen::VectorXd& yi = ys[vehicle];
  const Eigen::Index n = yi.size();
  Eigen::VectorXd diff_sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pair_sum = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < static_cast<int>(ys.size()); ++j) {
    if (j == vehicle) continue;
    diff_sum += yi - ys[j];
    pair_sum += yi + ys[j];
  }
  state.p += cfg.rho * diff_sum;
  state.s += cfg.sigma * (yi - state.z);
  state.r = cfg.rho * pair_sum + cfg.sigma * state.z - state.p - state.s;
}

ProxResult prox_z(const Eigen::VectorXd& s, const Eigen::VectorXd& y, const Eigen::VectorXd& l,
                  const AdmmConfig& cfg) {
  const double n = cfg.num_vehicles;
  ProxResult out;
  out.z_star = (n * (s + cfg.sigma * y)).array().max(cfg.epsilon - l.array()).matrix();
  out.z = s / cfg.sigma + y - out.z_star / (n * cfg.sigma);
  return out;
}

std::vector<LqrSolution> inner_iteration(std::vector<AdmmWorkerState>& states, const ConstraintSystem& system,
                                         std::span<const VehicleSubproblem> subproblems, const AdmmConfig& cfg,
                                         int workers) {
  const int count = static_cast<int>(states.size());
  if (static_cast<int>(subproblems.size()) != count || system.num_vehicles() != count)
    throw std::invalid_argument("inner_iteration: vehicle count mismatch");

  std::vector<Eigen::VectorXd> snapshot(count);
  for (int i = 0; i < count; ++i) snapshot[i] = states[i].y;

  std::vector<LqrSolution> primal(count);
  detail::parallel_for(workers, count, [&](int i) {
    AdmmWorkerState& st = states[i];
    dual_steps(st, i, snapshot, cfg);
    const auto prob = assemble_subproblem(*subproblems[i].cost, system, i, st.r, cfg.eta, subproblems[i].dynamics);
    try {
      primal[i] = solve_lqr(prob);
    } catch (const NumericalError& e) {
      throw NumericalError("vehicle " + std::to_string(i) + ", inner iteration " + std::to_string(st.k) + ": " +
                               e.what());
    }
    Eigen::VectorXd y = st.r;
    system.add_product(i, primal[i].dX, y);
    y *= 2.0 * cfg.eta;
    auto prox = prox_z(st.s, y, system.offsets(), cfg);
    st.y = std::move(y);
    st.z = std::move(prox.z);
    ++st.k;
  });
  return primal;
}

}  // namespace roundabout::admm
