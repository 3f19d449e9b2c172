#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "roundabout/errors.hpp"

namespace roundabout::oracle {

TrajectoryVariation solve_dense_lqr(const AffineLqrProblem& prob) {
  const int T = prob.horizon();
  const int nu = 2 * T;
  const int nv = nu + 4 * T;
  const int ne = 4 * T;
  auto u_at = [](int t) { return 2 * t; };
  auto x_at = [nu](int t) { return nu + 4 * (t - 1); };  // t = 1..T

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv + ne, nv + ne);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + ne);
  for (int t = 0; t < T; ++t) {
    K.block(u_at(t), u_at(t), 2, 2) = 2.0 * prob.G[t];
    rhs.segment(u_at(t), 2) = -prob.g[t];
  }
  for (int t = 1; t <= T; ++t) {
    K.block(x_at(t), x_at(t), 4, 4) = 2.0 * prob.H[t];
    rhs.segment(x_at(t), 4) = -prob.h[t];
  }
  for (int t = 0; t < T; ++t) {
    const int row = nv + 4 * t;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, nv);
    C.block(0, x_at(t + 1), 4, 4) = Eigen::Matrix4d::Identity();
    C.block(0, u_at(t), 4, 2) = -prob.B[t];
    if (t > 0) C.block(0, x_at(t), 4, 4) = -prob.A[t];
    K.block(row, 0, 4, nv) = C;
    K.block(0, row, nv, 4) = C.transpose();
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (lu.rank() < K.rows()) throw NumericalError("dense KKT matrix is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);

  TrajectoryVariation dX = TrajectoryVariation::zero(T);
  for (int t = 0; t < T; ++t) dX.du[t] = sol.segment<2>(u_at(t));
  for (int t = 1; t <= T; ++t) dX.dx[t] = sol.segment<4>(x_at(t));
  return dX;
}

AffineLqrProblem random_lqr_problem(std::mt19937& rng, int horizon) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_matrix = [&](int rows, int cols) {
    Eigen::MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) M(i, j) = gauss(rng);
    return M;
  };
  AffineLqrProblem prob;
  for (int t = 0; t <= horizon; ++t) {
    const Eigen::MatrixXd M = random_matrix(3, 4);
    prob.H.push_back(M.transpose() * M);
    prob.h.push_back(random_matrix(4, 1));
  }
  for (int t = 0; t < horizon; ++t) {
    const Eigen::MatrixXd M = random_matrix(2, 2);
    prob.G.push_back(M.transpose() * M + 0.1 * Mat2::Identity());
    prob.g.push_back(random_matrix(2, 1));
    prob.A.push_back(Mat4::Identity() + 0.2 * random_matrix(4, 4));
    prob.B.push_back(random_matrix(4, 2));
  }
  return prob;
}

std::vector<TrajectoryVariation> DenseQp::unpack(const Eigen::VectorXd& u) const {
  std::vector<TrajectoryVariation> out;
  const int nu = 2 * horizon;
  for (int i = 0; i < num_vehicles(); ++i) {
    const Eigen::VectorXd ui = u.segment(i * nu, nu);
    const Eigen::VectorXd xi = state_maps[i] * ui;
    TrajectoryVariation dX = TrajectoryVariation::zero(horizon);
    for (int t = 0; t < horizon; ++t) dX.du[t] = ui.segment<2>(2 * t);
    for (int t = 0; t <= horizon; ++t) dX.dx[t] = xi.segment<4>(4 * t);
    out.push_back(std::move(dX));
  }
  return out;
}

DenseQp condense(std::span<const AffineLqrProblem> objectives, const ConstraintSystem& system, double margin) {
  const int N = static_cast<int>(objectives.size());
  const int T = objectives.front().horizon();
  const int nu = 2 * T;
  DenseQp qp;
  qp.horizon = T;
  qp.P = Eigen::MatrixXd::Zero(N * nu, N * nu);
  qp.c = Eigen::VectorXd::Zero(N * nu);

  for (int i = 0; i < N; ++i) {
    const auto& prob = objectives[i];
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * (T + 1), nu);
    for (int t = 0; t < T; ++t) {
      M.block(4 * (t + 1), 0, 4, nu) = prob.A[t] * M.block(4 * t, 0, 4, nu);
      M.block(4 * (t + 1), 2 * t, 4, 2) += prob.B[t];
    }
    Eigen::MatrixXd Hs = Eigen::MatrixXd::Zero(4 * (T + 1), 4 * (T + 1));
    Eigen::VectorXd hs(4 * (T + 1));
    for (int t = 0; t <= T; ++t) {
      Hs.block(4 * t, 4 * t, 4, 4) = prob.H[t];
      hs.segment<4>(4 * t) = prob.h[t];
    }
    Eigen::MatrixXd Gs = Eigen::MatrixXd::Zero(nu, nu);
    Eigen::VectorXd gs(nu);
    for (int t = 0; t < T; ++t) {
      Gs.block(2 * t, 2 * t, 2, 2) = prob.G[t];
      gs.segment<2>(2 * t) = prob.g[t];
    }
    qp.P.block(i * nu, i * nu, nu, nu) = 2.0 * (M.transpose() * Hs * M + Gs);
    qp.c.segment(i * nu, nu) = M.transpose() * hs + gs;
    qp.state_maps.push_back(std::move(M));
  }
  qp.P = 0.5 * (qp.P + qp.P.transpose()).eval();

  const int m = system.size();
  qp.F = Eigen::MatrixXd::Zero(m, N * nu);
  qp.f = system.offsets().array() - margin;
  for (int k = 0; k < m; ++k) {
    const auto& row = system.rows()[k];
    for (const auto& term : row.active_terms()) {
      const int tau = row.meta.tau;
      auto dst = qp.F.block(k, term.vehicle * nu, 1, nu);
      if (row.is_input_row()) {
        dst(0, 2 * tau) += term.coeff[0];
        dst(0, 2 * tau + 1) += term.coeff[1];
      } else {
        const Eigen::RowVector4d c(term.coeff[0], term.coeff[1], term.coeff[2], term.coeff[3]);
        dst += c * qp.state_maps[term.vehicle].block(4 * tau, 0, 4, nu);
      }
    }
  }
  return qp;
}

namespace {

double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (dv[k] < 0.0) alpha = std::min(alpha, -v[k] / dv[k]);
  return alpha;
}

}  // namespace

IpmResult solve_ipm(const DenseQp& qp, double tol, int max_iter) {
  const Eigen::Index m = qp.F.rows();
  IpmResult res;
  res.u = qp.P.llt().solve(-qp.c);
  res.slack = (qp.F * res.u + qp.f).cwiseMax(1.0);
  res.multipliers = Eigen::VectorXd::Ones(m);
  const double scale = 1.0 + std::max(qp.c.lpNorm<Eigen::Infinity>(), qp.f.lpNorm<Eigen::Infinity>());

  Eigen::VectorXd& u = res.u;
  Eigen::VectorXd& w = res.slack;
  Eigen::VectorXd& lam = res.multipliers;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it;
    const Eigen::VectorXd rd = qp.P * u + qp.c - qp.F.transpose() * lam;
    const Eigen::VectorXd rp = qp.F * u + qp.f - w;
    const double mu = w.dot(lam) / m;
    res.gap = w.dot(lam);
    res.stationarity = rd.lpNorm<Eigen::Infinity>();
    res.primal_infeasibility = rp.lpNorm<Eigen::Infinity>();
    if (res.stationarity <= tol * scale && res.primal_infeasibility <= tol * scale && res.gap <= tol) {
      res.status = IpmStatus::optimal;
      return res;
    }
    if (lam.lpNorm<Eigen::Infinity>() > 1e14) {
      res.status = IpmStatus::infeasible;
      return res;
    }

    const Eigen::VectorXd d = lam.cwiseQuotient(w);
    const Eigen::MatrixXd Kn = qp.P + qp.F.transpose() * d.asDiagonal() * qp.F;
    const Eigen::LLT<Eigen::MatrixXd> llt(Kn);
    if (llt.info() != Eigen::Success) throw NumericalError("IPM normal matrix not positive definite");

    auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& du, Eigen::VectorXd& dw, Eigen::VectorXd& dl) {
      const Eigen::VectorXd t = (rc + lam.cwiseProduct(rp)).cwiseQuotient(w);
      du = llt.solve(-rd - qp.F.transpose() * t);
      dw = qp.F * du + rp;
      dl = -(rc + lam.cwiseProduct(dw)).cwiseQuotient(w);
    };

    Eigen::VectorXd du, dw, dl;
    const Eigen::VectorXd rc_aff = w.cwiseProduct(lam);
    direction(rc_aff, du, dw, dl);
    const double a_aff = std::min(max_step(w, dw), max_step(lam, dl));
    const double mu_aff = (w + a_aff * dw).dot(lam + a_aff * dl) / m;
    const double centering = std::pow(mu_aff / mu, 3);

    const Eigen::VectorXd rc = rc_aff + dw.cwiseProduct(dl) - Eigen::VectorXd::Constant(m, centering * mu);
    direction(rc, du, dw, dl);
    const double alpha = std::min(1.0, 0.995 * std::min(max_step(w, dw), max_step(lam, dl)));
    u += alpha * du;
    w += alpha * dw;
    lam += alpha * dl;
  }
  return res;
}

AffineLqrProblem tracking_problem(const TrackingCost& cost, std::span<const kinematics::LinearizedDynamics> dynamics) {
  const int T = static_cast<int>(cost.r.size());
  AffineLqrProblem prob;
  prob.H = cost.Q;
  prob.h = cost.q;
  prob.G.assign(T, cost.R);
  prob.g = cost.r;
  for (int t = 0; t < T; ++t) {
    prob.A.push_back(dynamics[t].A);
    prob.B.push_back(dynamics[t].B);
  }
  return prob;
}

SubproblemSolution solve_subproblem_ipm(const ConstraintSystem& system, std::span<const TrackingCost> costs,
                                        std::span<const std::vector<kinematics::LinearizedDynamics>> dynamics,
                                        double margin) {
  std::vector<AffineLqrProblem> objectives;
  for (std::size_t i = 0; i < costs.size(); ++i) objectives.push_back(tracking_problem(costs[i], dynamics[i]));
  const DenseQp qp = condense(objectives, system, margin);
  SubproblemSolution out;
  out.ipm = solve_ipm(qp);
  out.dX = qp.unpack(out.ipm.u);
  return out;
}

namespace {

double pair_distance_at(const Trajectory& a, const Trajectory& b, int tau, const SolverParams& p) {
  const std::vector<Trajectory> pair{a, b};
  return min_pairwise_distance_at(pair, tau, p);
}

}  // namespace

Instance make_instance(unsigned seed, int num_vehicles, int horizon, double max_deficit) {
  std::mt19937 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Instance inst;
  inst.params.horizon_T = horizon;
  const SolverParams& p = inst.params;
  const double lane_gap = 3.5;
  inst.boundary = BoundaryCloud::from_polylines(
      {{{-60.0, -2.2}, {120.0, -2.2}}, {{-60.0, lane_gap + 2.2}, {120.0, lane_gap + 2.2}}}, p.max_gap);

  auto random_inputs = [&] {
    std::vector<ControlInput> inputs(horizon);
    for (auto& u : inputs) u = {uniform(-0.02, 0.02), uniform(-0.5, 0.5)};
    return inputs;
  };

  const VehicleState follower{0.0, uniform(-0.3, 0.3), uniform(-0.03, 0.03), p.v_ref + uniform(0.3, 1.0)};
  VehicleState leader{10.0, uniform(-0.3, 0.3), uniform(-0.03, 0.03), p.v_ref - uniform(0.3, 1.0)};
  const auto leader_inputs = random_inputs();
  const auto follower_inputs = random_inputs();
  const Trajectory follow = kinematics::rollout(follower, follower_inputs, p);
  const double target = p.d_safe + p.epsilon - uniform(0.05, max_deficit);
  Trajectory lead = kinematics::rollout(leader, leader_inputs, p);
  for (int k = 0; k < 8; ++k) {
    leader.px += target - pair_distance_at(lead, follow, horizon, p);
    lead = kinematics::rollout(leader, leader_inputs, p);
  }
  inst.nominal = {lead};
  if (num_vehicles > 1) inst.nominal.push_back(follow);
  for (int i = 2; i < num_vehicles; ++i) {
    const VehicleState x0{uniform(-2.0, 8.0) + 12.0 * (i - 2), lane_gap + uniform(-0.3, 0.3), uniform(-0.03, 0.03),
                          uniform(8.0, 11.0)};
    inst.nominal.push_back(kinematics::rollout(x0, random_inputs(), p));
  }

  for (int i = 0; i < num_vehicles; ++i) {
    const double lane = i < 2 ? 0.0 : lane_gap;
    const std::vector<Vec2> line{{-50.0, lane}, {110.0, lane}};
    inst.paths.push_back(ReferencePath::from_polyline(line, p.max_gap));
    const auto refs = assign_references(inst.nominal[i], inst.paths[i]);
    inst.costs.push_back(build_tracking_cost(inst.nominal[i], refs, p));
    std::vector<kinematics::LinearizedDynamics> dyn;
    for (int t = 0; t < horizon; ++t)
      dyn.push_back(kinematics::linearize(inst.nominal[i].states[t], inst.nominal[i].inputs[t], p));
    inst.dynamics.push_back(std::move(dyn));
  }
  inst.system = build_constraint_system(inst.nominal, inst.boundary, p);
  return inst;
}

}  // namespace roundabout::oracle
