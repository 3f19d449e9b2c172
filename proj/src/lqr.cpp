#include "roundabout/lqr.hpp"

#include <Eigen/Cholesky>
#include <string>

#include "roundabout/errors.hpp"

namespace roundabout {

namespace {

constexpr double kInputRegularization = 1e-9;

}  // namespace

double AffineLqrProblem::objective(const TrajectoryVariation& dX) const {
  double total = 0.0;
  for (std::size_t t = 0; t < H.size(); ++t) total += dX.dx[t].dot(H[t] * dX.dx[t]) + h[t].dot(dX.dx[t]);
  for (std::size_t t = 0; t < G.size(); ++t) total += dX.du[t].dot(G[t] * dX.du[t]) + g[t].dot(dX.du[t]);
  return total;
}

AffineLqrProblem assemble_subproblem(const TrackingCost& tracking, const ConstraintSystem& system, int vehicle,
                                     const Eigen::VectorXd& r, double eta,
                                     std::span<const kinematics::LinearizedDynamics> dynamics) {
  if (r.size() != system.size())
    throw std::out_of_range("r has length " + std::to_string(r.size()) + ", constraint system has " +
                            std::to_string(system.size()) + " rows");
  const int horizon = static_cast<int>(tracking.r.size());
  AffineLqrProblem prob;
  prob.H = tracking.Q;
  prob.h = tracking.q;
  prob.G.assign(horizon, tracking.R);
  prob.g = tracking.r;
  prob.A.resize(horizon);
  prob.B.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    prob.A[t] = dynamics[t].A;
    prob.B[t] = dynamics[t].B;
  }

  for (const auto& ref : system.vehicle_rows(vehicle)) {
    const auto& row = system.rows()[ref.row];
    const auto& c = row.terms[ref.term].coeff;
    const int tau = row.meta.tau;
    const double rk = r[ref.row];
    if (row.is_input_row()) {
      const Vec2 cu(c[0], c[1]);
      prob.G[tau].noalias() += eta * cu * cu.transpose();
      prob.g[tau] += 2.0 * eta * rk * cu;
    } else {
      const Vec4 cx(c[0], c[1], c[2], c[3]);
      prob.H[tau].noalias() += eta * cx * cx.transpose();
      prob.h[tau] += 2.0 * eta * rk * cx;
    }
  }
  return prob;
}

LqrSolution solve_lqr(const AffineLqrProblem& prob) {
  const int horizon = prob.horizon();
  std::vector<Eigen::Matrix<double, 2, 4>> K(horizon);
  std::vector<Vec2> k(horizon);

  Mat4 S = prob.H[horizon];
  Vec4 s = prob.h[horizon];
  for (int t = horizon - 1; t >= 0; --t) {
    const Mat4& A = prob.A[t];
    const Mat42& B = prob.B[t];
    const Mat42 SB = S * B;
    Mat2 Quu = prob.G[t] + B.transpose() * SB;
    Quu += kInputRegularization * Mat2::Identity();
    const Eigen::Matrix<double, 2, 4> Qux = SB.transpose() * A;
    const Vec2 qu = prob.g[t] + B.transpose() * s;
    const Mat4 Qxx = prob.H[t] + A.transpose() * S * A;
    const Vec4 qx = prob.h[t] + A.transpose() * s;

    Eigen::LLT<Mat2> llt(Quu);
    if (llt.info() != Eigen::Success)
      throw NumericalError("stage Hessian not positive definite at t=" + std::to_string(t));
    K[t] = -llt.solve(Qux);
    k[t] = -0.5 * llt.solve(qu);

    S = Qxx + Qux.transpose() * K[t];
    S = 0.5 * (S + S.transpose()).eval();
    s = qx + 2.0 * Qux.transpose() * k[t];
  }

  LqrSolution sol;
  sol.dX = TrajectoryVariation::zero(horizon);
  for (int t = 0; t < horizon; ++t) {
    sol.dX.du[t] = K[t] * sol.dX.dx[t] + k[t];
    sol.dX.dx[t + 1] = prob.A[t] * sol.dX.dx[t] + prob.B[t] * sol.dX.du[t];
  }
  sol.value = prob.objective(sol.dX);
  return sol;
}

}  // namespace roundabout
