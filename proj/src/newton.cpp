#include "newton.hpp"

#include "fcs/riesz.hpp"
#include "fcs/spectral.hpp"

#include <cmath>

namespace fcs::detail {

namespace {

constexpr int kMaxHalvings = 8;

double eigen_merit(const Field &u, double level, double *lambda_out = nullptr) {
  const DualField A = apply_A(u);
  const DualField B = apply_B(u);
  const double lam = pairing(A, u) / pairing(B, u);
  if (lambda_out)
    *lambda_out = lam;
  const DualField g{u.grid, A.values - lam * B.values};
  return dual_norm(g) + std::abs(I_functional(u) - level);
}

} // namespace

Eigen::MatrixXd jacobian_A(const Field &u) {
  const auto &W = u.grid->riesz().matrix();
  Eigen::MatrixXd H = frac_laplacian_matrix(*u.grid);
  const Eigen::VectorXd phi = W * u.values.cwiseAbs2();
  H.diagonal() += phi;
  H.noalias() += 2.0 * u.values.asDiagonal() * W * u.values.asDiagonal();
  return H;
}

Eigen::MatrixXd hessian_Phi(const Field &u, const NonlinearitySpec &f) {
  Eigen::MatrixXd H = jacobian_A(u);
  if (!f.empty())
    H.diagonal() -= df_values(u, f);
  return H;
}

int morse_index(const Eigen::MatrixXd &H, const Eigen::VectorXd &weights) {
  const Eigen::VectorXd sw = weights.cwiseSqrt();
  Eigen::MatrixXd S = sw.asDiagonal() * H * sw.cwiseInverse().asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const auto &ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < -1e-10 * scale)
      ++count;
  return count;
}

double rayleigh_lambda(const Field &u) {
  return pairing(apply_A(u), u) / pairing(apply_B(u), u);
}

NewtonOutcome newton_critical(Field u, const NonlinearitySpec &f, double target,
                              int max_iter) {
  NewtonOutcome out;
  double r = dual_norm(grad_Phi(u, f));
  int it = 0;
  for (; it < max_iter && r > target; ++it) {
    const DualField g = grad_Phi(u, f);
    const Eigen::MatrixXd H = hessian_Phi(u, f);
    const Eigen::VectorXd step = H.partialPivLu().solve(g.values);
    if (!step.allFinite())
      break;
    double tau = 1.0;
    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k, tau *= 0.5) {
      Field trial{u.grid, u.values - tau * step};
      const double rt = dual_norm(grad_Phi(trial, f));
      if (rt < r) {
        u = std::move(trial);
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      break;
  }
  out.u = std::move(u);
  out.residual = r;
  out.iterations = it;
  return out;
}

NewtonOutcome newton_eigen(Field u, double level, double target, int max_iter) {
  NewtonOutcome out;
  const auto &w = u.grid->weights();
  const double p = u.grid->exponents().two_star_s_alpha;
  const auto M = static_cast<Eigen::Index>(u.size());
  double lam = 0;
  double merit = eigen_merit(u, level, &lam);
  int it = 0;
  for (; it < max_iter && merit > target; ++it) {
    const DualField A = apply_A(u);
    const DualField B = apply_B(u);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M + 1, M + 1);
    Eigen::MatrixXd J = jacobian_A(u);
    for (Eigen::Index j = 0; j < M; ++j) {
      const double a = std::abs(u.values[j]);
      J(j, j) -= lam * (p - 1.0) * (a == 0.0 ? 0.0 : std::pow(a, p - 2.0));
    }
    K.topLeftCorner(M, M) = w.asDiagonal() * J;
    K.block(0, M, M, 1) = -w.cwiseProduct(B.values);
    K.block(M, 0, 1, M) = w.cwiseProduct(A.values).transpose();
    Eigen::VectorXd rhs(M + 1);
    rhs.head(M) = -w.cwiseProduct(A.values - lam * B.values);
    rhs[M] = level - I_functional(u);
    const Eigen::VectorXd step = K.partialPivLu().solve(rhs);
    if (!step.allFinite())
      break;
    double tau = 1.0;
    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k, tau *= 0.5) {
      Field trial{u.grid, u.values + tau * step.head(M)};
      double lt = 0;
      const double mt = eigen_merit(trial, level, &lt);
      if (mt < merit) {
        u = std::move(trial);
        merit = mt;
        lam = lt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      break;
  }
  out.u = std::move(u);
  out.lambda = lam;
  out.residual = merit;
  out.iterations = it;
  return out;
}

} // namespace fcs::detail
