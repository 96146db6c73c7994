#include "fcs/spectral.hpp"

#include "fcs/error.hpp"
#include "fcs/grid.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <fftw3.h>
#include <mutex>

namespace fcs {

namespace {
// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex fftw_planner_mutex;
} // namespace

struct SpectralBasis::Fftw {
  fftw_plan plan = nullptr;
  explicit Fftw(int n) {
    std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    std::lock_guard lock(fftw_planner_mutex);
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_RODFT00,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~Fftw() {
    std::lock_guard lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
};

SpectralBasis::SpectralBasis(const RadialGrid &grid) : sqrt_w_(grid.sqrt_weights()) {
  const auto M = static_cast<Eigen::Index>(grid.M());
  const double R = grid.R();
  const double s = grid.params().s;
  constexpr double pi = boost::math::constants::pi<double>();
  k_.resize(M);

  if (grid.params().N == 3) {
    for (Eigen::Index m = 0; m < M; ++m)
      k_[m] = static_cast<double>(m + 1) * pi / R;
    fftw_ = std::make_unique<Fftw>(static_cast<int>(M));
    dst_scale_ = 1.0 / std::sqrt(2.0 * static_cast<double>(M + 1));
  } else {
    const double nu = 0.5 * grid.params().N - 1.0;
    Eigen::MatrixXd Y(M, M);
    for (Eigen::Index m = 0; m < M; ++m) {
      const double z = boost::math::cyl_bessel_j_zero(nu, static_cast<int>(m + 1));
      k_[m] = z / R;
      for (Eigen::Index j = 0; j < M; ++j) {
        const double x = z * grid.nodes()[j] / R;
        Y(j, m) = sqrt_w_[j] * std::pow(x, -nu) * boost::math::cyl_bessel_j(nu, x);
      }
      Y.col(m).normalize();
    }
    // Loewdin: U = Y (Y^T Y)^{-1/2} is the orthogonal matrix closest to Y.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y.transpose() * Y);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
      throw SolverError("Fourier-Bessel modes are linearly dependent on this grid");
    const Eigen::VectorXd isq = es.eigenvalues().cwiseSqrt().cwiseInverse();
    U_ = Y * (es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().transpose());
  }
  k2s_ = k_.array().pow(2.0 * s).matrix();
}

SpectralBasis::~SpectralBasis() = default;

Eigen::VectorXd SpectralBasis::forward_sym(const Eigen::VectorXd &y) const {
  if (y.size() != k_.size())
    throw GridMismatch("vector length does not match spectral basis");
  if (fftw_) {
    Eigen::VectorXd c(y.size());
    fftw_execute_r2r(fftw_->plan, const_cast<double *>(y.data()), c.data());
    return c * dst_scale_;
  }
  return U_.transpose() * y;
}

Eigen::VectorXd SpectralBasis::inverse_sym(const Eigen::VectorXd &c) const {
  if (c.size() != k_.size())
    throw GridMismatch("vector length does not match spectral basis");
  if (fftw_) {
    // the orthonormal DST-I is its own inverse
    Eigen::VectorXd y(c.size());
    fftw_execute_r2r(fftw_->plan, const_cast<double *>(c.data()), y.data());
    return y * dst_scale_;
  }
  return U_ * c;
}

Eigen::VectorXd SpectralBasis::forward(const Eigen::VectorXd &u) const {
  if (u.size() != sqrt_w_.size())
    throw GridMismatch("vector length does not match grid");
  return forward_sym(sqrt_w_.cwiseProduct(u));
}

Eigen::VectorXd SpectralBasis::inverse(const Eigen::VectorXd &c) const {
  return inverse_sym(c).cwiseQuotient(sqrt_w_);
}

Eigen::MatrixXd SpectralBasis::dense() const {
  if (!fftw_)
    return U_;
  const Eigen::Index M = k_.size();
  Eigen::MatrixXd S(M, M);
  constexpr double pi = boost::math::constants::pi<double>();
  const double a = std::sqrt(2.0 / static_cast<double>(M + 1));
  for (Eigen::Index j = 0; j < M; ++j)
    for (Eigen::Index m = 0; m < M; ++m)
      S(j, m) = a * std::sin(pi * static_cast<double>(((j + 1) * (m + 1)) % (2 * (M + 1))) /
                             static_cast<double>(M + 1));
  return S;
}

Eigen::VectorXd SpectralBasis::apply_multiplier(const Eigen::VectorXd &u,
                                                const Eigen::VectorXd &mult) const {
  return inverse(mult.cwiseProduct(forward(u)));
}

Eigen::MatrixXd frac_laplacian_matrix(const RadialGrid &grid) {
  const auto &b = grid.basis();
  const Eigen::MatrixXd U = b.dense();
  const Eigen::VectorXd &sw = grid.sqrt_weights();
  Eigen::MatrixXd L = U * b.symbol().asDiagonal() * U.transpose();
  // node form: diag(1/sqrt w) Lsym diag(sqrt w)
  L = sw.cwiseInverse().asDiagonal() * L * sw.asDiagonal();
  return L;
}

} // namespace fcs
