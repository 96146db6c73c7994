#include "fcs/riesz.hpp"

#include "fcs/error.hpp"
#include "fcs/grid.hpp"
#include "fcs/parallel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <vector>

namespace fcs {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

Eigen::MatrixXd kernel_matrix(const RadialGrid &g) {
  const double a = g.params().alpha;
  const double C = g.exponents().c_alpha;
  const double h = g.h();
  const auto &r = g.nodes();
  const auto M = r.size();
  Eigen::MatrixXd W(M, M);
  const double pre = C * 2.0 * kPi / (a - 1.0) * h;
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double ri = r[i];
    for (Eigen::Index j = 0; j < M; ++j) {
      const double rj = r[j];
      W(i, j) = pre / ri * rj *
                (std::pow(ri + rj, a - 1.0) - std::pow(std::abs(ri - rj), a - 1.0));
    }
  });
  // Navot correction for the |r - rho|^{a-1} kink on the diagonal node.
  const double navot =
      C * 4.0 * kPi * boost::math::zeta(1.0 - a) * std::pow(h, a) / (a - 1.0);
  W.diagonal().array() += navot;
  return W;
}

/// Gamma(N/2) (2/z)^nu J_nu(z): the angular average of e^{i k.x} over S^{N-1}.
double angular_average(int N, double z) {
  if (N == 3)
    return z < 1e-4 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
  const double nu = 0.5 * N - 1.0;
  if (z < 1e-6)
    return 1.0;
  return boost::math::tgamma(0.5 * N) * std::pow(2.0 / z, nu) *
         boost::math::cyl_bessel_j(nu, z);
}

Eigen::MatrixXd spectral_matrix(const RadialGrid &g) {
  const int N = g.params().N;
  const double a = g.params().alpha;
  const double R = g.R();
  const auto &r = g.nodes();
  const auto M = r.size();

  using GL = boost::math::quadrature::gauss<double, 8>;
  std::vector<double> x, wgl;
  for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
    x.push_back(GL::abscissa()[i]);
    wgl.push_back(GL::weights()[i]);
    if (GL::abscissa()[i] != 0.0) {
      x.push_back(-GL::abscissa()[i]);
      wgl.push_back(GL::weights()[i]);
    }
  }

  // k nodes and effective weights e_q ~ dk k^{N-1-alpha}
  std::vector<double> kq, eq;
  const double dk = kPi / R;
  const std::size_t panels = g.M() + 1;  // up to k = pi / h
  {
    // first panel in kappa = k^{N-alpha}, which removes the k^{N-1-alpha} singularity
    const double e = N - a;
    const double top = std::pow(dk, e);
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double kappa = 0.5 * top * (x[q] + 1.0);
      kq.push_back(std::pow(kappa, 1.0 / e));
      eq.push_back(0.5 * top * wgl[q] / e);
    }
  }
  for (std::size_t p = 1; p < panels; ++p) {
    const double lo = static_cast<double>(p) * dk;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double k = lo + 0.5 * dk * (x[q] + 1.0);
      kq.push_back(k);
      eq.push_back(0.5 * dk * wgl[q] * std::pow(k, N - 1.0 - a));
    }
  }

  const auto Q = static_cast<Eigen::Index>(kq.size());
  Eigen::MatrixXd G(M, Q);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    for (Eigen::Index q = 0; q < Q; ++q)
      G(i, q) = std::sqrt(eq[static_cast<std::size_t>(q)]) *
                angular_average(N, kq[static_cast<std::size_t>(q)] * r[i]);
  });
  const double c = unit_sphere_area(N) / std::pow(2.0 * kPi, N);
  Eigen::MatrixXd P = c * (G * G.transpose());
  return P * g.weights().asDiagonal();
}

} // namespace

RieszKernel::RieszKernel(const RadialGrid &grid, Path path) : path_(path) {
  if (path == Path::Kernel) {
    if (grid.params().N != 3)
      throw UnsupportedRegime("closed-form angular kernel is available for N = 3 only");
    W_ = kernel_matrix(grid);
  } else {
    W_ = spectral_matrix(grid);
  }
}

} // namespace fcs
