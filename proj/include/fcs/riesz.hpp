#pragma once

#include <Eigen/Dense>

namespace fcs {

class RadialGrid;

/// Dense matrix W with (I_alpha * v)(r_i) ~ sum_j W_ij v_j, C_alpha included.
///
/// Kernel path (N = 3): trapezoid rule on the angular-averaged kernel
/// 2 pi [(r+rho)^{a-1} - |r-rho|^{a-1}] / ((a-1) r rho) with the Navot end
/// correction 2 zeta(1-a) h^a for the |r-rho|^{a-1} kink on the diagonal.
///
/// Spectral path: Hankel quadrature of |k|^{-a} v^(k) on Gauss-Legendre panels
/// of width pi/R up to k = pi/h.
class RieszKernel {
public:
  enum class Path { Kernel, Spectral };

  RieszKernel(const RadialGrid &grid, Path path);

  Path path() const { return path_; }
  const Eigen::MatrixXd &matrix() const { return W_; }
  Eigen::VectorXd apply(const Eigen::VectorXd &v) const { return W_ * v; }

private:
  Path path_;
  Eigen::MatrixXd W_;
};

} // namespace fcs
