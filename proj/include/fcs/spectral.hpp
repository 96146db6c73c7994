#pragma once

#include <Eigen/Dense>
#include <memory>

namespace fcs {

class RadialGrid;

/// Orthonormal radial spectral basis in the symmetrized variables
/// y_j = sqrt(w_j) u_j: forward gives uhat = U^T y, inverse y = U uhat with
/// U orthogonal, so sum uhat^2 = sum w u^2 exactly.
///
/// N = 3 uses the type-I sine transform (k_m = m pi / R). Other N use sampled
/// Fourier-Bessel modes r^{-nu} J_nu(z_m r / R), nu = N/2 - 1, orthonormalized
/// symmetrically (Loewdin) so that the wavenumber ordering is preserved.
class SpectralBasis {
public:
  explicit SpectralBasis(const RadialGrid &grid);
  ~SpectralBasis();
  SpectralBasis(const SpectralBasis &) = delete;
  SpectralBasis &operator=(const SpectralBasis &) = delete;

  const Eigen::VectorXd &wavenumbers() const { return k_; }
  /// k_m^{2s}
  const Eigen::VectorXd &symbol() const { return k2s_; }

  Eigen::VectorXd forward_sym(const Eigen::VectorXd &y) const;
  Eigen::VectorXd inverse_sym(const Eigen::VectorXd &c) const;

  /// Node values -> coefficients and back (divides/multiplies by sqrt(w)).
  Eigen::VectorXd forward(const Eigen::VectorXd &u) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd &c) const;

  /// Dense U (columns are modes in symmetrized variables).
  Eigen::MatrixXd dense() const;

  /// Multiplies node values by the multiplier mult(k_m) in coefficient space.
  Eigen::VectorXd apply_multiplier(const Eigen::VectorXd &u,
                                   const Eigen::VectorXd &mult) const;

private:
  struct Fftw;
  Eigen::VectorXd k_, k2s_, sqrt_w_;
  Eigen::MatrixXd U_;            // generic N only
  std::unique_ptr<Fftw> fftw_;   // N = 3 only
  double dst_scale_ = 1.0;
};

/// Dense node-space matrix of (-Delta)^s: L u reproduces the spectral action.
Eigen::MatrixXd frac_laplacian_matrix(const RadialGrid &grid);

} // namespace fcs
