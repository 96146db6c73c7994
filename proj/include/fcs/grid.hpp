#pragma once

#include "fcs/params.hpp"

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <mutex>

namespace fcs {

class SpectralBasis;
class RieszKernel;

/// Quadrature grid on [0,R]: nodes r_j = j h, h = R/(M+1), j = 1..M, with
/// radial weights w_j = |S^{N-1}| r_j^{N-1} h. The spectral basis and the
/// Riesz matrices are built lazily and shared by all fields on the grid.
class RadialGrid : public std::enable_shared_from_this<RadialGrid> {
public:
  /// Grids are interned: equal (params, R, M) return the same object while
  /// any reference to it is alive.
  static std::shared_ptr<const RadialGrid> make(const ProblemParams &params, double R,
                                                std::size_t M);

  const ProblemParams &params() const { return params_; }
  const ExponentTable &exponents() const { return exps_; }
  double R() const { return R_; }
  std::size_t M() const { return M_; }
  double h() const { return h_; }
  const Eigen::VectorXd &nodes() const { return r_; }
  const Eigen::VectorXd &weights() const { return w_; }
  const Eigen::VectorXd &sqrt_weights() const { return sqrt_w_; }

  const SpectralBasis &basis() const;
  /// Real-space kernel path (N = 3) or the spectral path otherwise.
  const RieszKernel &riesz() const;
  /// Hankel-quadrature path, available for every N (cross-check at N = 3).
  const RieszKernel &riesz_spectral() const;

  /// Same (params, M) with cutoff R/t: the exact discrete dilation.
  std::shared_ptr<const RadialGrid> rescaled(double t) const;

  bool same_as(const RadialGrid &other) const { return this == &other; }

  RadialGrid(const ProblemParams &params, double R, std::size_t M);
  ~RadialGrid();

private:
  ProblemParams params_;
  ExponentTable exps_;
  double R_;
  std::size_t M_;
  double h_;
  Eigen::VectorXd r_, w_, sqrt_w_;

  mutable std::once_flag basis_once_, riesz_once_, riesz_spec_once_;
  mutable std::unique_ptr<SpectralBasis> basis_;
  mutable std::unique_ptr<RieszKernel> riesz_;
  mutable std::unique_ptr<RieszKernel> riesz_spec_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(const ProblemParams &params, double R, std::size_t M);

/// Real radial function sampled on a grid.
struct Field {
  GridPtr grid;
  Eigen::VectorXd values;

  Field() = default;
  Field(GridPtr g, Eigen::VectorXd v);
  static Field zeros(GridPtr g);
  /// Samples fn(r) at the nodes.
  template <class Fn> static Field sample(GridPtr g, Fn &&fn) {
    Eigen::VectorXd v(g->M());
    for (Eigen::Index j = 0; j < v.size(); ++j)
      v[j] = fn(g->nodes()[j]);
    return Field(std::move(g), std::move(v));
  }

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool is_zero() const { return values.isZero(0.0); }
  bool finite() const { return values.allFinite(); }
  /// max |u| over r > 0.8 R stays below 1e-4 of the peak (solutions decay only
  /// algebraically, like r^{-(N+2s)}).
  bool decays_at_boundary() const;

  Field operator-() const { return {grid, -values}; }
};

Field operator+(const Field &a, const Field &b);
Field operator-(const Field &a, const Field &b);
Field operator*(double c, const Field &a);

/// Throws GridMismatch unless both fields live on the same grid.
void require_same_grid(const Field &a, const Field &b);

/// Orthonormal spectral coefficients at wavenumbers k_m.
struct SpectralField {
  GridPtr grid;
  Eigen::VectorXd coefficients;
};

SpectralField forward_transform(const Field &u);
Field inverse_transform(const SpectralField &uhat);

/// (sum_j w_j |u_j|^p)^{1/p}; p = infinity gives the max norm.
double lp_norm(const Field &u, double p);
/// sum_j w_j |u_j|^p without the root.
double lp_integral(const Field &u, double p);
/// L^2(R^N) inner product sum_j w_j u_j v_j.
double l2_inner(const Field &u, const Field &v);

} // namespace fcs
