#pragma once

#include "fcs/grid.hpp"
#include "fcs/nonlinearity.hpp"

#include <vector>

namespace fcs {

/// Monotone cubic interpolant of u evaluated at arbitrary radii (zero at and
/// beyond R, even through 0).
Eigen::VectorXd interpolate_at(const Field &u, const Eigen::VectorXd &radii);

/// u resampled onto another grid's nodes.
Field resample(const Field &u, const GridPtr &target);

/// u_t = t^theta u(t .) on the same grid, by monotone cubic interpolation
/// (zero beyond R, even through 0). scale(u, 1) returns u unchanged.
/// t > 1 requires u.decays_at_boundary().
Field scale(const Field &u, double t);

/// The exact discrete dilation: values t^theta u_j on the grid with cutoff R/t.
/// Every discrete functional obeys its continuum scaling law under this map.
Field scale_exact(const Field &u, double t);

/// t_u = I(u)^{-1/sigma}
double fiber_parameter(const Field &u);

/// pi(u) = u_{t_u} on the same grid, polished by Newton on I(u_t) = 1.
Field project_to_M(const Field &u, double tol = 1e-8);

/// pi(u) by exact dilation: lands on the grid with cutoff R / t_u and
/// satisfies I = 1 to rounding.
Field project_to_M_exact(const Field &u);

struct FiberSample {
  double t = 0;
  double phi = 0;   ///< Phi(u_t)
  double dphi = 0;  ///< d Phi(u_t) / dt, centered difference
};

/// Phi along the fiber t -> u_t of u in M (exact dilation).
std::vector<FiberSample> fiber_profile(const Field &u, const NonlinearitySpec &f,
                                       const std::vector<double> &ts, double tol = 1e-8);

} // namespace fcs
