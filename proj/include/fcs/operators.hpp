#pragma once

#include "fcs/grid.hpp"

namespace fcs {

/// Node values rho_j of a functional v -> sum_j w_j rho_j v_j.
struct DualField {
  GridPtr grid;
  Eigen::VectorXd values;
};

double pairing(const DualField &rho, const Field &v);
/// sqrt(sum_m rhohat_m^2 / (1 + k_m^{2s})), a discrete H^{-s} norm.
double dual_norm(const DualField &rho);
/// Riesz representative in the (1 + k^{2s}) metric: the descent direction.
Field precondition(const DualField &rho);
/// (u, v)_H = sum_m (1 + k_m^{2s}) uhat_m vhat_m
double h_inner(const Field &u, const Field &v);

/// ||(-Delta)^{s/2} u||^2 = sum_m k_m^{2s} uhat_m^2
double frac_seminorm_sq(const Field &u);
/// Bilinear form sum_m k_m^{2s} uhat_m vhat_m
double frac_form(const Field &u, const Field &v);
Field frac_laplacian(const Field &u);

/// I_alpha * v at the nodes (default path of the grid).
Field riesz_potential(const Field &v);
/// I_alpha * v at the nodes by Hankel quadrature (any N).
Field riesz_potential_spectral(const Field &v);
/// I_alpha * v at arbitrary radii in (0, R): node values interpolated by
/// local Lagrange polynomials (even extension through r = 0).
Eigen::VectorXd riesz_potential_at(const Field &v, const Eigen::VectorXd &radii);

/// D(u) = iint u^2(x) u^2(y) / |x-y|^{N-alpha}; C_alpha not included.
double coulomb_energy(const Field &u);
/// C_alpha iint u v (x) w z (y) / |x-y|^{N-alpha}
double quadrilinear_T(const Field &u, const Field &v, const Field &w, const Field &z);

/// A(u) = (-Delta)^s u + (I_alpha * u^2) u
DualField apply_A(const Field &u);
/// B(u) = |u|^{2*_{s,alpha}-2} u
DualField apply_B(const Field &u);
/// <A(u), v> assembled from the weak form (frac_form + T(u,v,u,u)).
double weak_A(const Field &u, const Field &v);

} // namespace fcs
