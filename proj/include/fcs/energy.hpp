#pragma once

#include "fcs/grid.hpp"
#include "fcs/nonlinearity.hpp"
#include "fcs/operators.hpp"

namespace fcs {

/// The pieces every functional is built from, evaluated once.
struct EnergyParts {
  double seminorm = 0;  ///< ||(-Delta)^{s/2} u||^2
  double coulomb = 0;   ///< C_alpha D(u)
  double I = 0;         ///< seminorm / 2 + coulomb / 4
  double J = 0;         ///< int |u|^{2*_{s,a}} / 2*_{s,a}
};

EnergyParts energy_parts(const Field &u);

double I_functional(const Field &u);
double J_functional(const Field &u);
/// int F(|x|, u) dx
double F_integral(const Field &u, const NonlinearitySpec &f);
/// int f(|x|, u) v dx
double f_pairing(const Field &u, const NonlinearitySpec &f, const Field &v);

double Phi(const Field &u, const NonlinearitySpec &f);
double Phi_lambda(const Field &u, double lambda);

/// Strong-form residual A(u) - f(., u) as a dual field.
DualField grad_Phi(const Field &u, const NonlinearitySpec &f);
/// Same, returned with its preconditioned descent representative.
struct Gradient {
  DualField strong;
  Field descent;
};
Gradient grad_Phi_preconditioned(const Field &u, const NonlinearitySpec &f);

/// 1 / J(u) for u on M; throws PreconditionError when |I(u) - 1| > tol.
double Psi_tilde(const Field &u, double tol = 1e-8);

/// Node values f(r_j, u_j) and d f / d t (r_j, u_j).
Eigen::VectorXd f_values(const Field &u, const NonlinearitySpec &f);
Eigen::VectorXd df_values(const Field &u, const NonlinearitySpec &f);

} // namespace fcs
