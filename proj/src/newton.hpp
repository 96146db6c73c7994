#pragma once

// Dense Newton machinery shared by the solvers.

#include "fcs/energy.hpp"

namespace fcs::detail {

/// Node-form Jacobian of u -> A(u): L_s + diag(I*u^2) + 2 diag(u) W diag(u).
Eigen::MatrixXd jacobian_A(const Field &u);

/// Node-form Hessian of Phi: jacobian_A - diag(f'(u)).
Eigen::MatrixXd hessian_Phi(const Field &u, const NonlinearitySpec &f);

/// Number of negative eigenvalues of a node-form operator that is
/// self-adjoint in the weighted inner product.
int morse_index(const Eigen::MatrixXd &H, const Eigen::VectorXd &weights);

struct NewtonOutcome {
  Field u;
  double lambda = 0;
  double residual = 0;
  int iterations = 0;
};

/// Newton on grad Phi = 0; steps are halved until the dual residual drops.
NewtonOutcome newton_critical(Field u, const NonlinearitySpec &f, double target,
                              int max_iter = 30);

/// Newton on A(u) = lambda B(u), I(u) = level (bordered system).
NewtonOutcome newton_eigen(Field u, double level, double target, int max_iter = 30);

/// Rayleigh multiplier <A u, u> / <B u, u>.
double rayleigh_lambda(const Field &u);

} // namespace fcs::detail
