#include "fcs/energy.hpp"

#include "fcs/error.hpp"
#include "fcs/riesz.hpp"
#include "fcs/spectral.hpp"

#include <cmath>
#include <fmt/format.h>

namespace fcs {

EnergyParts energy_parts(const Field &u) {
  EnergyParts e;
  e.seminorm = frac_seminorm_sq(u);
  e.coulomb = u.grid->exponents().c_alpha * coulomb_energy(u);
  e.I = 0.5 * e.seminorm + 0.25 * e.coulomb;
  const double p = u.grid->exponents().two_star_s_alpha;
  e.J = lp_integral(u, p) / p;
  return e;
}

double I_functional(const Field &u) {
  return 0.5 * frac_seminorm_sq(u) + 0.25 * u.grid->exponents().c_alpha * coulomb_energy(u);
}

double J_functional(const Field &u) {
  const double p = u.grid->exponents().two_star_s_alpha;
  return lp_integral(u, p) / p;
}

double F_integral(const Field &u, const NonlinearitySpec &f) {
  if (f.empty())
    return 0.0;
  const auto &r = u.grid->nodes();
  const auto &w = u.grid->weights();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    acc += w[j] * f.F(r[j], u.values[j]);
  return acc;
}

Eigen::VectorXd f_values(const Field &u, const NonlinearitySpec &f) {
  const auto &r = u.grid->nodes();
  Eigen::VectorXd out(u.values.size());
  for (Eigen::Index j = 0; j < out.size(); ++j)
    out[j] = f.f(r[j], u.values[j]);
  return out;
}

Eigen::VectorXd df_values(const Field &u, const NonlinearitySpec &f) {
  const auto &r = u.grid->nodes();
  Eigen::VectorXd out(u.values.size());
  for (Eigen::Index j = 0; j < out.size(); ++j)
    out[j] = f.df(r[j], u.values[j]);
  return out;
}

double f_pairing(const Field &u, const NonlinearitySpec &f, const Field &v) {
  require_same_grid(u, v);
  return (u.grid->weights().array() * f_values(u, f).array() * v.values.array()).sum();
}

double Phi(const Field &u, const NonlinearitySpec &f) {
  return I_functional(u) - F_integral(u, f);
}

double Phi_lambda(const Field &u, double lambda) {
  return I_functional(u) - lambda * J_functional(u);
}

DualField grad_Phi(const Field &u, const NonlinearitySpec &f) {
  DualField g = apply_A(u);
  if (!f.empty())
    g.values -= f_values(u, f);
  return g;
}

Gradient grad_Phi_preconditioned(const Field &u, const NonlinearitySpec &f) {
  DualField g = grad_Phi(u, f);
  Field d = precondition(g);
  return {std::move(g), std::move(d)};
}

double Psi_tilde(const Field &u, double tol) {
  const double I = I_functional(u);
  if (std::abs(I - 1.0) > tol)
    throw PreconditionError(
        fmt::format("Psi~ is defined on M = {{I = 1}}; got I(u) = {:.12g}", I));
  return 1.0 / J_functional(u);
}

} // namespace fcs
