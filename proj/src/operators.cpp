#include "fcs/operators.hpp"

#include "fcs/error.hpp"
#include "fcs/riesz.hpp"
#include "fcs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fcs {

namespace {

void require_dual_grid(const DualField &rho, const Field &v) {
  if (!rho.grid || !v.grid || !rho.grid->same_as(*v.grid))
    throw GridMismatch("dual field and field live on different grids");
}

Eigen::VectorXd squared(const Field &u) { return u.values.cwiseAbs2(); }

} // namespace

double pairing(const DualField &rho, const Field &v) {
  require_dual_grid(rho, v);
  return (rho.grid->weights().array() * rho.values.array() * v.values.array()).sum();
}

double dual_norm(const DualField &rho) {
  const auto &b = rho.grid->basis();
  const Eigen::VectorXd c = b.forward(rho.values);
  return std::sqrt((c.array().square() / (1.0 + b.symbol().array())).sum());
}

Field precondition(const DualField &rho) {
  const auto &b = rho.grid->basis();
  const Eigen::VectorXd mult = (1.0 + b.symbol().array()).inverse();
  return {rho.grid, b.apply_multiplier(rho.values, mult)};
}

double h_inner(const Field &u, const Field &v) {
  require_same_grid(u, v);
  const auto &b = u.grid->basis();
  return ((1.0 + b.symbol().array()) * b.forward(u.values).array() *
          b.forward(v.values).array())
      .sum();
}

double frac_seminorm_sq(const Field &u) {
  const auto &b = u.grid->basis();
  return (b.symbol().array() * b.forward(u.values).array().square()).sum();
}

double frac_form(const Field &u, const Field &v) {
  require_same_grid(u, v);
  const auto &b = u.grid->basis();
  return (b.symbol().array() * b.forward(u.values).array() * b.forward(v.values).array())
      .sum();
}

Field frac_laplacian(const Field &u) {
  const auto &b = u.grid->basis();
  return {u.grid, b.apply_multiplier(u.values, b.symbol())};
}

Field riesz_potential(const Field &v) { return {v.grid, v.grid->riesz().apply(v.values)}; }

Field riesz_potential_spectral(const Field &v) {
  return {v.grid, v.grid->riesz_spectral().apply(v.values)};
}

Eigen::VectorXd riesz_potential_at(const Field &v, const Eigen::VectorXd &radii) {
  const Field phi = riesz_potential(v);
  const auto &g = *v.grid;
  const double h = g.h();
  const auto M = static_cast<long>(g.M());
  constexpr long order = 8;

  // phi is even in r; node j <-> r_j = j h for j = 1..M, mirrored for j <= 0.
  auto value_at = [&](long j) {
    const long a = std::abs(j);
    if (a == 0)
      return std::numeric_limits<double>::quiet_NaN();
    return phi.values[a - 1];
  };

  Eigen::VectorXd out(radii.size());
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r > 0) || r >= g.R())
      throw InvalidArgument("evaluation radius must lie in (0, R)");
    const double x = r / h;
    const long nearest = std::lround(x);
    if (nearest >= 1 && std::abs(x - nearest) < 1e-12 && nearest <= M) {
      out[i] = phi.values[nearest - 1];
      continue;
    }
    // stencil of `order` nodes around x, odd offsets skip the r = 0 gap
    long start = static_cast<long>(std::floor(x)) - order / 2 + 1;
    start = std::min(start, M - order + 1);
    std::vector<long> idx;
    for (long j = start; static_cast<long>(idx.size()) < order; ++j)
      if (j != 0)
        idx.push_back(j);
    double acc = 0.0;
    for (long a : idx) {
      double l = 1.0;
      for (long b : idx)
        if (b != a)
          l *= (x - static_cast<double>(b)) / static_cast<double>(a - b);
      acc += l * value_at(a);
    }
    out[i] = acc;
  }
  return out;
}

double coulomb_energy(const Field &u) {
  const Eigen::VectorXd u2 = squared(u);
  const Eigen::VectorXd phi = u.grid->riesz().apply(u2);
  return (u.grid->weights().array() * u2.array() * phi.array()).sum() /
         u.grid->exponents().c_alpha;
}

double quadrilinear_T(const Field &u, const Field &v, const Field &w, const Field &z) {
  require_same_grid(u, v);
  require_same_grid(u, w);
  require_same_grid(u, z);
  const Eigen::VectorXd wz = w.values.cwiseProduct(z.values);
  const Eigen::VectorXd phi = u.grid->riesz().apply(wz);
  return (u.grid->weights().array() * u.values.array() * v.values.array() * phi.array())
      .sum();
}

DualField apply_A(const Field &u) {
  const auto &b = u.grid->basis();
  Eigen::VectorXd out = b.apply_multiplier(u.values, b.symbol());
  out += u.grid->riesz().apply(squared(u)).cwiseProduct(u.values);
  return {u.grid, std::move(out)};
}

DualField apply_B(const Field &u) {
  const double p = u.grid->exponents().two_star_s_alpha;
  Eigen::VectorXd out(u.values.size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const double a = std::abs(u.values[j]);
    out[j] = a == 0.0 ? 0.0 : std::pow(a, p - 2.0) * u.values[j];
  }
  return {u.grid, std::move(out)};
}

double weak_A(const Field &u, const Field &v) {
  return frac_form(u, v) + quadrilinear_T(u, v, u, u);
}

} // namespace fcs
