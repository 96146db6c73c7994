#include "fcs/diagnostics.hpp"

#include "fcs/energy.hpp"
#include "fcs/error.hpp"
#include "fcs/operators.hpp"
#include "fcs/scaling.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

namespace fcs {

double relative_gap(double a, double b) {
  const double den = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / den;
}

DiagnosticsRecord pohozaev_residual(const Field &u, const NonlinearitySpec &f) {
  if (!f.autonomous())
    throw PreconditionError("identity stated only for autonomous f");
  const auto &g = *u.grid;
  const int N = g.params().N;
  const double s = g.params().s;
  const double a = g.params().alpha;
  DiagnosticsRecord rec;
  rec.pohozaev_lhs = 0.5 * (N - 2.0 * s) * frac_seminorm_sq(u) +
                     g.exponents().c_alpha * (N + a) / 4.0 * coulomb_energy(u);
  rec.pohozaev_rhs = N * F_integral(u, f);
  rec.pohozaev_rel = (rec.pohozaev_lhs == 0 && rec.pohozaev_rhs == 0)
                         ? 0.0
                         : relative_gap(rec.pohozaev_lhs, rec.pohozaev_rhs);
  rec.nehari = nehari_residual(u, f);
  rec.boundary_decay = u.decays_at_boundary();
  rec.grid = summarize(g);
  return rec;
}

double nehari_residual(const Field &u, const NonlinearitySpec &f) {
  return pairing(apply_A(u), u) - f_pairing(u, f, u);
}

double eigen_identity_residual(const Field &u, double lambda) {
  return I_functional(u) - lambda * J_functional(u);
}

double identity_combination(const Field &u, double lambda) {
  const auto &e = u.grid->exponents();
  const NonlinearitySpec f = NonlinearitySpec::pure_eigen(lambda, e);
  const DiagnosticsRecord rec = pohozaev_residual(u, f);
  return e.theta / e.sigma * rec.nehari - (rec.pohozaev_lhs - rec.pohozaev_rhs) / e.sigma;
}

double sobolev_constant_exact(int N, double s) {
  using boost::math::tgamma;
  constexpr double pi = boost::math::constants::pi<double>();
  return std::pow(2.0, 2 * s) * std::pow(pi, s) * tgamma(0.5 * (N + 2 * s)) /
         tgamma(0.5 * (N - 2 * s)) * std::pow(tgamma(0.5 * N) / tgamma(N), 2 * s / N);
}

SobolevEstimate estimate_sobolev_constant(const GridPtr &grid, int max_iter) {
  if (grid->exponents().regime != Regime::Above)
    throw UnsupportedRegime("Sobolev estimate requires 4s + alpha > N");
  const int N = grid->params().N;
  const double s = grid->params().s;
  const double p = grid->exponents().two_star_s;
  const double decay = 0.5 * (N - 2 * s);

  auto normalize = [p](Field v) {
    v.values /= lp_norm(v, p);
    return v;
  };
  auto quotient = [p](const Field &v) {
    return frac_seminorm_sq(v) / std::pow(lp_norm(v, p), 2.0);
  };

  SobolevEstimate out;
  out.value = std::numeric_limits<double>::infinity();
  for (double frac : {1.0 / 80, 1.0 / 40, 1.0 / 20, 1.0 / 10}) {
    const double eps = frac * grid->R();
    Field u = normalize(Field::sample(
        grid, [eps, decay](double r) { return std::pow(1.0 + (r / eps) * (r / eps), -decay); }));
    double Q = quotient(u);
    double eta = 1.0, ref = 0, rel = 1.0;
    bool stalled = false;
    for (int it = 0; it < max_iter; ++it) {
      // gradient of S(u)/||u||_p^2 at ||u||_p = 1
      DualField g{grid, 2.0 * frac_laplacian(u).values};
      for (Eigen::Index j = 0; j < g.values.size(); ++j) {
        const double a = std::abs(u.values[j]);
        g.values[j] -= 2.0 * Q * (a == 0 ? 0.0 : std::pow(a, p - 2.0) * u.values[j]);
      }
      const double r = dual_norm(g);
      if (it == 0)
        ref = r;
      rel = r / ref;
      if (rel <= 1e-7)
        break;
      const Field d = -precondition(g);
      const double slope = -pairing(g, d);
      bool accepted = false;
      while (eta >= 1e-14) {
        Field un = normalize(Field{grid, u.values + eta * d.values});
        const double Qn = quotient(un);
        if (Qn <= Q - 1e-4 * eta * slope) {
          u = std::move(un);
          Q = Qn;
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
      eta *= 2.0;
    }
    out.per_seed.push_back(Q);
    if (Q < out.value) {
      out.value = Q;
      out.best = u;
      out.converged = rel <= 1e-4 || stalled;
    }
  }
  return out;
}

double ps_threshold(const ProblemParams &params, double S) {
  if (!(S > 0))
    throw InvalidArgument("Sobolev constant must be positive");
  return params.s / params.N * std::pow(S, params.N / (2.0 * params.s));
}

LinkingTable linking_probe(const NonlinearitySpec &f, double lambda,
                           const std::vector<Field> &candidates,
                           const std::vector<double> &ts) {
  LinkingTable table;
  std::vector<const Field *> low, high;
  for (const auto &c : candidates) {
    const double psi = Psi_tilde(c, 1e-8);
    (psi <= lambda ? low : high).push_back(&c);
  }
  table.low_count = low.size();
  table.high_count = high.size();
  table.partial = low.empty() || high.empty();

  std::vector<std::vector<FiberSample>> low_prof, high_prof;
  for (const Field *c : low)
    low_prof.push_back(fiber_profile(*c, f, ts));
  for (const Field *c : high)
    high_prof.push_back(fiber_profile(*c, f, ts));

  for (std::size_t i = 0; i < ts.size(); ++i) {
    LinkingRow row;
    row.t = ts[i];
    bool ok = true;
    for (const auto &p : low_prof) {
      row.low.push_back(p[i].phi);
      ok = ok && (ts[i] == 0 ? p[i].phi == 0 : p[i].phi <= 0);
    }
    for (const auto &p : high_prof) {
      row.high.push_back(p[i].phi);
      ok = ok && (ts[i] == 0 ? p[i].phi == 0 : p[i].phi > 0);
    }
    row.pattern_holds = ok;
    table.rows.push_back(std::move(row));
  }
  return table;
}

} // namespace fcs
