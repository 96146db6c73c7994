#include "fcs/solvers.hpp"

#include "fcs/diagnostics.hpp"
#include "fcs/error.hpp"
#include "fcs/scaling.hpp"
#include "newton.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace fcs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Descent hands over to Newton once the relative residual is below this.
constexpr double kNewtonSwitch = 1e-4;
constexpr double kMinStep = 1e-14;

void require_above(const RadialGrid &g) {
  if (g.exponents().regime != Regime::Above)
    throw UnsupportedRegime("solvers require 4s + alpha > N");
}

/// Radius where |u| first drops to half its peak beyond the peak.
double half_width(const Field &u) {
  const auto &r = u.grid->nodes();
  Eigen::Index jmax = 0;
  const double peak = u.values.cwiseAbs().maxCoeff(&jmax);
  if (peak == 0.0)
    return 0.0;
  for (Eigen::Index j = jmax + 1; j < u.values.size(); ++j) {
    const double a = std::abs(u.values[j]);
    if (a <= 0.5 * peak) {
      const double b = std::abs(u.values[j - 1]);
      const double th = (b - 0.5 * peak) / (b - a);
      return r[j - 1] + th * (r[j] - r[j - 1]);
    }
  }
  return u.grid->R();
}

/// v(r) = t^theta u(t r) on the same grid, zero beyond R; used to move seeds
/// between gauges, so reading past the cutoff is acceptable here.
Field compress(const Field &u, double t) {
  const double theta = u.grid->exponents().theta;
  return {u.grid, std::pow(t, theta) * interpolate_at(u, t * u.grid->nodes())};
}

/// tau u with I(tau u) = level; I(tau u) = a x / 2 + b x^2 / 4 for x = tau^2.
Field to_level(const Field &u, double level) {
  const double a = frac_seminorm_sq(u);
  const double b = u.grid->exponents().c_alpha * coulomb_energy(u);
  if (!(a + b > 0))
    throw SolverError("degenerate seed: zero field cannot be normalized");
  const double x = 2.0 * level / (0.5 * a + std::sqrt(0.25 * a * a + b * level));
  return std::sqrt(x) * u;
}

void normalize_sign(Field &u) {
  if (u.values.size() && u.values[0] < 0)
    u.values = -u.values;
}

struct Deflation {
  std::vector<Eigen::VectorXd> modes;  // L^2-normalized node values
  double kappa = 0;
};

struct AscentResult {
  Field u;
  double lambda = 0;
  double residual = 0;
  double reference = 0;
  int iterations = 0;
  bool stalled = false;
  std::vector<double> trace;
};

/// Projected ascent of J (minus the deflation penalty) on {I = level}.
AscentResult eigen_ascent(Field u, double level, double stop_rel, int max_iter,
                          const SolverOptions &opts, const Deflation *defl = nullptr,
                          std::optional<double> reference = std::nullopt) {
  const auto &w = u.grid->weights();
  auto overlaps = [&](const Field &v) {
    std::vector<double> c;
    if (defl)
      for (const auto &e : defl->modes)
        c.push_back((w.array() * v.values.array() * e.array()).sum());
    return c;
  };
  auto objective = [&](const Field &v) {
    double G = J_functional(v);
    if (defl)
      for (double c : overlaps(v))
        G -= 0.5 * defl->kappa * c * c;
    return G;
  };

  AscentResult res;
  u = to_level(u, level);
  double eta = 1.0;
  int it = 0;
  double r = 0, lam = 0;
  for (;; ++it) {
    const DualField A = apply_A(u);
    DualField Bt = apply_B(u);
    if (defl) {
      const auto c = overlaps(u);
      for (std::size_t i = 0; i < c.size(); ++i)
        Bt.values -= defl->kappa * c[i] * defl->modes[i];
    }
    const double den = pairing(Bt, u);
    if (!(den > 0))
      throw SolverError("deflated ascent lost positivity of <B u, u>");
    lam = pairing(A, u) / den;
    const DualField g{u.grid, A.values - lam * Bt.values};
    r = dual_norm(g);
    if (it == 0)
      res.reference = reference.value_or(r);
    if (r <= stop_rel * res.reference || it >= max_iter)
      break;
    const Field d = -precondition(g);
    const double G0 = objective(u);
    res.trace.push_back(J_functional(u));
    bool accepted = false;
    while (eta >= kMinStep) {
      Field un = to_level(Field{u.grid, u.values + eta * d.values}, level);
      if (objective(un) >= G0 + opts.armijo_c * eta * r * r / lam) {
        u = std::move(un);
        accepted = true;
        break;
      }
      eta *= opts.armijo_shrink;
    }
    if (!accepted) {
      res.stalled = true;
      break;
    }
    eta *= 2.0;
  }
  res.trace.push_back(J_functional(u));
  res.u = std::move(u);
  res.lambda = lam;
  res.residual = r;
  res.iterations = it;
  return res;
}

struct DescentResult {
  Field start;
  Field u;
  double residual = 0;
  double reference = 0;
  int iterations = 0;
  bool stalled = false;
  std::vector<double> trace;
};

/// Preconditioned Armijo descent on Phi.
DescentResult phi_descent(Field u, const NonlinearitySpec &f, double stop_rel, int max_iter,
                          const SolverOptions &opts) {
  DescentResult res;
  double eta = 1.0;
  int it = 0;
  double r = 0;
  double P0 = Phi(u, f);
  for (;; ++it) {
    const Gradient g = grad_Phi_preconditioned(u, f);
    r = dual_norm(g.strong);
    if (it == 0)
      res.reference = r;
    res.trace.push_back(P0);
    if (r <= stop_rel * res.reference || it >= max_iter || r == 0.0)
      break;
    bool accepted = false;
    while (eta >= kMinStep) {
      Field un{u.grid, u.values - eta * g.descent.values};
      const double Pn = Phi(un, f);
      if (Pn <= P0 - opts.armijo_c * eta * r * r) {
        u = std::move(un);
        P0 = Pn;
        accepted = true;
        break;
      }
      eta *= opts.armijo_shrink;
    }
    if (!accepted) {
      res.stalled = true;
      break;
    }
    eta *= 2.0;
  }
  res.u = std::move(u);
  res.residual = r;
  res.iterations = it;
  return res;
}

SolveReport make_report(const std::string &method, Field u, const NonlinearitySpec &f,
                        std::optional<double> lambda, double reference, int iterations,
                        const SolverOptions &opts) {
  SolveReport rep;
  rep.method = method;
  normalize_sign(u);
  rep.solution = std::move(u);
  rep.multiplier = lambda;
  rep.residual_reference = reference;
  rep.iterations = iterations;
  rep.seed_descriptor = opts.seed.describe();
  refresh_report(rep, f);
  rep.converged = rep.residual_dual <= opts.tol * reference;
  return rep;
}

/// Positive power and damped terms; weighted terms would need the weight
/// profile dilated as well.
bool gaugeable(const NonlinearitySpec &f) {
  if (f.empty())
    return false;
  for (const auto &t : f.terms())
    if (t.kind == TermKind::WeightedPower || !(t.coef > 0))
      return false;
  return true;
}

/// Coefficients c_q tau^{theta q - N - sigma} and damping scales
/// kappa tau^theta: Phi on grid R/tau pulled back to grid R (up to the
/// overall factor tau^sigma).
NonlinearitySpec gauged(const NonlinearitySpec &f, const ExponentTable &e, int N,
                        double tau) {
  std::vector<NonlinearTerm> terms = f.terms();
  for (auto &t : terms) {
    t.coef *= std::pow(tau, e.theta * t.q - N - e.sigma);
    t.kappa *= std::pow(tau, e.theta);
  }
  return NonlinearitySpec(std::move(terms));
}

bool has_scaled_term(const NonlinearitySpec &f, const ExponentTable &e) {
  for (const auto &t : f.terms())
    if (std::abs(t.q - e.two_star_s_alpha) <= 1e-12 * e.two_star_s_alpha)
      return true;
  return false;
}

void check_subscaled(const NonlinearitySpec &f, const ExponentTable &e) {
  f.validate(e);
  const auto cls = classify_nonlinearity(f, e);
  if (cls.tag != GrowthClass::Subscaled)
    throw UnsupportedRegime(fmt::format(
        "regime mismatch: f is {} (top exponent {:.6g}, 2*_(s,alpha) = {:.6g}); "
        "minimize_subscaled needs a subscaled f",
        to_string(cls.tag), cls.top_exponent, e.two_star_s_alpha));
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    const auto &t = f.terms()[i];
    const double top = t.growth_exponent();
    const double low = t.q;
    if (!(top < e.two_star_s_alpha) || !(low > e.p_rad))
      throw UnsupportedRegime(fmt::format(
          "regime mismatch: term {} has growth range [{:.6g}, {:.6g}] outside "
          "(p_rad, 2*_(s,alpha)) = ({:.6g}, {:.6g})",
          i, low, top, e.p_rad, e.two_star_s_alpha));
  }
}

/// Best of several starts of phi_descent; starts with Phi >= 0 are first
/// pushed along the amplitude direction towards a negative value if one exists.
struct MultiStart {
  DescentResult best;
  double best_phi = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  bool found = false;
};

MultiStart multi_start(const std::vector<Field> &starts, const NonlinearitySpec &f,
                       double stop_rel, const SolverOptions &opts) {
  MultiStart ms;
  for (const auto &s0 : starts) {
    if (s0.is_zero() || !s0.finite())
      continue;
    Field s = s0;
    if (Phi(s, f) >= 0) {
      double best_a = 0, best_v = 0;
      for (double a = 1.0 / 1024; a <= 1024.0; a *= 2.0) {
        const double v = Phi(a * s0, f);
        if (v < best_v) {
          best_v = v;
          best_a = a;
        }
      }
      if (best_a == 0)
        continue;
      s = best_a * s0;
    }
    DescentResult d = phi_descent(s, f, stop_rel, opts.max_iter, opts);
    d.start = std::move(s);
    ms.total_iterations += d.iterations;
    const double v = Phi(d.u, f);
    if (v < ms.best_phi) {
      ms.best_phi = v;
      ms.best = std::move(d);
      ms.found = true;
    }
  }
  return ms;
}

} // namespace

Field Seed::realize(const GridPtr &g) const {
  switch (kind) {
  case Kind::Gaussian:
    return Field::sample(g, [w = width](double r) { return std::exp(-(r / w) * (r / w)); });
  case Kind::Bump:
    return Field::sample(g, [w = width](double r) {
      const double x = r / w;
      return x < 1.0 ? (1 - x * x) * (1 - x * x) : 0.0;
    });
  case Kind::File:
    if (!field)
      throw InvalidArgument("file seed without a field");
    if (!(field->grid->params() == g->params()))
      throw GridMismatch("seed field was computed for different (N, s, alpha)");
    return resample(*field, g);
  }
  throw InvalidArgument("unknown seed kind");
}

std::string Seed::describe() const {
  switch (kind) {
  case Kind::Gaussian:
    return fmt::format("gaussian{{width={}}}", width);
  case Kind::Bump:
    return fmt::format("bump{{width={}}}", width);
  case Kind::File:
    return field ? fmt::format("file{{R={},M={}}}", field->grid->R(), field->grid->M())
                 : "file{}";
  }
  return "?";
}

GridSummary summarize(const RadialGrid &g) {
  return {g.params().N, g.params().s, g.params().alpha, g.R(), g.M(), g.h()};
}

void refresh_report(SolveReport &rep, const NonlinearitySpec &f) {
  const Field &u = rep.solution;
  const NonlinearitySpec eff =
      rep.multiplier ? NonlinearitySpec::pure_eigen(*rep.multiplier, u.grid->exponents()) : f;
  const EnergyParts parts = energy_parts(u);
  rep.I = parts.I;
  rep.J = parts.J;
  rep.energy = parts.I - F_integral(u, eff);
  rep.residual_dual = dual_norm(grad_Phi(u, eff));
  rep.nehari = nehari_residual(u, eff);
  rep.pohozaev_rel = eff.autonomous() ? pohozaev_residual(u, eff).pohozaev_rel : kNaN;
  rep.grid = summarize(*u.grid);
  if (rep.multiplier)
    rep.fiber_level = parts.I;
}

SolveReport eigen1(const GridPtr &grid, const SolverOptions &opts) {
  require_above(*grid);
  Field seed = opts.seed.realize(grid);
  if (seed.is_zero() || !seed.finite())
    throw SolverError("degenerate seed: zero or non-finite initial field");

  const double sigma = grid->exponents().sigma;
  double level = 1.0;
  Field u = seed;
  int iterations = 0;
  std::vector<std::string> warnings;

  if (opts.gauge_width > 0) {
    // Move along the fiber until the profile is resolved by ~gauge_width nodes.
    const double target = opts.gauge_width * grid->h();
    AscentResult rough = eigen_ascent(u, level, 1e-3, std::min(opts.max_iter, 2000), opts);
    iterations += rough.iterations;
    u = rough.u;
    for (int pass = 0; pass < 4; ++pass) {
      const double ratio = half_width(u) / target;
      if (!(ratio > 0))
        throw SolverError("degenerate seed: ascent collapsed");
      if (std::abs(ratio - 1.0) <= 0.2)
        break;
      level *= std::pow(ratio, sigma);
      u = compress(u, ratio);
      rough = eigen_ascent(u, level, 1e-3, std::min(opts.max_iter, 2000), opts);
      iterations += rough.iterations;
      u = rough.u;
    }
  }

  // reference: the seed's residual on the final level set
  const Field s0 = to_level(seed, level);
  const double lam0 = detail::rayleigh_lambda(s0);
  const double reference =
      dual_norm(DualField{grid, apply_A(s0).values - lam0 * apply_B(s0).values});

  const double stop = opts.newton_polish ? std::max(kNewtonSwitch, opts.tol) : opts.tol;
  AscentResult fin = eigen_ascent(u, level, stop, opts.max_iter, opts, nullptr, reference);
  iterations += fin.iterations;
  u = fin.u;
  double lam = fin.lambda;
  if (opts.newton_polish) {
    auto nt = detail::newton_eigen(u, level, 1e-4 * opts.tol * reference, 20);
    iterations += nt.iterations;
    u = nt.u;
    lam = detail::rayleigh_lambda(u);
  }
  if (fin.stalled)
    warnings.push_back("line search stalled during ascent");

  SolveReport rep = make_report("eigen1", u, {}, lam, reference, iterations, opts);
  rep.objective_trace = std::move(fin.trace);
  rep.warnings = std::move(warnings);
  rep.label = "lambda_1";
  return rep;
}

Field manifold_representative(const SolveReport &rep) {
  return project_to_M_exact(rep.solution);
}

std::vector<SolveReport> eigen_deflated(const GridPtr &grid, int k, const SolverOptions &opts) {
  if (k < 1)
    throw InvalidArgument("eigen_deflated needs k >= 1");
  std::vector<SolveReport> out;
  out.push_back(eigen1(grid, opts));
  out.back().label = "candidate 1 (lambda_1)";
  if (k == 1)
    return out;

  const double level = *out.front().fiber_level;
  const auto &w = grid->weights();
  auto l2normalized = [&](const Field &v) {
    return Eigen::VectorXd(v.values / std::sqrt(l2_inner(v, v)));
  };
  Deflation defl;
  defl.modes.push_back(l2normalized(out.front().solution));
  const Field &u1 = out.front().solution;
  // penalty of the order of 10 J per unit overlap
  defl.kappa = 10.0 * J_functional(u1) / l2_inner(u1, u1);

  const double width = half_width(u1);
  for (int cand = 2; cand <= k; ++cand) {
    bool found = false;
    for (int attempt = 0; attempt < 4 && !found; ++attempt) {
      // seed: a wider Gaussian with the known modes projected out
      const double sw = width * (1.0 + cand + attempt);
      Field s = Field::sample(grid, [sw](double r) { return std::exp(-(r / sw) * (r / sw)); });
      for (const auto &e : defl.modes)
        s.values -= (w.array() * s.values.array() * e.array()).sum() * e;
      if (s.is_zero())
        continue;
      Deflation local = defl;
      AscentResult pen;
      try {
        for (int halving = 0; halving < 3; ++halving) {
          pen = eigen_ascent(s, level, 1e-3, opts.max_iter, opts, &local);
          if (!pen.stalled)
            break;
          local.kappa *= 0.5;  // stagnation
        }
      } catch (const SolverError &) {
        continue;  // penalty dominated this seed
      }
      auto nt = detail::newton_eigen(pen.u, level, 1e-4 * opts.tol * pen.reference, 30);
      Field v = nt.u;
      const double lam = detail::rayleigh_lambda(v);
      const Eigen::VectorXd ev = l2normalized(v);
      bool distinct = true;
      for (std::size_t i = 0; i < defl.modes.size(); ++i) {
        const double ov = std::abs((w.array() * ev.array() * defl.modes[i].array()).sum());
        if (ov > 0.99 || std::abs(lam - *out[i].multiplier) <= 1e-6 * std::abs(lam))
          distinct = false;
      }
      if (!distinct)
        continue;
      SolverOptions o = opts;
      o.seed = Seed::gaussian(sw);
      SolveReport rep = make_report("eigen-deflated", v, {}, lam, pen.reference,
                                    pen.iterations + nt.iterations, o);
      if (!rep.converged)
        continue;
      rep.label = fmt::format("candidate {} (uncertified ordering)", cand);
      if (lam < *out.front().multiplier * (1 - 1e-2))
        rep.warnings.push_back("candidate below lambda_1: first solve was not the minimum");
      defl.modes.push_back(ev);
      out.push_back(std::move(rep));
      found = true;
    }
    if (!found) {
      out.front().warnings.push_back(
          fmt::format("only {} distinct candidates found (requested {})", out.size(), k));
      break;
    }
  }
  return out;
}

SolveReport minimize_subscaled(const GridPtr &grid, const NonlinearitySpec &f,
                               const SolverOptions &opts) {
  require_above(*grid);
  const auto &e = grid->exponents();
  if (f.empty()) {
    SolveReport rep = make_report("minimize", Field::zeros(grid), f, std::nullopt, 0.0, 0, opts);
    rep.converged = true;
    return rep;
  }
  check_subscaled(f, e);

  const int N = grid->params().N;
  const double stop = opts.newton_polish ? std::max(kNewtonSwitch, opts.tol) : opts.tol;
  const double target = opts.gauge_width * grid->h();
  const bool gauge = opts.gauge_width > 0 && gaugeable(f);

  Field user_seed = opts.seed.realize(grid);
  double tau = 1.0;
  std::vector<Field> starts;
  bool warm = false;

  if (gauge) {
    const auto &sf = opts.seed.field;
    if (opts.seed.kind == Seed::Kind::File && sf && sf->grid->M() == grid->M() &&
        sf->grid->params() == grid->params()) {
      // warm start from a physical field on grid R/tau: invert the dilation exactly
      tau = grid->R() / sf->grid->R();
      user_seed = Field(grid, std::pow(tau, -e.theta) * sf->values);
      warm = true;
    } else if (has_scaled_term(f, e)) {
      // negative energy needs a shape close to the first eigenfunction; pick
      // tau and amplitude minimizing the physical energy tau^sigma Phi~
      SolverOptions eo;
      eo.gauge_width = opts.gauge_width;
      const Field u1 = eigen1(grid, eo).solution;
      double best = 0.0, best_a = 0.0;
      for (double x = -200.0; x <= 50.0; x += 0.5) {
        const NonlinearitySpec fx = gauged(f, e, N, std::exp(x));
        for (double a = 1.0 / 1024; a <= 1024.0; a *= 2.0) {
          const double v = std::exp(e.sigma * x) * Phi(a * u1, fx);
          if (v < best) {
            best = v;
            best_a = a;
            tau = std::exp(x);
          }
        }
      }
      if (best_a == 0.0)
        throw SolverError("no dilation of the first eigenfunction has negative energy");
      starts.push_back(best_a * u1);
    } else {
      // tau with int F~(G) = c I(G) for a resolved Gaussian G; c = 2 unless
      // damping caps int F~(G) below that
      const Field G =
          Field::sample(grid, [w = 2 * target](double r) { return std::exp(-(r / w) * (r / w)); });
      const double IG = I_functional(G);
      double lo = -200.0, hi = 50.0;
      const double c = std::min(2.0, 0.5 * F_integral(G, gauged(f, e, N, std::exp(lo))) / IG);
      auto excess = [&](double x) { return F_integral(G, gauged(f, e, N, std::exp(x))) - c * IG; };
      if (!(excess(lo) > 0 && excess(hi) < 0))
        throw SolverError("could not bracket the subscaled gauge");
      for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0 ? lo : hi) = mid;
      }
      tau = std::exp(0.5 * (lo + hi));
      starts.push_back(G);
    }
  }

  starts.push_back(user_seed);
  if (!warm)
    for (double mult : {0.5, 1.0, 2.0, 4.0}) {
      const double w = (gauge ? target : grid->R() / 8.0) * mult;
      starts.push_back(
          Field::sample(grid, [w](double r) { return std::exp(-(r / w) * (r / w)); }));
    }

  int iterations = 0;
  NonlinearitySpec fg = gauge ? gauged(f, e, N, tau) : f;
  MultiStart ms = multi_start(starts, fg, stop, opts);
  iterations += ms.total_iterations;
  if (!ms.found)
    throw SolverError("no start with a negative energy was found");
  // tolerance scale: initial residual of the winning start, as a physical field
  const double reference =
      gauge ? dual_norm(grad_Phi(scale_exact(ms.best.start, tau), f)) : ms.best.reference;

  if (gauge) {
    for (int pass = 0; pass < 6; ++pass) {
      const double ratio = half_width(ms.best.u) / target;
      if (!(ratio > 0) || std::abs(ratio - 1.0) <= 0.2)
        break;
      tau /= ratio;
      fg = gauged(f, e, N, tau);
      MultiStart next = multi_start({compress(ms.best.u, ratio)}, fg, stop, opts);
      iterations += next.total_iterations;
      if (!next.found)
        break;
      ms = std::move(next);
    }
  }

  Field u = ms.best.u;
  if (opts.newton_polish) {
    auto nt = detail::newton_critical(u, fg, 1e-4 * opts.tol * ms.best.reference, 30);
    // keep the polished point only if it stayed at a negative level
    if (Phi(nt.u, fg) < 0) {
      u = nt.u;
      iterations += nt.iterations;
    }
  }

  SolveReport rep;
  if (gauge) {
    rep = make_report("minimize", scale_exact(u, tau), f, std::nullopt, reference, iterations,
                      opts);
    rep.dilation = tau;
  } else {
    rep = make_report("minimize", u, f, std::nullopt, reference, iterations, opts);
  }
  rep.objective_trace = std::move(ms.best.trace);
  if (ms.best.stalled)
    rep.warnings.push_back("line search stalled during descent");
  if (!(rep.energy < 0))
    rep.warnings.push_back("minimizer did not reach a negative level");
  return rep;
}

Field mountain_endpoint(const GridPtr &grid, const NonlinearitySpec &f, const Seed &seed) {
  const Field u0 = seed.realize(grid);
  if (u0.is_zero())
    throw SolverError("degenerate seed: zero endpoint direction");
  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (Phi(hi * u0, f) > 0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60)
      throw SolverError("no amplitude with Phi <= 0 along the seed direction");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (Phi(mid * u0, f) > 0 ? lo : hi) = mid;
  }
  return (1.1 * hi) * u0;
}

bool is_critical_family(const NonlinearitySpec &f, const ExponentTable &exps) {
  for (const auto &t : f.terms())
    if (t.kind == TermKind::Power && t.coef != 0.0 &&
        std::abs(t.q - exps.two_star_s) <= 1e-12 * exps.two_star_s)
      return true;
  return false;
}

SolveReport mountain_pass(const GridPtr &grid, const NonlinearitySpec &f, const Field &e,
                          const SolverOptions &opts) {
  require_above(*grid);
  const auto &ex = grid->exponents();
  f.validate(ex);
  const bool critical = is_critical_family(f, ex);
  if (classify_nonlinearity(f, ex).tag != GrowthClass::Superscaled && !critical)
    throw UnsupportedRegime("mountain_pass needs a superscaled f or the critical family");
  if (!e.grid->same_as(*grid))
    throw GridMismatch("endpoint lives on a different grid");
  if (e.is_zero() || Phi(e, f) > 0)
    throw PreconditionError("endpoint must be nonzero with Phi(e) <= 0");
  const int P = opts.path_nodes;
  if (P < 4)
    throw InvalidArgument("path needs at least 4 nodes");

  auto hnorm = [](const Field &v) { return std::sqrt(std::max(h_inner(v, v), 0.0)); };
  std::vector<Field> path;
  for (int i = 0; i < P; ++i)
    path.push_back((static_cast<double>(i) / (P - 1)) * e);

  auto respread = [&](int lo, int hi) {
    const int n = hi - lo + 1;
    if (n < 3)
      return;
    std::vector<double> L(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i)
      L[i] = L[i - 1] + hnorm(path[lo + i] - path[lo + i - 1]);
    std::vector<Field> seg(path.begin() + lo, path.begin() + hi + 1);
    for (int i = 1; i < n - 1; ++i) {
      const double tv = L.back() * i / (n - 1);
      int j = static_cast<int>(std::upper_bound(L.begin(), L.end(), tv) - L.begin()) - 1;
      j = std::clamp(j, 0, n - 2);
      const double span = L[j + 1] - L[j];
      const double th = span > 0 ? (tv - L[j]) / span : 0.0;
      path[lo + i] = Field{grid, (1 - th) * seg[j].values + th * seg[j + 1].values};
    }
  };

  double eta = 0.5, prev = std::numeric_limits<double>::infinity(), reference = 0;
  const double stop = opts.newton_polish ? 1e-2 : opts.tol;
  int it = 0, k = 1;
  std::vector<double> trace;
  for (;; ++it) {
    std::vector<double> vals(static_cast<std::size_t>(P));
    for (int i = 0; i < P; ++i)
      vals[i] = Phi(path[i], f);
    k = static_cast<int>(std::max_element(vals.begin() + 1, vals.end() - 1) - vals.begin());
    // coarse strings can slip through the ridge between two nodes; pull a node back onto it
    int seg = -1;
    double top = vals[k];
    Field mid;
    for (int i = 0; i + 1 < P; ++i) {
      Field m{grid, 0.5 * (path[i].values + path[i + 1].values)};
      const double v = Phi(m, f);
      if (v > top) {
        top = v;
        seg = i;
        mid = std::move(m);
      }
    }
    if (seg >= 0) {
      k = seg == 0 ? 1 : (seg + 1 == P - 1 ? seg : (vals[seg] > vals[seg + 1] ? seg : seg + 1));
      path[k] = std::move(mid);
      vals[k] = top;
      respread(0, k);
      respread(k, P - 1);
    }
    trace.push_back(vals[k]);
    if (!(vals[k] > 0))
      throw SolverError("no pass detected: path maximum collapsed to the zero level");
    const DualField gk = grad_Phi(path[k], f);
    const double r = dual_norm(gk);
    if (it == 0)
      reference = r;
    if (r <= stop * reference || it >= opts.max_iter)
      break;
    if (r > 1.5 * prev)
      eta *= 0.5;
    prev = r;
    std::vector<Field> next = path;
    for (int i = 1; i < P - 1; ++i) {
      Field tau = path[i + 1] - path[i - 1];
      const double tn = hnorm(tau);
      if (tn == 0)
        continue;
      tau.values /= tn;
      const DualField g = grad_Phi(path[i], f);
      const Field d = precondition(g);
      // tangential component in the H metric: (P g, tau)_H = <g, tau>
      const double comp = pairing(g, tau);
      Field step{grid, d.values - (i == k ? 2.0 : 1.0) * comp * tau.values};
      const double sp = std::min(hnorm(path[i] - path[i - 1]), hnorm(path[i + 1] - path[i]));
      const double nrm = hnorm(step);
      const double fac = std::min(eta, 0.3 * sp / std::max(nrm, 1e-300));
      next[i] = Field{grid, path[i].values - fac * step.values};
    }
    path = std::move(next);
    respread(0, k);
    respread(k, P - 1);
  }

  Field u = path[k];
  int iterations = it;
  if (opts.newton_polish) {
    auto nt = detail::newton_critical(u, f, 1e-4 * opts.tol * reference, 30);
    // the trivial critical point also has Phi >= 0; keep the polish only near the pass level
    const double level = Phi(u, f), polished = Phi(nt.u, f);
    if (polished > 0 && std::abs(polished - level) <= 0.25 * level) {
      u = nt.u;
      iterations += nt.iterations;
    }
  }
  if (!(Phi(u, f) > 0))
    throw SolverError("no pass detected: candidate has non-positive level");

  SolveReport rep = make_report("mountain-pass", u, f, std::nullopt, reference, iterations, opts);
  rep.objective_trace = std::move(trace);
  rep.morse_index = detail::morse_index(detail::hessian_Phi(rep.solution, f), grid->weights());
  if (critical) {
    const double S =
        opts.sobolev_constant ? *opts.sobolev_constant : estimate_sobolev_constant(grid).value;
    rep.ps_threshold = ps_threshold(grid->params(), S);
    rep.above_threshold = rep.energy >= *rep.ps_threshold;
  }
  return rep;
}

BranchTable sweep(const GridPtr &grid, const NonlinearitySpec &f, std::size_t term,
                  double from, double to, int steps, SweepMethod method,
                  const SolverOptions &opts, bool warm_start) {
  if (steps < 1)
    throw InvalidArgument("sweep needs at least one step");
  if (term >= f.terms().size())
    throw InvalidArgument("sweep term index out of range");
  BranchTable table;
  std::optional<Field> previous;
  for (int i = 0; i < steps; ++i) {
    const double param = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    BranchRow row;
    row.param = param;
    try {
      const NonlinearitySpec fi = f.with_coefficient(term, param);
      SolverOptions o = opts;
      if (warm_start && previous)
        o.seed = Seed::from_field(*previous);
      SolveReport rep;
      if (method == SweepMethod::Minimize) {
        rep = minimize_subscaled(grid, fi, o);
      } else {
        const Field e = mountain_endpoint(grid, fi, o.seed);
        rep = mountain_pass(grid, fi, e, o);
      }
      row.converged = rep.converged;
      row.energy = rep.converged ? rep.energy : kNaN;
      row.I = rep.I;
      row.J = rep.J;
      row.multiplier = rep.multiplier ? *rep.multiplier : kNaN;
      row.residual = rep.residual_dual;
      row.iterations = rep.iterations;
      if (rep.converged)
        previous = rep.solution;
    } catch (const Error &) {
      row.converged = false;
      row.energy = row.I = row.J = row.multiplier = row.residual = kNaN;
    }
    table.push_back(row);
  }
  return table;
}

} // namespace fcs
