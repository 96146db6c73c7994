#include "fcs/params.hpp"

#include "fcs/error.hpp"
#include "fcs/nonlinearity.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fmt/format.h>
#include <map>

namespace fcs {

namespace {
constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kExponentTieTol = 1e-12;
} // namespace

ProblemParams ProblemParams::make(int N, double s, double alpha) {
  if (N < 2)
    throw InvalidArgument(fmt::format("dimension N={} must be >= 2", N));
  if (!(s > 0.0 && s < 1.0))
    throw InvalidArgument(fmt::format("fractional order s={} must lie in (0,1)", s));
  if (!(alpha > 1.0 && alpha < N))
    throw InvalidArgument(
        fmt::format("Riesz order alpha={} must lie in (1,N) with N={}", alpha, N));
  if (std::abs(4.0 * s + alpha - N) < kDegeneracyTol)
    throw DegenerateExponents(fmt::format(
        "degenerate exponent coincidence: 4s+alpha = N ({}*4 + {} = {})", s, alpha, N));
  return ProblemParams{N, s, alpha};
}

double riesz_constant(int N, double alpha) {
  using boost::math::tgamma;
  return tgamma(0.5 * (N - alpha)) /
         (std::pow(2.0, alpha) * std::pow(kPi, 0.5 * N) * tgamma(0.5 * alpha));
}

double unit_sphere_area(int N) {
  return 2.0 * std::pow(kPi, 0.5 * N) / boost::math::tgamma(0.5 * N);
}

ExponentTable compute_exponents(const ProblemParams &params) {
  const double N = params.N;
  const double s = params.s;
  const double a = params.alpha;
  if (std::abs(4.0 * s + a - N) < kDegeneracyTol)
    throw DegenerateExponents("degenerate exponent coincidence: 4s+alpha = N");

  ExponentTable t;
  t.theta = 0.5 * (2.0 * s + a);
  t.sigma = 4.0 * s + a - N;
  t.two_star_s = 2.0 * N / (N - 2.0 * s);
  t.two_star_s_alpha = 2.0 * (4.0 * s + a) / (2.0 * s + a);
  t.p_rad = 2.0 + 4.0 * s * (N - a) / (2.0 * s * (N + a - 2.0) + N - a);
  t.c_alpha = riesz_constant(params.N, a);
  t.regime = t.sigma > 0 ? Regime::Above : Regime::Below;
  return t;
}

EmbeddingInfo check_embedding(double p, const ExponentTable &exps) {
  if (!(p >= 1.0))
    throw InvalidArgument(fmt::format("exponent p={} must be >= 1", p));
  if (exps.regime != Regime::Above)
    throw UnsupportedRegime("below-regime ranges not supported");
  EmbeddingInfo e;
  e.continuous = p > exps.p_rad && p <= exps.two_star_s;
  e.compact = p > exps.p_rad && p < exps.two_star_s;
  return e;
}

NonlinearityRegime classify_nonlinearity(const NonlinearitySpec &spec,
                                         const ExponentTable &exps) {
  // Sum coefficients per growth exponent; the largest exponent with a
  // non-vanishing coefficient decides.
  std::map<double, double> by_exponent;
  for (const auto &term : spec.terms()) {
    if (term.coef == 0.0)
      continue;
    const double q = term.growth_exponent();
    auto it = by_exponent.end();
    for (auto jt = by_exponent.begin(); jt != by_exponent.end(); ++jt)
      if (std::abs(jt->first - q) <= kExponentTieTol * std::max(1.0, q))
        it = jt;
    if (it == by_exponent.end())
      by_exponent.emplace(q, term.coef);
    else
      it->second += term.coef;
  }

  NonlinearityRegime out;
  for (auto it = by_exponent.rbegin(); it != by_exponent.rend(); ++it) {
    if (it->second == 0.0)
      continue;
    const double q = it->first;
    const double c = it->second;
    out.top_exponent = q;
    const double crit = exps.two_star_s_alpha;
    if (std::abs(q - crit) <= kExponentTieTol * crit) {
      out.tag = GrowthClass::AsymptoticallyScaled;
      out.l_infinity = c;
    } else if (q < crit) {
      out.tag = GrowthClass::Subscaled;
      out.l_infinity = 0.0;
    } else {
      out.tag = GrowthClass::Superscaled;
      out.sign = c > 0 ? 1 : -1;
      out.l_infinity = c > 0 ? HUGE_VAL : -HUGE_VAL;
    }
    return out;
  }
  // f == 0
  return out;
}

std::string to_string(GrowthClass c) {
  switch (c) {
  case GrowthClass::Subscaled:
    return "subscaled";
  case GrowthClass::AsymptoticallyScaled:
    return "asymptotically-scaled";
  case GrowthClass::Superscaled:
    return "superscaled";
  }
  return "?";
}

std::string to_string(Regime r) { return r == Regime::Above ? "above" : "below"; }

} // namespace fcs
