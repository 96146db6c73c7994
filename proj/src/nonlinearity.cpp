#include "fcs/nonlinearity.hpp"

#include "fcs/error.hpp"
#include "fcs/params.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <map>
#include <mutex>
#include <cmath>
#include <fmt/format.h>

namespace fcs {

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
  if (radii_.size() != values_.size())
    throw InvalidArgument("radial profile: radii and values differ in length");
  if (radii_.size() < 4)
    throw InvalidArgument("radial profile needs at least 4 samples");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!std::isfinite(radii_[i]) || !std::isfinite(values_[i]))
      throw InvalidArgument("radial profile: non-finite sample");
    if (radii_[i] < 0 || (i > 0 && radii_[i] <= radii_[i - 1]))
      throw InvalidArgument("radial profile: radii must be non-negative and increasing");
  }
  auto x = radii_;
  auto y = values_;
  interp_ = std::make_shared<const boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(x), std::move(y));
}

double RadialProfile::at(double r) const {
  if (r < radii_.front() || r > radii_.back())
    return 0.0;
  return (*interp_)(r);
}

std::string to_string(TermKind k) {
  switch (k) {
  case TermKind::Power:
    return "power";
  case TermKind::DampedPower:
    return "damped";
  case TermKind::WeightedPower:
    return "weighted";
  }
  return "?";
}

TermKind term_kind_from_string(const std::string &name) {
  if (name == "power")
    return TermKind::Power;
  if (name == "damped" || name == "damped-power")
    return TermKind::DampedPower;
  if (name == "weighted" || name == "weighted-power")
    return TermKind::WeightedPower;
  throw InvalidArgument(
      fmt::format("unknown term kind '{}' (expected power, damped, weighted)", name));
}

double NonlinearTerm::growth_exponent() const {
  return kind == TermKind::DampedPower ? q - gamma : q;
}

namespace {

/// rho(w) = q T^{-q} int_0^T x^{q-1} / (1 + x^gamma) dx with w = gamma log T,
/// so that rho runs from 1 (w -> -inf) to ~ q/(q-gamma) e^{-w}. Tabulated on
/// [-40, 40] with exact slopes d rho/dw = (q/gamma)(1/(1+e^w) - rho).
class DampedRatio {
public:
  static constexpr int kNodes = 4096;
  static constexpr double kLo = -40.0, kHi = 40.0;

  DampedRatio(double q, double gamma) : q_(q), gamma_(gamma) {
    const double dw = (kHi - kLo) / (kNodes - 1);
    std::vector<double> rho(kNodes), slope(kNodes);
    rho[0] = small_y(std::exp(kLo));
    using GL = boost::math::quadrature::gauss<double, 15>;
    for (int i = 1; i < kNodes; ++i) {
      const double Y = std::exp(kLo + i * dw);
      const double v0 = std::exp(-dw / gamma);
      const double add = GL::integrate(
          [&](double v) { return std::pow(v, q - 1.0) / (1.0 + Y * std::pow(v, gamma)); }, v0,
          1.0);
      rho[i] = std::pow(v0, q) * rho[i - 1] + q * add;
    }
    for (int i = 0; i < kNodes; ++i)
      slope[i] = q / gamma * (1.0 / (1.0 + std::exp(kLo + i * dw)) - rho[i]);
    spline_ = std::make_unique<Spline>(std::move(rho), std::move(slope), kLo, dw);
  }

  double operator()(double w) const {
    if (w <= kLo)
      return small_y(std::exp(w));
    if (w >= kHi) {
      // outside the table: direct quadrature (rare)
      const double Y = std::exp(w);
      using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
      return q_ * GK::integrate(
                      [&](double v) {
                        return std::pow(v, q_ - 1.0) / (1.0 + Y * std::pow(v, gamma_));
                      },
                      0.0, 1.0, 20, 1e-13);
    }
    return (*spline_)(w);
  }

private:
  using Spline = boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>;

  double small_y(double Y) const {
    return 1.0 - q_ * Y / (q_ + gamma_) + q_ * Y * Y / (q_ + 2 * gamma_);
  }

  double q_, gamma_;
  std::unique_ptr<Spline> spline_;
};

const DampedRatio &damped_ratio(double q, double gamma) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::unique_ptr<DampedRatio>> cache;
  std::lock_guard lock(mu);
  auto &slot = cache[{q, gamma}];
  if (!slot)
    slot = std::make_unique<DampedRatio>(q, gamma);
  return *slot;
}

} // namespace

double damped_primitive(double T, double q, double gamma, double kappa) {
  if (T <= 0.0)
    return 0.0;
  const double w = gamma * std::log(kappa * T);
  return std::pow(T, q) / q * damped_ratio(q, gamma)(w);
}

NonlinearitySpec::NonlinearitySpec(std::vector<NonlinearTerm> terms)
    : terms_(std::move(terms)) {}

NonlinearitySpec NonlinearitySpec::power(double coef, double q) {
  return NonlinearitySpec({NonlinearTerm{TermKind::Power, coef, q, 0.0, nullptr}});
}

NonlinearitySpec NonlinearitySpec::damped(double coef, double q, double gamma) {
  return NonlinearitySpec({NonlinearTerm{TermKind::DampedPower, coef, q, gamma, nullptr}});
}

NonlinearitySpec NonlinearitySpec::pure_eigen(double lambda, const ExponentTable &exps) {
  return power(lambda, exps.two_star_s_alpha);
}

NonlinearitySpec NonlinearitySpec::critical_family(double lambda, double mu, double q6,
                                                   const ExponentTable &exps) {
  return NonlinearitySpec({
      NonlinearTerm{TermKind::Power, lambda, exps.two_star_s_alpha, 0.0, nullptr},
      NonlinearTerm{TermKind::Power, mu, q6, 0.0, nullptr},
      NonlinearTerm{TermKind::Power, 1.0, exps.two_star_s, 0.0, nullptr},
  });
}

double NonlinearitySpec::f(double r, double t) const {
  const double a = std::abs(t);
  double acc = 0.0;
  for (const auto &term : terms_) {
    if (term.coef == 0.0 || a == 0.0)
      continue;
    double g = std::pow(a, term.q - 2.0) * t;
    if (term.kind == TermKind::DampedPower)
      g /= 1.0 + std::pow(term.kappa * a, term.gamma);
    else if (term.kind == TermKind::WeightedPower)
      g *= term.weight->at(r);
    acc += term.coef * g;
  }
  return acc;
}

double NonlinearitySpec::F(double r, double t) const {
  const double a = std::abs(t);
  double acc = 0.0;
  for (const auto &term : terms_) {
    if (term.coef == 0.0 || a == 0.0)
      continue;
    double G;
    if (term.kind == TermKind::DampedPower)
      G = damped_primitive(a, term.q, term.gamma, term.kappa);
    else
      G = std::pow(a, term.q) / term.q;
    if (term.kind == TermKind::WeightedPower)
      G *= term.weight->at(r);
    acc += term.coef * G;
  }
  return acc;
}

double NonlinearitySpec::df(double r, double t) const {
  const double a = std::abs(t);
  double acc = 0.0;
  for (const auto &term : terms_) {
    if (term.coef == 0.0 || a == 0.0)
      continue;
    double d;
    if (term.kind == TermKind::DampedPower) {
      const double ka = std::pow(term.kappa * a, term.gamma);
      const double damp = 1.0 + ka;
      d = std::pow(a, term.q - 2.0) * ((term.q - 1.0) / damp - term.gamma * ka / (damp * damp));
    } else {
      d = (term.q - 1.0) * std::pow(a, term.q - 2.0);
    }
    if (term.kind == TermKind::WeightedPower)
      d *= term.weight->at(r);
    acc += term.coef * d;
  }
  return acc;
}

bool NonlinearitySpec::autonomous() const {
  for (const auto &term : terms_)
    if (term.kind == TermKind::WeightedPower)
      return false;
  return true;
}

NonlinearitySpec NonlinearitySpec::with_coefficient(std::size_t term, double coef) const {
  if (term >= terms_.size())
    throw InvalidArgument(fmt::format("term index {} out of range ({} terms)", term,
                                      terms_.size()));
  auto copy = *this;
  copy.terms_[term].coef = coef;
  return copy;
}

void NonlinearitySpec::validate(const ExponentTable &exps) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto &t = terms_[i];
    if (!std::isfinite(t.coef) || !std::isfinite(t.q))
      throw InvalidArgument(fmt::format("term {}: non-finite coefficient or exponent", i));
    if (!(t.q > exps.p_rad))
      throw InvalidArgument(
          fmt::format("term {}: exponent q={} must exceed p_rad={:.6f}", i, t.q, exps.p_rad));
    if (t.kind == TermKind::DampedPower && !(t.gamma > 0))
      throw InvalidArgument(fmt::format("term {}: damping gamma={} must be > 0", i, t.gamma));
    if (t.kind == TermKind::WeightedPower && !t.weight)
      throw InvalidArgument(fmt::format("term {}: weighted term without a weight profile", i));
  }
}

} // namespace fcs
