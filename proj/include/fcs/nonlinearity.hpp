#pragma once

#include <math.h>  // pchip.hpp calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <memory>
#include <string>
#include <vector>

namespace fcs {

struct ExponentTable;

/// Radial weight a(r) given by samples; monotone cubic (PCHIP) in between,
/// zero outside the sampled range.
class RadialProfile {
public:
  RadialProfile(std::vector<double> radii, std::vector<double> values);

  double at(double r) const;
  const std::vector<double> &radii() const { return radii_; }
  const std::vector<double> &values() const { return values_; }

private:
  std::vector<double> radii_;
  std::vector<double> values_;
  std::shared_ptr<const boost::math::interpolators::pchip<std::vector<double>>> interp_;
};

enum class TermKind { Power, DampedPower, WeightedPower };

std::string to_string(TermKind k);
TermKind term_kind_from_string(const std::string &name);

/// One term coef * g(t) of f; g(t) = |t|^{q-2} t, optionally divided by
/// (1 + (kappa |t|)^gamma) or multiplied by a(|x|).
struct NonlinearTerm {
  TermKind kind = TermKind::Power;
  double coef = 1.0;
  double q = 3.0;
  double gamma = 0.0;
  std::shared_ptr<const RadialProfile> weight;
  double kappa = 1.0;  ///< damping scale; 1 except in dilation-gauged copies

  /// Exponent governing growth at infinity.
  double growth_exponent() const;
};

/// f(|x|, t) as a sum of power-type terms, with the primitive F = int_0^t f.
class NonlinearitySpec {
public:
  NonlinearitySpec() = default;
  explicit NonlinearitySpec(std::vector<NonlinearTerm> terms);

  static NonlinearitySpec power(double coef, double q);
  static NonlinearitySpec damped(double coef, double q, double gamma);
  /// lambda |t|^{2*_{s,a}-2} t: the nonlinear eigenvalue problem as an f.
  static NonlinearitySpec pure_eigen(double lambda, const ExponentTable &exps);
  /// lambda |t|^{2*_{s,a}-2}t + mu |t|^{q6-2}t + |t|^{2*_s-2}t.
  static NonlinearitySpec critical_family(double lambda, double mu, double q6,
                                          const ExponentTable &exps);

  double f(double r, double t) const;
  double F(double r, double t) const;
  /// d f / d t, used by Newton polishing.
  double df(double r, double t) const;

  bool empty() const { return terms_.empty(); }
  bool autonomous() const;
  const std::vector<NonlinearTerm> &terms() const { return terms_; }

  /// Copy with the coefficient of one term replaced (parameter sweeps).
  NonlinearitySpec with_coefficient(std::size_t term, double coef) const;

  /// Rejects exponents q <= p_rad or non-positive damping.
  void validate(const ExponentTable &exps) const;

private:
  std::vector<NonlinearTerm> terms_;
};

/// int_0^T tau^{q-1} / (1 + (kappa tau)^gamma) d tau for T >= 0, from a
/// tabulated ratio (relative error ~1e-13).
double damped_primitive(double T, double q, double gamma, double kappa = 1.0);

} // namespace fcs
