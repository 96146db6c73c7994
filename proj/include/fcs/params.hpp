#pragma once

#include <string>

namespace fcs {

class NonlinearitySpec;

/// |4s + alpha - N| below this is treated as the forbidden equality.
inline constexpr double kDegeneracyTol = 1e-9;

enum class Regime { Above, Below };

/// Problem parameters (N, s, alpha) of the fractional Schrodinger-Poisson-Slater
/// equation. Construct through make(), which enforces every invariant.
struct ProblemParams {
  int N = 3;
  double s = 0.75;
  double alpha = 2.0;

  /// Throws InvalidArgument for out-of-range values and DegenerateExponents
  /// when 4s + alpha == N.
  static ProblemParams make(int N, double s, double alpha);

  bool operator==(const ProblemParams &) const = default;
};

/// Derived exponents and constants; every formula downstream reads from here.
struct ExponentTable {
  double theta = 0;            ///< (2s + alpha) / 2, the dilation weight of u_t
  double sigma = 0;            ///< 4s + alpha - N, homogeneity along fibers
  double p_rad = 0;            ///< lower end of the radial embedding range
  double two_star_s = 0;       ///< 2N / (N - 2s)
  double two_star_s_alpha = 0; ///< 2(4s + alpha) / (2s + alpha)
  double c_alpha = 0;          ///< Riesz constant of I_alpha
  Regime regime = Regime::Above;
};

ExponentTable compute_exponents(const ProblemParams &params);

/// Riesz constant C_alpha = Gamma((N-alpha)/2) / (2^alpha pi^{N/2} Gamma(alpha/2)).
double riesz_constant(int N, double alpha);

/// Surface area of the unit sphere S^{N-1}.
double unit_sphere_area(int N);

struct EmbeddingInfo {
  bool continuous = false;
  bool compact = false;
};

/// Embedding E -> L^p for the above-threshold regime.
EmbeddingInfo check_embedding(double p, const ExponentTable &exps);

enum class GrowthClass { Subscaled, AsymptoticallyScaled, Superscaled };

struct NonlinearityRegime {
  GrowthClass tag = GrowthClass::Subscaled;
  double l_infinity = 0;  ///< limit of f(t) / (|t|^{2*_{s,a}-2} t); +-inf encoded by sign
  int sign = 0;           ///< sign of the leading coefficient (superscaled only)
  double top_exponent = 0;
};

/// Classification by the top growth exponent relative to 2*_{s,alpha}.
NonlinearityRegime classify_nonlinearity(const NonlinearitySpec &spec,
                                         const ExponentTable &exps);

std::string to_string(GrowthClass c);
std::string to_string(Regime r);

} // namespace fcs
