#include "doctest.h"

#include "fcs/error.hpp"
#include "fcs/nonlinearity.hpp"
#include "fcs/params.hpp"
#include "test_util.hpp"

#include <boost/math/constants/constants.hpp>
#include <random>

using namespace fcs;
using fcs::test::rel;

TEST_CASE("exponent table at (3, 0.75, 2)") {
  const auto e = compute_exponents(ProblemParams::make(3, 0.75, 2.0));
  const double pi = boost::math::constants::pi<double>();
  CHECK(rel(e.theta, 1.75) < 1e-12);
  CHECK(rel(e.sigma, 2.0) < 1e-12);
  CHECK(rel(e.two_star_s, 4.0) < 1e-12);
  CHECK(rel(e.two_star_s_alpha, 20.0 / 7.0) < 1e-12);
  CHECK(rel(e.p_rad, 28.0 / 11.0) < 1e-12);
  CHECK(rel(e.c_alpha, 1.0 / (4 * pi)) < 1e-12);
  CHECK(e.regime == Regime::Above);
}

TEST_CASE("exponent table at (2, 0.6, 1.5)") {
  const auto e = compute_exponents(ProblemParams::make(2, 0.6, 1.5));
  CHECK(rel(e.theta, 1.35) < 1e-12);
  CHECK(rel(e.sigma, 1.9) < 1e-12);
  CHECK(rel(e.two_star_s, 5.0) < 1e-12);
  CHECK(rel(e.two_star_s_alpha, 26.0 / 9.0) < 1e-12);
  CHECK(rel(e.p_rad, 58.0 / 23.0) < 1e-12);
}

TEST_CASE("Riesz constant against the N=3 Newton kernel and the unit sphere") {
  // I_2 in R^3 is the Newtonian kernel 1/(4 pi |x|)
  const double pi = boost::math::constants::pi<double>();
  CHECK(rel(riesz_constant(3, 2.0), 1.0 / (4 * pi)) < 1e-14);
  // the fundamental solution of -Delta in R^5 is 1/(3 omega_4 |x|^3)
  CHECK(rel(riesz_constant(5, 2.0), 1.0 / (3 * unit_sphere_area(5))) < 1e-13);
  CHECK(rel(unit_sphere_area(2), 2 * pi) < 1e-15);
  CHECK(rel(unit_sphere_area(3), 4 * pi) < 1e-15);
  CHECK(rel(unit_sphere_area(4), 2 * pi * pi) < 1e-15);
}

TEST_CASE("invalid and degenerate parameters are rejected") {
  CHECK_THROWS_AS(ProblemParams::make(3, 0.25, 2.0), DegenerateExponents);
  CHECK_THROWS_WITH(ProblemParams::make(3, 0.25, 2.0),
                    doctest::Contains("degenerate exponent coincidence"));
  CHECK_THROWS_AS(ProblemParams::make(3, 0.25 + 2e-10, 2.0), DegenerateExponents);
  CHECK_NOTHROW(ProblemParams::make(3, 0.25 + 1e-6, 2.0));
  CHECK_THROWS_AS(ProblemParams::make(1, 0.5, 1.5), InvalidArgument);
  CHECK_THROWS_AS(ProblemParams::make(3, 0.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(ProblemParams::make(3, 1.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(ProblemParams::make(3, 0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ProblemParams::make(3, 0.5, 3.0), InvalidArgument);
}

TEST_CASE("below-threshold parameters are representable but flagged") {
  const auto e = compute_exponents(ProblemParams::make(4, 0.3, 1.5));
  CHECK(e.regime == Regime::Below);
  CHECK(e.sigma < 0);
  CHECK_THROWS_WITH(check_embedding(3.0, e), doctest::Contains("below-regime"));
}

TEST_CASE("exponent chain and identities on random draws") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> Nd(2, 6);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int drawn = 0;
  while (drawn < 10000) {
    const int N = Nd(rng);
    const double s = 0.001 + 0.998 * u01(rng);
    const double alpha = 1.0 + 1e-3 + (N - 1.0 - 2e-3) * u01(rng);
    if (4 * s + alpha <= N + 1e-6)
      continue;
    ++drawn;
    const auto e = compute_exponents(ProblemParams::make(N, s, alpha));
    REQUIRE(e.p_rad < e.two_star_s_alpha);
    REQUIRE(e.two_star_s_alpha < e.two_star_s);
    REQUIRE(rel(e.theta * e.two_star_s_alpha, 4 * s + alpha) < 1e-14);
    REQUIRE(e.sigma > 0);
    REQUIRE(e.c_alpha > 0);
  }
}

TEST_CASE("sigma sign follows the regime flag") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const int N = 2 + static_cast<int>(u01(rng) * 5);
    const double s = 0.01 + 0.98 * u01(rng);
    const double alpha = 1.01 + (N - 1.02) * u01(rng);
    if (std::abs(4 * s + alpha - N) < 1e-6)
      continue;
    const auto e = compute_exponents(ProblemParams::make(N, s, alpha));
    REQUIRE((e.sigma > 0) == (e.regime == Regime::Above));
  }
}

TEST_CASE("classification by top exponent") {
  const auto e = compute_exponents(ProblemParams::make(3, 0.75, 2.0));
  CHECK(classify_nonlinearity(NonlinearitySpec::power(1.0, 2.6), e).tag == GrowthClass::Subscaled);

  const auto as = classify_nonlinearity(NonlinearitySpec::power(3.0, 20.0 / 7.0), e);
  CHECK(as.tag == GrowthClass::AsymptoticallyScaled);
  CHECK(rel(as.l_infinity, 3.0) < 1e-12);

  const auto damped =
      classify_nonlinearity(NonlinearitySpec::damped(2.0, e.two_star_s_alpha, 0.05), e);
  CHECK(damped.tag == GrowthClass::Subscaled);
  CHECK(rel(damped.top_exponent, e.two_star_s_alpha - 0.05) < 1e-12);

  const auto sup = classify_nonlinearity(NonlinearitySpec::power(-1.0, 3.5), e);
  CHECK(sup.tag == GrowthClass::Superscaled);
  CHECK(sup.sign == -1);
  CHECK(sup.l_infinity == -HUGE_VAL);

  const auto empty = classify_nonlinearity(NonlinearitySpec{}, e);
  CHECK(empty.tag == GrowthClass::Subscaled);
  CHECK(empty.l_infinity == 0.0);

  // the scaled coefficient is summed over repeated exponents
  const NonlinearitySpec two({NonlinearTerm{TermKind::Power, 1.0, e.two_star_s_alpha, 0, nullptr},
                              NonlinearTerm{TermKind::Power, 0.5, e.two_star_s_alpha, 0, nullptr},
                              NonlinearTerm{TermKind::Power, 9.0, 2.7, 0, nullptr}});
  CHECK(rel(classify_nonlinearity(two, e).l_infinity, 1.5) < 1e-12);
}

TEST_CASE("classification tag is invariant under positive rescaling") {
  const auto e = compute_exponents(ProblemParams::make(3, 0.75, 2.0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> q(2.6, 3.9), c(-2.0, 2.0), scale(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<NonlinearTerm> terms;
    for (int k = 0; k < 3; ++k)
      terms.push_back({TermKind::Power, c(rng), q(rng), 0, nullptr});
    if (i % 4 == 0)
      terms.push_back({TermKind::Power, c(rng), e.two_star_s_alpha, 0, nullptr});
    const NonlinearitySpec f(terms);
    const double k = scale(rng);
    for (auto &t : terms)
      t.coef *= k;
    const auto a = classify_nonlinearity(f, e);
    const auto b = classify_nonlinearity(NonlinearitySpec(terms), e);
    REQUIRE(a.tag == b.tag);
    if (a.tag == GrowthClass::AsymptoticallyScaled)
      REQUIRE(rel(b.l_infinity, k * a.l_infinity) < 1e-12);
  }
}

TEST_CASE("embedding ranges") {
  const auto e = compute_exponents(ProblemParams::make(3, 0.75, 2.0));
  auto three = check_embedding(3.0, e);
  CHECK(three.continuous);
  CHECK(three.compact);
  auto four = check_embedding(4.0, e);
  CHECK(four.continuous);
  CHECK_FALSE(four.compact);
  auto low = check_embedding(2.5, e);
  CHECK_FALSE(low.continuous);
  CHECK_FALSE(low.compact);
  CHECK_FALSE(check_embedding(e.p_rad, e).continuous);
  CHECK_FALSE(check_embedding(4.5, e).continuous);
  CHECK_THROWS_AS(check_embedding(0.5, e), InvalidArgument);
}
