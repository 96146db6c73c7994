#include "doctest.h"

#include "fcs/energy.hpp"
#include "fcs/error.hpp"
#include "fcs/operators.hpp"
#include "fcs/scaling.hpp"
#include "test_util.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <random>

using namespace fcs;
using fcs::test::rel;

namespace {

double central_difference(const Field &u, const Field &v, const NonlinearitySpec &f) {
  const double h = 1e-5 * u.values.norm() / v.values.norm();
  return (Phi(u + h * v, f) - Phi(u + (-h) * v, f)) / (2 * h);
}

std::shared_ptr<const RadialProfile> bump_weight() {
  std::vector<double> r, a;
  for (int i = 0; i <= 40; ++i) {
    r.push_back(0.5 * i);
    a.push_back(1.0 / (1.0 + 0.25 * i * i * 0.25));
  }
  return std::make_shared<const RadialProfile>(r, a);
}

} // namespace

TEST_CASE("functionals vanish at zero and are even") {
  const auto g = test::pstar(256);
  const auto &e = g->exponents();
  const Field z = Field::zeros(g);
  const auto f = NonlinearitySpec::critical_family(0.5, 1.0, 3.3, e);
  CHECK(I_functional(z) == 0.0);
  CHECK(J_functional(z) == 0.0);
  CHECK(Phi(z, f) == 0.0);
  CHECK(Phi_lambda(z, 2.0) == 0.0);
  CHECK(grad_Phi(z, f).values.isZero(0.0));
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Field u = test::random_smooth(g, rng);
    REQUIRE(Phi(-u, f) == Phi(u, f));
    REQUIRE(I_functional(u) > 0);
    REQUIRE(rel(J_functional(-2.0 * u), std::pow(2.0, e.two_star_s_alpha) * J_functional(u)) < 1e-13);
  }
}

TEST_CASE("gradient matches central differences") {
  const auto g = test::pstar(256);
  const auto &e = g->exponents();
  std::vector<std::pair<const char *, NonlinearitySpec>> specs = {
      {"power", NonlinearitySpec::power(1.0, 2.7)},
      {"damped", NonlinearitySpec::damped(2.0, e.two_star_s_alpha, 0.5)},
      {"critical family", NonlinearitySpec::critical_family(0.5, 1.0, 3.3, e)},
      {"weighted", NonlinearitySpec({NonlinearTerm{TermKind::WeightedPower, 1.5, 3.0, 0, bump_weight()}})},
  };
  std::mt19937 rng(42);
  for (const auto &[name, f] : specs) {
    CAPTURE(name);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      const Field u = test::random_smooth(g, rng);
      const Field v = test::random_smooth(g, rng);
      worst = std::max(worst, rel(pairing(grad_Phi(u, f), v), central_difference(u, v, f)));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("pure eigen spec: gradient is A - lambda B") {
  const auto g = test::pstar(256);
  std::mt19937 rng(4);
  const Field u = test::random_smooth(g, rng);
  const auto f = NonlinearitySpec::pure_eigen(2.5, g->exponents());
  const Eigen::VectorXd expect = apply_A(u).values - 2.5 * apply_B(u).values;
  CHECK((grad_Phi(u, f).values - expect).cwiseAbs().maxCoeff() <= 1e-13 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("damped primitive against adaptive quadrature") {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double gamma : {0.05, 0.5, 2.0}) {
    for (double kappa : {1.0, 0.01, 30.0}) {
      for (double T : {1e-3, 0.1, 0.5, 1.0, 3.0, 100.0}) {
        const double q = 20.0 / 7.0;
        const double exact = GK::integrate(
            [&](double x) { return std::pow(x, q - 1) / (1 + std::pow(kappa * x, gamma)); }, 0.0, T,
            12, 1e-12);
        CAPTURE(gamma);
        CAPTURE(kappa);
        CAPTURE(T);
        REQUIRE(rel(damped_primitive(T, q, gamma, kappa), exact) < 1e-9);
      }
    }
  }
  CHECK(damped_primitive(0.0, 3.0, 0.5) == 0.0);
}

TEST_CASE("primitive and derivative are consistent with f") {
  const auto f = NonlinearitySpec({
      NonlinearTerm{TermKind::Power, 1.0, 3.1, 0, nullptr},
      NonlinearTerm{TermKind::DampedPower, -0.7, 3.4, 0.3, nullptr},
  });
  for (double t : {-2.0, -0.3, 0.05, 0.7, 4.0}) {
    const double h = 1e-6 * std::abs(t);
    CHECK(rel((f.F(0, t + h) - f.F(0, t - h)) / (2 * h), f.f(0, t)) < 1e-7);
    CHECK(rel((f.f(0, t + h) - f.f(0, t - h)) / (2 * h), f.df(0, t)) < 1e-6);
    CHECK(f.f(0, -t) == -f.f(0, t));
  }
  CHECK(f.f(0, 0.0) == 0.0);
}

TEST_CASE("Phi_lambda on M equals 1 - lambda / Psi~") {
  const auto g = test::pstar();
  const Field u = project_to_M_exact(test::gaussian(g, 1.3, 0.4));
  REQUIRE(std::abs(I_functional(u) - 1.0) < 1e-12);
  for (double lambda : {0.5, 2.0, 7.0})
    CHECK(std::abs(Phi_lambda(u, lambda) - (1 - lambda / Psi_tilde(u))) < 1e-8);
  // a dilation with t^sigma = 2 doubles I
  const Field off = scale_exact(u, std::pow(2.0, 1.0 / g->exponents().sigma));
  CHECK(rel(I_functional(off), 2.0) < 1e-12);
  CHECK_THROWS_AS(Psi_tilde(off), PreconditionError);
}

TEST_CASE("I(tu) is strictly increasing in t") {
  const auto g = test::pstar(256);
  std::mt19937 rng(77);
  for (int i = 0; i < 20; ++i) {
    const Field u = test::random_smooth(g, rng);
    double prev = 0;
    for (double t = 0.05; t < 20; t *= 1.3) {
      const double I = I_functional(t * u);
      REQUIRE(I > prev);
      prev = I;
    }
  }
}

TEST_CASE("dilation laws on analytic Gaussians") {
  const auto g = test::pstar();
  const auto &e = g->exponents();
  auto gauss_t = [&](double t) {
    return Field::sample(g, [=](double r) { return std::pow(t, e.theta) * std::exp(-t * t * r * r); });
  };
  const Field u = gauss_t(1.0);
  for (double t : {0.5, 2.0}) {
    const Field ut = gauss_t(t);
    const double ts = std::pow(t, e.sigma);
    CHECK(rel(I_functional(ut), ts * I_functional(u)) < 1e-4);
    CHECK(rel(J_functional(ut), ts * J_functional(u)) < 1e-4);
    CHECK(rel(Phi_lambda(ut, 1.3), ts * Phi_lambda(u, 1.3)) < 1e-4);
    for (double q : {2.7, 3.2, 3.9}) {
      const auto F = NonlinearitySpec::power(1.0, q);
      CHECK(rel(F_integral(ut, F), std::pow(t, e.theta * q - 3) * F_integral(u, F)) < 1e-4);
    }
  }
}

TEST_CASE("L^p bound by a power of I") {
  const auto g = test::pstar(256);
  const auto &e = g->exponents();
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> amp(0.1, 10.0), tt(0.3, 3.0);
  for (double p : {e.two_star_s_alpha, 2.7}) {
    const double a = (p * e.theta - 3) / e.sigma;
    CHECK(rel(a * e.sigma, p * e.theta - 3) < 1e-15);
    auto ratio = [&](const Field &u) { return lp_integral(u, p) / std::pow(I_functional(u), a); };
    std::vector<double> ratios;
    for (int i = 0; i < 200; ++i) {
      const Field u = amp(rng) * test::random_smooth(g, rng);
      ratios.push_back(ratio(u));
      // both sides follow the same dilation law
      REQUIRE(rel(ratio(scale_exact(u, tt(rng))), ratios.back()) < 1e-10);
    }
    const double c = *std::max_element(ratios.begin(), ratios.begin() + 100);
    const double held_out = *std::max_element(ratios.begin() + 100, ratios.end());
    CAPTURE(p);
    CHECK(held_out <= 2 * c);
  }
}
