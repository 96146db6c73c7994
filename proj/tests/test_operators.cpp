#include "doctest.h"

#include "fcs/error.hpp"
#include "fcs/operators.hpp"
#include "fcs/riesz.hpp"
#include "test_util.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <random>

using namespace fcs;
using fcs::test::rel;

namespace {

const double pi = boost::math::constants::pi<double>();

/// ||(-Delta)^{s/2} e^{-r^2}||^2 in R^3 from the Fourier side:
/// (2 pi)^{-3} int |k|^{2s} pi^3 e^{-k^2/2} dk.
double gaussian_seminorm(double s) {
  return 0.5 * pi * std::pow(2.0, 0.5 + s) * std::tgamma(1.5 + s);
}

/// (I_alpha * e^{-|x|^2})(r) in R^N by a one-dimensional Hankel integral.
double riesz_gaussian(int N, double alpha, double r) {
  const double nu = 0.5 * N - 1;
  const double omega = 2 * std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N);
  auto angular = [&](double z) {
    if (z < 1e-8)
      return 1.0;
    return std::tgamma(0.5 * N) * std::pow(2 / z, nu) * boost::math::cyl_bessel_j(nu, z);
  };
  boost::math::quadrature::exp_sinh<double> q;
  const double I = q.integrate([&](double k) {
    return std::pow(k, N - 1 - alpha) * std::exp(-0.25 * k * k) * angular(k * r);
  });
  return std::pow(2 * pi, -N) * omega * std::pow(pi, 0.5 * N) * I;
}

} // namespace

TEST_CASE("fractional seminorm of a Gaussian") {
  const auto g = test::pstar();
  const Field u = test::gaussian(g);
  CHECK(rel(frac_seminorm_sq(u), gaussian_seminorm(0.75)) < 1e-6);
  CHECK(frac_seminorm_sq(Field::zeros(g)) == 0.0);
  CHECK(rel(frac_seminorm_sq(-3.0 * u), 9.0 * frac_seminorm_sq(u)) < 1e-13);
  CHECK(rel(frac_form(u, u), frac_seminorm_sq(u)) < 1e-14);
}

TEST_CASE("s -> 1 approaches the Dirichlet energy") {
  const auto g = make_grid(ProblemParams::make(3, 0.999, 2.0), 20.0, 512);
  // int |grad e^{-r^2}|^2 dx = 16 pi int r^4 e^{-2r^2} dr = 3 pi^{3/2} / (2 sqrt 2)
  const double dirichlet = 3 * std::pow(pi, 1.5) / (2 * std::sqrt(2.0));
  CHECK(rel(frac_seminorm_sq(test::gaussian(g)), dirichlet) < 1e-2);
}

TEST_CASE("Newtonian potential of a Gaussian") {
  const auto g = test::pstar();
  const Field v = test::gaussian(g);
  Eigen::VectorXd r(5);
  r << 0.1, 1.0, 5.0, 1e-3, 19.5;
  const Eigen::VectorXd phi = riesz_potential_at(v, r);
  for (int i = 0; i < 3; ++i)
    CHECK(rel(phi[i], std::sqrt(pi) / 4 * std::erf(r[i]) / r[i]) < 1e-5);
  CHECK(std::abs(phi[1] - 0.37335) < 1e-4);
  CHECK(std::abs(phi[3] - 0.5) < 1e-5);
  // far field: r phi(r) -> (1 / 4 pi) int v
  CHECK(rel(r[4] * phi[4], std::pow(pi, 1.5) / (4 * pi)) < 1e-5);
  CHECK(riesz_potential(Field::zeros(g)).values.isZero(0.0));
  CHECK_THROWS_AS(riesz_potential_at(v, Eigen::VectorXd::Constant(1, 25.0)), InvalidArgument);
}

TEST_CASE("kernel and spectral Riesz paths agree on Gaussians") {
  const auto g = test::pstar();
  for (double w : {0.5, 1.0, 2.0}) {
    const Field v = test::gaussian(g, w);
    const Field a = riesz_potential(v);
    const Field b = riesz_potential_spectral(v);
    const double err = (a.values - b.values).cwiseAbs().maxCoeff() / a.values.cwiseAbs().maxCoeff();
    CHECK(err < 1e-3);
  }
}

TEST_CASE("Riesz potential for other orders at N = 3") {
  const auto g = make_grid(ProblemParams::make(3, 0.75, 1.5), 20.0, 512);
  const Field v = test::gaussian(g);
  Eigen::VectorXd r(3);
  r << 0.25, 1.0, 3.0;
  const Eigen::VectorXd k = riesz_potential_at(v, r);
  for (int i = 0; i < 3; ++i)
    CHECK(rel(k[i], riesz_gaussian(3, 1.5, r[i])) < 1e-4);
}

TEST_CASE("generic-N Riesz path against a Hankel oracle") {
  const auto g = make_grid(ProblemParams::make(2, 0.6, 1.5), 20.0, 512);
  const Field v = test::gaussian(g);
  Eigen::VectorXd r(4);
  r << 0.1, 0.5, 1.0, 2.0;
  const Eigen::VectorXd phi = riesz_potential_at(v, r);
  for (int i = 0; i < 4; ++i)
    CHECK(rel(phi[i], riesz_gaussian(2, 1.5, r[i])) < 1e-3);
  CHECK_THROWS_AS(RieszKernel(*g, RieszKernel::Path::Kernel), UnsupportedRegime);
}

TEST_CASE("Coulomb energy of a Gaussian") {
  const auto g = test::pstar();
  const Field u = test::gaussian(g);
  // potential of e^{-2r^2} is (pi/2)^{3/2} erf(sqrt2 r) / (4 pi r); the radial
  // integral int r e^{-2r^2} erf(sqrt2 r) dr = sqrt2 / 8 gives pi^{5/2} / 4
  CHECK(rel(coulomb_energy(u), std::pow(pi, 2.5) / 4) < 1e-6);
  const double C = g->exponents().c_alpha;
  CHECK(rel(quadrilinear_T(u, u, u, u), C * coulomb_energy(u)) < 1e-14);
  CHECK(coulomb_energy(Field::zeros(g)) == 0.0);
  CHECK(rel(coulomb_energy(1.7 * u), std::pow(1.7, 4) * coulomb_energy(u)) < 1e-12);
}

TEST_CASE("quadrilinear form: zeros, symmetry, linearity") {
  const auto g = test::pstar(256);
  std::mt19937 rng(5);
  const Field a = test::random_smooth(g, rng), b = test::random_smooth(g, rng);
  const Field c = test::random_smooth(g, rng), d = test::random_smooth(g, rng);
  const Field e = test::random_smooth(g, rng);
  CHECK(quadrilinear_T(Field::zeros(g), b, c, d) == 0.0);
  const double T = quadrilinear_T(a, b, c, d);
  CHECK(rel(quadrilinear_T(b, a, c, d), T) < 1e-12);
  CHECK(rel(quadrilinear_T(a, b, d, c), T) < 1e-12);
  CHECK(rel(quadrilinear_T(c, d, a, b), T) < 1e-10);
  const double lin = quadrilinear_T(2.0 * a + (-0.5) * e, b, c, d);
  CHECK(rel(lin, 2.0 * T - 0.5 * quadrilinear_T(e, b, c, d)) < 1e-12);
}

TEST_CASE("A and B: positivity, oddness, weak form") {
  const auto g = test::pstar(256);
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Field u = test::random_smooth(g, rng);
    REQUIRE(pairing(apply_A(u), u) > 0);
    REQUIRE(pairing(apply_B(u), u) > 0);
  }
  CHECK(apply_A(Field::zeros(g)).values.isZero(0.0));
  CHECK(apply_B(Field::zeros(g)).values.isZero(0.0));
  for (int i = 0; i < 10; ++i) {
    const Field u = test::random_smooth(g, rng), v = test::random_smooth(g, rng);
    REQUIRE(((apply_A(-u).values + apply_A(u).values).array() == 0).all());
    REQUIRE(((apply_B(-u).values + apply_B(u).values).array() == 0).all());
    REQUIRE(rel(pairing(apply_A(u), v), weak_A(u, v)) < 1e-6);
  }
}

TEST_CASE("scaled operator law on analytic Gaussians") {
  const auto g = test::pstar();
  const auto &e = g->exponents();
  auto scaled = [&](double w, double t) {
    return Field::sample(g, [=](double r) { return std::pow(t, e.theta) * std::exp(-(t * r / w) * (t * r / w)); });
  };
  const Field u = scaled(1.0, 1.0), v = scaled(1.5, 1.0);
  const double A0 = pairing(apply_A(u), v), B0 = pairing(apply_B(u), v);
  for (double t : {0.5, 2.0}) {
    const Field ut = scaled(1.0, t), vt = scaled(1.5, t);
    CHECK(rel(pairing(apply_A(ut), vt), std::pow(t, e.sigma) * A0) < 1e-4);
    CHECK(rel(pairing(apply_B(ut), vt), std::pow(t, e.sigma) * B0) < 1e-4);
  }
}

TEST_CASE("dual norm and preconditioner") {
  const auto g = test::pstar(256);
  std::mt19937 rng(8);
  const Field u = test::random_smooth(g, rng);
  const DualField rho = apply_A(u);
  const Field p = precondition(rho);
  // the preconditioned representative realizes the dual norm
  CHECK(rel(h_inner(p, p), dual_norm(rho) * dual_norm(rho)) < 1e-10);
  CHECK(rel(pairing(rho, u), h_inner(p, u)) < 1e-10);
  CHECK_THROWS_AS(pairing(rho, test::gaussian(test::pstar(128))), GridMismatch);
}
