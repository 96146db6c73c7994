#include "doctest.h"

#include "fcs/error.hpp"
#include "fcs/grid.hpp"
#include "fcs/spectral.hpp"
#include "test_util.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <random>

using namespace fcs;
using fcs::test::rel;

namespace {
const double pi = boost::math::constants::pi<double>();
}

TEST_CASE("grid nodes and weights") {
  const auto g = test::pstar();
  const double h = 20.0 / 513.0;
  CHECK(rel(g->h(), h) < 1e-15);
  CHECK(g->M() == 512);
  for (Eigen::Index j = 0; j < 512; ++j) {
    const double r = (j + 1) * h;
    REQUIRE(rel(g->nodes()[j], r) < 1e-14);
    REQUIRE(rel(g->weights()[j], 4 * pi * r * r * h) < 1e-14);
  }
  CHECK(g->nodes()[0] > 0);
  CHECK(g->nodes()[511] < 20.0);

  const auto g2 = make_grid(ProblemParams::make(2, 0.6, 1.5), 10.0, 256);
  const double h2 = 10.0 / 257.0;
  for (Eigen::Index j = 0; j < 256; ++j)
    REQUIRE(rel(g2->weights()[j], 2 * pi * (j + 1) * h2 * h2) < 1e-14);
}

TEST_CASE("sum of weights approximates the ball volume") {
  const auto g = test::pstar();
  const double vol = 4.0 / 3.0 * pi * 8000.0;
  CHECK(rel(g->weights().sum(), vol) < 1e-2);
  double prev = 1.0;
  for (std::size_t M : {64u, 128u, 256u, 512u}) {
    const double err = rel(test::pstar(M)->weights().sum(), vol);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("grid construction errors") {
  const auto p = ProblemParams::make(3, 0.75, 2.0);
  CHECK_THROWS_AS(make_grid(p, std::nan(""), 64), InvalidArgument);
  CHECK_THROWS_AS(make_grid(p, HUGE_VAL, 64), InvalidArgument);
  CHECK_THROWS_AS(make_grid(p, -1.0, 64), InvalidArgument);
  CHECK_THROWS_AS(make_grid(p, 20.0, 15), InvalidArgument);
  CHECK_NOTHROW(make_grid(p, 20.0, 16));
}

TEST_CASE("grids are shared per (params, R, M)") {
  const auto a = test::pstar(128);
  const auto b = test::pstar(128);
  CHECK(a.get() == b.get());
  CHECK(a->same_as(*b));
  CHECK_FALSE(a->same_as(*test::pstar(128, 21.0)));
  const auto r = a->rescaled(2.0);
  CHECK(rel(r->R(), 10.0) < 1e-15);
  CHECK(r->M() == 128);
}

TEST_CASE("Gaussian Lebesgue norms") {
  const auto g = test::pstar();
  const Field u = test::gaussian(g);
  CHECK(rel(lp_integral(u, 2), std::pow(pi, 1.5) / (2 * std::sqrt(2.0))) < 1e-6);
  CHECK(rel(lp_integral(u, 4), std::pow(pi, 1.5) / 8) < 1e-6);
  CHECK(rel(lp_norm(u, 2) * lp_norm(u, 2), lp_integral(u, 2)) < 1e-14);
  CHECK(rel(lp_norm(u, HUGE_VAL), std::exp(-g->h() * g->h())) < 1e-15);
  CHECK(rel(lp_norm(-2.5 * u, 3.3), 2.5 * lp_norm(u, 3.3)) < 1e-14);
  CHECK_THROWS_AS(lp_norm(u, 0.5), InvalidArgument);
  CHECK(lp_norm(Field::zeros(g), 2) == 0.0);
}

TEST_CASE("quadrature error decreases under refinement") {
  const double exact = std::pow(pi, 1.5) / (2 * std::sqrt(2.0));
  // a Gaussian shifted off the origin keeps odd-order error terms alive
  auto f = [](double r) { return std::exp(-(r - 1) * (r - 1)) * std::exp(-r); };
  double prev = HUGE_VAL;
  for (std::size_t M : {32u, 64u, 128u, 256u}) {
    const auto g = test::pstar(M, 10.0);
    const double val = lp_integral(test::gaussian(g), 2);
    const double err = rel(val, exact);
    CHECK((err <= prev || err < 1e-13));
    prev = err;
    // smooth non-symmetric integrand: first order at least
    const auto g2 = test::pstar(2 * M, 10.0);
    const double a = lp_integral(Field::sample(g, f), 1);
    const double b = lp_integral(Field::sample(g2, f), 1);
    const double c = lp_integral(Field::sample(test::pstar(4 * M, 10.0), f), 1);
    CHECK(std::abs(b - c) <= 0.6 * std::abs(a - b) + 1e-14);
  }
}

TEST_CASE("transform round trip, linearity and Plancherel (N = 3)") {
  const auto g = test::pstar();
  std::mt19937 rng(2024);
  double worst_plancherel = 0, worst_round = 0, worst_linear = 0;
  for (int i = 0; i < 100; ++i) {
    const Field u = test::random_band_limited(g, rng, 128);
    const Field v = test::random_band_limited(g, rng, 128);
    const auto uh = forward_transform(u);
    worst_plancherel = std::max(worst_plancherel, rel(uh.coefficients.squaredNorm(), lp_integral(u, 2)));
    const Field back = inverse_transform(uh);
    worst_round = std::max(worst_round, (back.values - u.values).norm() / u.values.norm());
    const auto lin = forward_transform(1.5 * u + (-0.25) * v);
    const Eigen::VectorXd ref = 1.5 * uh.coefficients - 0.25 * forward_transform(v).coefficients;
    worst_linear = std::max(worst_linear, (lin.coefficients - ref).norm() / ref.norm());
  }
  CHECK(worst_plancherel < 1e-10);
  CHECK(worst_round < 1e-12);
  CHECK(worst_linear < 1e-12);
  CHECK(forward_transform(Field::zeros(g)).coefficients.isZero(0.0));
}

TEST_CASE("Plancherel on the generic-N path") {
  const auto g = make_grid(ProblemParams::make(2, 0.6, 1.5), 10.0, 128);
  std::mt19937 rng(99);
  for (int i = 0; i < 20; ++i) {
    const Field u = test::random_band_limited(g, rng, 32);
    const auto uh = forward_transform(u);
    REQUIRE(rel(uh.coefficients.squaredNorm(), lp_integral(u, 2)) < 1e-6);
    REQUIRE((inverse_transform(uh).values - u.values).norm() / u.values.norm() < 1e-10);
  }
  // N = 2 wavenumbers are the zeros of J_0 over R
  const auto w = make_grid(ProblemParams::make(2, 0.6, 1.5), 10.0, 64)->basis().wavenumbers();
  for (Eigen::Index m = 0; m < w.size(); ++m)
    REQUIRE(rel(w[m], boost::math::cyl_bessel_j_zero(0.0, static_cast<int>(m) + 1) / 10.0) < 1e-12);
}

TEST_CASE("sine transform wavenumbers and Gaussian spectral sum") {
  const auto g = test::pstar();
  const auto &k = g->basis().wavenumbers();
  for (Eigen::Index m = 0; m < k.size(); ++m)
    REQUIRE(rel(k[m], (m + 1) * pi / 20.0) < 1e-14);
  const Field u = test::gaussian(g);
  CHECK(rel(forward_transform(u).coefficients.squaredNorm(), std::pow(pi, 1.5) / (2 * std::sqrt(2.0))) < 1e-6);
}

TEST_CASE("fields on different grids do not mix") {
  const Field a = test::gaussian(test::pstar(64));
  const Field b = test::gaussian(test::pstar(128));
  CHECK_THROWS_AS(a + b, GridMismatch);
  CHECK_THROWS_AS(l2_inner(a, b), GridMismatch);
  SpectralField bad{test::pstar(64), Eigen::VectorXd::Zero(10)};
  CHECK_THROWS_AS(inverse_transform(bad), GridMismatch);
}

TEST_CASE("boundary decay flag") {
  const auto g = test::pstar();
  CHECK(test::gaussian(g).decays_at_boundary());
  CHECK(Field::zeros(g).decays_at_boundary());
  CHECK_FALSE(Field::sample(g, [](double r) { return 1.0 / (1 + r); }).decays_at_boundary());
}
