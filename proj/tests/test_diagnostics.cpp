#include "doctest.h"

#include "fcs/diagnostics.hpp"
#include "fcs/energy.hpp"
#include "fcs/error.hpp"
#include "fcs/scaling.hpp"
#include "fcs/solvers.hpp"
#include "test_util.hpp"

#include <boost/math/constants/constants.hpp>
#include <random>

using namespace fcs;
using fcs::test::rel;

namespace {

GridPtr half_grid(std::size_t M = 512, double R = 20.0) {
  return make_grid(ProblemParams::make(3, 0.5, 2.0), R, M);
}

double sobolev_quotient(const Field &u) {
  const double p = u.grid->exponents().two_star_s;
  return frac_seminorm_sq(u) / std::pow(lp_norm(u, p), 2.0);
}

} // namespace

TEST_CASE("Pohozaev record on trivial and non-solution inputs") {
  const auto g = test::pstar();
  const auto f = NonlinearitySpec::power(1.0, 2.7);
  const auto zero = pohozaev_residual(Field::zeros(g), f);
  CHECK(zero.pohozaev_lhs == 0.0);
  CHECK(zero.pohozaev_rhs == 0.0);
  CHECK(zero.pohozaev_rel == 0.0);
  CHECK(zero.nehari == 0.0);

  const auto gauss = pohozaev_residual(test::gaussian(g), f);
  CHECK(gauss.pohozaev_rel > 0.05);
  CHECK(gauss.pohozaev_rel == relative_gap(gauss.pohozaev_lhs, gauss.pohozaev_rhs));
  CHECK(gauss.boundary_decay);
  CHECK(gauss.grid.M == 512);
  CHECK(std::abs(gauss.nehari) > 1e-3);

  std::vector<double> r{0, 5, 10, 15, 20}, a{1, 1, 1, 1, 1};
  const NonlinearitySpec weighted({NonlinearTerm{TermKind::WeightedPower, 1.0, 3.0, 0,
                                                 std::make_shared<const RadialProfile>(r, a)}});
  CHECK_THROWS_WITH_AS(pohozaev_residual(test::gaussian(g), weighted),
                       doctest::Contains("autonomous"), PreconditionError);
  CHECK(relative_gap(0.0, 0.0) == 0.0);
}

TEST_CASE("eigen identity residual") {
  const auto g = test::pstar();
  const Field u = test::gaussian(g, 1.3);
  const double lambda = I_functional(u) / J_functional(u);
  CHECK(std::abs(eigen_identity_residual(u, lambda)) <= 1e-14 * I_functional(u));
  CHECK(std::abs(eigen_identity_residual(u, 2 * lambda)) > 0.5 * I_functional(u));
}

TEST_CASE("identity closure on an eigenpair") {
  const auto rep = eigen1(test::pstar(), SolverOptions{});
  REQUIRE(rep.converged);
  const double lambda = *rep.multiplier;
  const Field &u = rep.solution;
  const auto &e = u.grid->exponents();
  const auto f = NonlinearitySpec::pure_eigen(lambda, e);
  const auto rec = pohozaev_residual(u, f);
  const double combo = identity_combination(u, lambda);
  const double direct = eigen_identity_residual(u, lambda);
  CHECK(std::abs(direct) <= 1e-5 * I_functional(u));
  CHECK(std::abs(combo - direct) <= 1e-12 * I_functional(u));
  CHECK(std::abs(combo) <= e.theta / e.sigma * std::abs(rec.nehari) +
                               std::abs(rec.pohozaev_lhs - rec.pohozaev_rhs) / e.sigma + 1e-15);
  CHECK(std::abs(rec.nehari) <= 1e-6 * rep.residual_reference * std::sqrt(I_functional(u)));

  // the closure is algebraic: it holds on arbitrary fields too
  std::mt19937 rng(2);
  for (int i = 0; i < 10; ++i) {
    const Field v = test::random_smooth(test::pstar(256), rng);
    REQUIRE(std::abs(identity_combination(v, 1.7) - eigen_identity_residual(v, 1.7)) <=
            1e-12 * I_functional(v));
  }
}

TEST_CASE("compactness threshold algebra") {
  CHECK(ps_threshold(ProblemParams::make(3, 0.75, 2.0), 1.0) == 0.25);
  CHECK(rel(ps_threshold(ProblemParams::make(3, 0.6, 2.0), 1.0), 0.2) < 1e-15);
  CHECK(ps_threshold(ProblemParams::make(3, 0.75, 2.0), 2.0) == 1.0);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> S(0.1, 20.0);
  const auto p = ProblemParams::make(2, 0.6, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double a = S(rng), b = S(rng);
    REQUIRE(rel(ps_threshold(p, a), 0.3 * std::pow(a, 2.0 / 1.2)) < 1e-14);
    REQUIRE((ps_threshold(p, a) < ps_threshold(p, b)) == (a < b));
  }
  CHECK_THROWS_AS(ps_threshold(p, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ps_threshold(p, -1.0), InvalidArgument);
}

TEST_CASE("Sobolev constant at s = 1/2") {
  const double exact = sobolev_constant_exact(3, 0.5);
  // at N = 3, s = 1/2: 2 sqrt(pi) (sqrt(pi) / 4)^{1/3} = 2^{1/3} pi^{2/3}
  CHECK(rel(exact, std::pow(2.0, 1.0 / 3) * std::pow(boost::math::constants::pi<double>(), 2.0 / 3)) < 1e-14);
  const auto est = estimate_sobolev_constant(half_grid());
  CHECK(est.per_seed.size() == 4);
  CHECK(rel(est.value, exact) < 2e-2);
  CHECK(est.value >= *std::min_element(est.per_seed.begin(), est.per_seed.end()));
  // the quotient does not see dilations
  CHECK(rel(sobolev_quotient(scale_exact(est.best, 2.0)), est.value) < 5e-3);
  CHECK(rel(sobolev_quotient(scale(est.best, 0.5)), est.value) < 5e-3);
  const auto wide = estimate_sobolev_constant(half_grid(1024, 40.0));
  CHECK(rel(wide.value, est.value) < 1e-2);
  CHECK_THROWS_AS(estimate_sobolev_constant(make_grid(ProblemParams::make(4, 0.3, 1.5), 20.0, 64)),
                  UnsupportedRegime);
}

TEST_CASE("local linking probe") {
  const auto g = test::pstar();
  const auto &e = g->exponents();
  std::vector<Field> cands = {
      project_to_M_exact(test::gaussian(g)),
      project_to_M_exact(Field::sample(g, [](double r) { return std::exp(-(r - 2) * (r - 2)); })),
      project_to_M_exact(Field::sample(g, [](double r) { return std::exp(-r * r) - 0.5 * std::exp(-0.3 * r * r); })),
  };
  std::vector<double> psi;
  for (const auto &c : cands)
    psi.push_back(Psi_tilde(c));
  const auto [lo, hi] = std::minmax_element(psi.begin(), psi.end());
  REQUIRE(*hi > *lo * 1.01);
  const double lambda = 0.5 * (*lo + *hi);
  const std::vector<double> ts = {0.0, 0.01, 0.05, 0.1};

  const auto table = linking_probe(NonlinearitySpec::pure_eigen(lambda, e), lambda, cands, ts);
  CHECK_FALSE(table.partial);
  CHECK(table.low_count + table.high_count == 3);
  REQUIRE(table.rows.size() == ts.size());
  for (const auto &row : table.rows)
    CHECK(row.pattern_holds);
  for (double v : table.rows[0].low)
    CHECK(v == 0.0);
  for (double v : table.rows[0].high)
    CHECK(v == 0.0);

  const double below = 0.5 * *lo;
  const auto all_high = linking_probe(NonlinearitySpec::pure_eigen(below, e), below, cands, ts);
  CHECK(all_high.partial);
  CHECK(all_high.low_count == 0);
  for (std::size_t i = 1; i < ts.size(); ++i)
    for (double v : all_high.rows[i].high)
      CHECK(v > 0);
}

TEST_CASE("diagnostics are deterministic") {
  const auto g = test::pstar();
  const Field u = test::gaussian(g, 1.1);
  const auto f = NonlinearitySpec::critical_family(0.3, 1.0, 3.5, g->exponents());
  const auto a = pohozaev_residual(u, f);
  const auto b = pohozaev_residual(u, f);
  CHECK(a.pohozaev_lhs == b.pohozaev_lhs);
  CHECK(a.pohozaev_rhs == b.pohozaev_rhs);
  CHECK(a.nehari == b.nehari);
}
