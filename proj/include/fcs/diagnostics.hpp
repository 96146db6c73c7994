#pragma once

#include "fcs/grid.hpp"
#include "fcs/nonlinearity.hpp"
#include "fcs/solvers.hpp"

#include <optional>
#include <vector>

namespace fcs {

struct DiagnosticsRecord {
  double pohozaev_lhs = 0;
  double pohozaev_rhs = 0;
  double pohozaev_rel = 0;
  double nehari = 0;
  std::optional<double> eigen_identity_rel;
  std::optional<double> ps_threshold;
  bool boundary_decay = true;  ///< false: identities carry a truncation error
  GridSummary grid;
};

/// |a - b| / max(|a|, |b|, 1e-300)
double relative_gap(double a, double b);

/// lhs = (N-2s)/2 ||(-Delta)^{s/2}u||^2 + C_alpha (N+alpha)/4 D(u),
/// rhs = N int F(u). Also fills nehari.
DiagnosticsRecord pohozaev_residual(const Field &u, const NonlinearitySpec &f);

/// Phi'(u) u = <A(u), u> - int f(|x|, u) u
double nehari_residual(const Field &u, const NonlinearitySpec &f);

/// I(u) - lambda J(u)
double eigen_identity_residual(const Field &u, double lambda);

/// theta/sigma * nehari - (lhs - rhs)/sigma for f = lambda |t|^{p-2} t;
/// equals I(u) - lambda J(u) identically.
double identity_combination(const Field &u, double lambda);

struct SobolevEstimate {
  double value = 0;
  std::vector<double> per_seed;
  Field best;
  bool converged = false;
};

/// min ||(-Delta)^{s/2}u||^2 / ||u||_{2*_s}^2 over Talenti-type seeds.
SobolevEstimate estimate_sobolev_constant(const GridPtr &grid, int max_iter = 4000);

/// The fractional Sobolev constant in closed form.
double sobolev_constant_exact(int N, double s);

/// c* = (s/N) S^{N/(2s)}
double ps_threshold(const ProblemParams &params, double S);

struct LinkingRow {
  double t = 0;
  std::vector<double> low;   ///< Phi(u_t) on candidates with Psi~ <= lambda
  std::vector<double> high;  ///< Phi(u_t) on candidates with Psi~ > lambda
  bool pattern_holds = false;
};

struct LinkingTable {
  std::vector<LinkingRow> rows;
  std::size_t low_count = 0, high_count = 0;
  bool partial = false;  ///< one of the two candidate sets is empty
};

/// Fiber signs near the origin: Phi(u_t) <= 0 on the low set and > 0 on the
/// high set. Candidates must lie on M.
LinkingTable linking_probe(const NonlinearitySpec &f, double lambda,
                           const std::vector<Field> &candidates,
                           const std::vector<double> &ts);

} // namespace fcs
