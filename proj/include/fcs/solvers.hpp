#pragma once

#include "fcs/energy.hpp"
#include "fcs/grid.hpp"
#include "fcs/nonlinearity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fcs {

struct Seed {
  enum class Kind { Gaussian, Bump, File };
  Kind kind = Kind::Gaussian;
  double width = 1.0;  ///< Gaussian e^{-(r/width)^2}; bump support radius
  std::optional<Field> field;

  static Seed gaussian(double width) { return {Kind::Gaussian, width, {}}; }
  static Seed bump(double width) { return {Kind::Bump, width, {}}; }
  static Seed from_field(Field u) { return {Kind::File, 1.0, std::move(u)}; }

  /// Field on g: sampled profile, or the stored field (interpolated when its
  /// grid differs).
  Field realize(const GridPtr &g) const;
  std::string describe() const;
};

struct SolverOptions {
  double tol = 1e-6;           ///< dual residual relative to the initial one
  int max_iter = 5000;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  Seed seed = Seed::gaussian(1.0);
  bool newton_polish = true;
  int path_nodes = 12;         ///< mountain pass path resolution
  double gauge_width = 10.0;   ///< eigen1: target half-width in grid spacings
  std::optional<double> sobolev_constant;  ///< for the c* flag; estimated if absent
};

struct GridSummary {
  int N = 0;
  double s = 0, alpha = 0, R = 0;
  std::size_t M = 0;
  double h = 0;
};

GridSummary summarize(const RadialGrid &g);

struct SolveReport {
  std::string method;
  Field solution;
  double energy = 0;                   ///< Phi(u), or Phi_lambda(u) for eigen runs
  std::optional<double> multiplier;    ///< lambda for eigen runs
  double I = 0, J = 0;
  double residual_dual = 0;            ///< ||A(u) - f(u)||_dual, absolute
  double residual_reference = 0;       ///< initial residual (tolerance scale)
  double pohozaev_rel = 0;
  double nehari = 0;
  int iterations = 0;
  bool converged = false;
  std::string seed_descriptor;
  GridSummary grid;
  std::optional<double> fiber_level;   ///< eigen runs: I(u) of the stored representative
  std::optional<double> dilation;      ///< solution grid has cutoff R / dilation
  std::optional<double> ps_threshold;  ///< critical family: c*
  std::optional<bool> above_threshold; ///< critical family: energy >= c*
  std::optional<int> morse_index;
  std::string label;
  std::vector<std::string> warnings;
  std::vector<double> objective_trace; ///< J (eigen) or Phi per accepted descent step
};

/// Recomputes every reported identity from the stored field.
void refresh_report(SolveReport &rep, const NonlinearitySpec &f);

/// lambda_1 = min over M of 1/J and its eigenfunction. The stored solution
/// lies on the level set I = fiber_level chosen so that the profile is
/// resolved by the grid; manifold_representative() maps it onto M exactly.
SolveReport eigen1(const GridPtr &grid, const SolverOptions &opts);

/// Up to k eigenpair candidates via an L^2 penalty against earlier ones.
/// Ordering is not certified beyond the first.
std::vector<SolveReport> eigen_deflated(const GridPtr &grid, int k,
                                        const SolverOptions &opts);

/// u / I(u)^{...}: exact dilation of an eigen solution onto I = 1.
Field manifold_representative(const SolveReport &rep);

/// Multi-start preconditioned descent on Phi for subscaled f.
SolveReport minimize_subscaled(const GridPtr &grid, const NonlinearitySpec &f,
                               const SolverOptions &opts);

/// c * seed with Phi <= 0, found by amplitude continuation and bisection.
Field mountain_endpoint(const GridPtr &grid, const NonlinearitySpec &f,
                        const Seed &seed = Seed::gaussian(1.0));

/// Path relaxation from 0 to e (climbing image), then Newton polish.
SolveReport mountain_pass(const GridPtr &grid, const NonlinearitySpec &f, const Field &e,
                          const SolverOptions &opts);

enum class SweepMethod { Minimize, MountainPass };

struct BranchRow {
  double param = 0;
  double energy = 0;  ///< NaN when the row did not converge
  double I = 0, J = 0;
  double multiplier = 0;
  double residual = 0;
  bool converged = false;
  int iterations = 0;
};

using BranchTable = std::vector<BranchRow>;

/// Warm-started solves while the coefficient of term `term` runs over
/// [from, to] in `steps` points.
BranchTable sweep(const GridPtr &grid, const NonlinearitySpec &f, std::size_t term,
                  double from, double to, int steps, SweepMethod method,
                  const SolverOptions &opts, bool warm_start = true);

/// True when f contains a pure power term at the critical exponent 2*_s.
bool is_critical_family(const NonlinearitySpec &f, const ExponentTable &exps);

} // namespace fcs
