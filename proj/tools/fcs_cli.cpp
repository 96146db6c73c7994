// fcs: command line front end.
//
// Exit status: 0 success, 1 validation or input error, 2 solver did not
// converge (results are still written, with converged = false).

#include "fcs/config.hpp"
#include "fcs/diagnostics.hpp"
#include "fcs/energy.hpp"
#include "fcs/error.hpp"
#include "fcs/field_io.hpp"
#include "fcs/report_io.hpp"
#include "fcs/scaling.hpp"
#include "fcs/solvers.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

namespace {

using namespace fcs;
using nlohmann::json;

constexpr int kOk = 0, kInvalid = 1, kNotConverged = 2;

struct Overrides {
  std::string config;
  std::optional<int> N;
  std::optional<double> s, alpha, R;
  std::optional<std::size_t> M;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<double> lambda;
  std::string out, field;
  bool json = false;
};

void add_common(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--config", o.config, "YAML run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--N", o.N, "space dimension");
  cmd->add_option("--s", o.s, "fractional order");
  cmd->add_option("--alpha", o.alpha, "Riesz order");
  cmd->add_option("--R", o.R, "radial cutoff");
  cmd->add_option("--M", o.M, "interior nodes");
  cmd->add_option("--tol", o.tol, "relative dual residual tolerance");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap");
  cmd->add_option("--lambda", o.lambda, "eigenvalue / coefficient of the scaled power");
  cmd->add_option("--out", o.out, "write the result (JSON, or CSV for sweep)");
  cmd->add_option("--field", o.field, "FCSF field to write (solvers) or read (check)");
  cmd->add_flag("--json", o.json, "print JSON instead of a table");
}

RunConfig resolve(const Overrides &o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.N) cfg.N = o.N;
  if (o.s) cfg.s = o.s;
  if (o.alpha) cfg.alpha = o.alpha;
  if (o.R) cfg.R = o.R;
  if (o.M) cfg.M = o.M;
  if (o.tol) cfg.options.tol = *o.tol;
  if (o.max_iter) cfg.options.max_iter = *o.max_iter;
  if (o.lambda) cfg.lambda = o.lambda;
  if (!o.out.empty()) {
    cfg.out_json = o.out;
    cfg.out_csv = o.out;
  }
  if (!o.field.empty())
    cfg.out_field = o.field;
  if (!cfg.seed_file.empty() && cfg.options.seed.kind == Seed::Kind::File)
    cfg.options.seed = Seed::from_field(load_field(cfg.seed_file));
  return cfg;
}

/// f from the config; a bare --lambda means the pure eigen nonlinearity.
NonlinearitySpec nonlinearity_for(const RunConfig &cfg, const ExponentTable &ex) {
  NonlinearitySpec f = build_nonlinearity(cfg, ex);
  if (f.empty() && cfg.lambda)
    f = NonlinearitySpec::pure_eigen(*cfg.lambda, ex);
  return f;
}

class Runner {
public:
  Runner(const Overrides &o, std::string kind) : o_(o), kind_(std::move(kind)) {
    start_ = std::chrono::steady_clock::now();
  }

  /// Writes the envelope to --out and stdout (--json) or a table.
  void emit(const RunConfig &cfg, json payload, const std::string &table) const {
    ResultEnvelope env;
    env.kind = kind_;
    env.config = config_echo(cfg);
    env.payload = std::move(payload);
    env.provenance.timestamp = utc_timestamp();
    env.provenance.commit = build_commit();
    env.provenance.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::string text = serialize(env);
    if (!cfg.out_json.empty()) {
      std::ofstream os(cfg.out_json, std::ios::binary);
      if (!os)
        throw InvalidArgument("cannot write " + cfg.out_json);
      os << text << '\n';
    }
    if (o_.json)
      std::cout << text << '\n';
    else
      std::cout << table;
  }

private:
  const Overrides &o_;
  std::string kind_;
  std::chrono::steady_clock::time_point start_;
};

std::string report_table(const SolveReport &r) {
  std::string t = fmt::format("method          {}\n", r.method);
  if (!r.label.empty())
    t += fmt::format("label           {}\n", r.label);
  if (r.multiplier)
    t += fmt::format("lambda          {:.10g}\n", *r.multiplier);
  t += fmt::format("energy          {:.10g}\n", r.energy);
  t += fmt::format("I, J            {:.10g}  {:.10g}\n", r.I, r.J);
  t += fmt::format("residual        {:.3e}  (reference {:.3e})\n", r.residual_dual,
                   r.residual_reference);
  t += fmt::format("nehari          {:.3e}\n", r.nehari);
  if (std::isfinite(r.pohozaev_rel))
    t += fmt::format("pohozaev rel    {:.3e}\n", r.pohozaev_rel);
  if (r.morse_index)
    t += fmt::format("morse index     {}\n", *r.morse_index);
  if (r.ps_threshold)
    t += fmt::format("c*              {:.10g}  (level {} c*)\n", *r.ps_threshold,
                     *r.above_threshold ? ">=" : "<");
  if (r.dilation)
    t += fmt::format("stored grid R   {:.6g}\n", r.grid.R);
  t += fmt::format("iterations      {}\n", r.iterations);
  t += fmt::format("converged       {}\n", r.converged ? "yes" : "no");
  for (const auto &w : r.warnings)
    t += fmt::format("warning         {}\n", w);
  return t;
}

void save_solution(const RunConfig &cfg, const SolveReport &r, const std::string &suffix = "") {
  if (!cfg.out_field.empty())
    save_field(r.solution, cfg.out_field + suffix);
}

int cmd_exponents(const Overrides &o) {
  const RunConfig cfg = resolve(o);
  const ProblemParams p = require_params(cfg);
  const ExponentTable ex = compute_exponents(p);
  std::string t;
  t += fmt::format("theta             {:.12g}\n", ex.theta);
  t += fmt::format("sigma             {:.12g}\n", ex.sigma);
  t += fmt::format("2*_s              {:.12g}\n", ex.two_star_s);
  t += fmt::format("2*_(s,alpha)      {:.12g}\n", ex.two_star_s_alpha);
  t += fmt::format("p_rad             {:.12g}\n", ex.p_rad);
  t += fmt::format("C_alpha           {:.12g}\n", ex.c_alpha);
  t += fmt::format("regime            {}\n", to_string(ex.regime));
  Runner(o, "exponents").emit(cfg, to_json(ex), t);
  return kOk;
}

int finish_reports(const Overrides &o, const RunConfig &cfg, const std::string &kind,
                   const std::vector<SolveReport> &reps) {
  json payload;
  std::string table;
  bool ok = true;
  if (reps.size() == 1) {
    payload = to_json(reps[0]);
    table = report_table(reps[0]);
    save_solution(cfg, reps[0]);
  } else {
    payload = json::array();
    for (std::size_t i = 0; i < reps.size(); ++i) {
      payload.push_back(to_json(reps[i]));
      table += report_table(reps[i]) + "\n";
      save_solution(cfg, reps[i], "." + std::to_string(i + 1));
    }
  }
  for (const auto &r : reps)
    ok = ok && r.converged;
  Runner(o, kind).emit(cfg, payload, table);
  return ok ? kOk : kNotConverged;
}

int cmd_eigen1(const Overrides &o) {
  const RunConfig cfg = resolve(o);
  const GridPtr g = require_grid(cfg);
  return finish_reports(o, cfg, "eigen1", {eigen1(g, cfg.options)});
}

int run_sweep(const Overrides &o, const RunConfig &cfg) {
  const GridPtr g = require_grid(cfg);
  const NonlinearitySpec f = nonlinearity_for(cfg, g->exponents());
  const auto &sw = cfg.sweep;
  const BranchTable table =
      sweep(g, f, sw.term, sw.from, sw.to, sw.steps, sw.method, cfg.options);
  if (!cfg.out_csv.empty())
    emit_branch_csv(table, cfg.out_csv);
  if (o.json || cfg.out_csv.empty()) {
    write_branch_csv(std::cout, table);
  } else {
    std::cout << fmt::format("{:>12} {:>16} {:>12} {:>5}\n", "param", "energy", "residual", "conv");
    for (const auto &r : table)
      std::cout << fmt::format("{:>12.6g} {:>16.10g} {:>12.3e} {:>5}\n", r.param, r.energy,
                               r.residual, r.converged ? "yes" : "no");
  }
  for (const auto &r : table)
    if (!r.converged)
      return kNotConverged;
  return kOk;
}

int run_sobolev(const Overrides &o, const RunConfig &cfg) {
  const GridPtr g = require_grid(cfg);
  const SobolevEstimate est =
      estimate_sobolev_constant(g, cfg.options.max_iter);
  const auto &p = g->params();
  json payload = {{"estimate", est.value},
                  {"per_seed", est.per_seed},
                  {"converged", est.converged},
                  {"closed_form", sobolev_constant_exact(p.N, p.s)},
                  {"ps_threshold", ps_threshold(p, est.value)},
                  {"grid", to_json(summarize(*g))}};
  std::string t = fmt::format("S estimate      {:.10g}\n", est.value);
  t += fmt::format("closed form     {:.10g}\n", sobolev_constant_exact(p.N, p.s));
  t += fmt::format("c*              {:.10g}\n", ps_threshold(p, est.value));
  t += fmt::format("converged       {}\n", est.converged ? "yes" : "no");
  if (!cfg.out_field.empty())
    save_field(est.best, cfg.out_field);
  Runner(o, "sobolev").emit(cfg, payload, t);
  return est.converged ? kOk : kNotConverged;
}

int cmd_solve(const Overrides &o, std::string method) {
  RunConfig cfg = resolve(o);
  if (!method.empty())
    cfg.method = method;
  if (cfg.method.empty())
    throw InvalidArgument("no solver method given (solver.method or --method)");
  if (cfg.method == "sweep")
    return run_sweep(o, cfg);
  if (cfg.method == "sobolev")
    return run_sobolev(o, cfg);
  const GridPtr g = require_grid(cfg);
  if (cfg.method == "eigen1")
    return finish_reports(o, cfg, "eigen1", {eigen1(g, cfg.options)});
  if (cfg.method == "eigen-deflated")
    return finish_reports(o, cfg, "eigen-deflated", eigen_deflated(g, cfg.count, cfg.options));
  const NonlinearitySpec f = nonlinearity_for(cfg, g->exponents());
  if (cfg.method == "minimize")
    return finish_reports(o, cfg, "minimize", {minimize_subscaled(g, f, cfg.options)});
  if (cfg.method == "mountain-pass") {
    const Field e = mountain_endpoint(g, f, cfg.options.seed);
    return finish_reports(o, cfg, "mountain-pass", {mountain_pass(g, f, e, cfg.options)});
  }
  throw InvalidArgument("unknown solver method '" + cfg.method + "'");
}

int cmd_check(const Overrides &o, const std::string &what) {
  const RunConfig cfg = resolve(o);
  if (o.field.empty())
    throw InvalidArgument("check needs --field");
  const Field u = load_field(o.field);
  const ExponentTable &ex = u.grid->exponents();
  std::string t;
  json payload;
  if (what == "pohozaev") {
    const DiagnosticsRecord d = pohozaev_residual(u, nonlinearity_for(cfg, ex));
    payload = to_json(d);
    t += fmt::format("lhs             {:.12g}\n", d.pohozaev_lhs);
    t += fmt::format("rhs             {:.12g}\n", d.pohozaev_rhs);
    t += fmt::format("relative        {:.3e}\n", d.pohozaev_rel);
    t += fmt::format("nehari          {:.3e}\n", d.nehari);
    if (!d.boundary_decay)
      t += "warning         field does not decay at the cutoff\n";
  } else if (what == "nehari") {
    const double n = nehari_residual(u, nonlinearity_for(cfg, ex));
    payload = {{"nehari", n}, {"grid", to_json(summarize(*u.grid))}};
    t += fmt::format("nehari          {:.6e}\n", n);
  } else {
    if (!cfg.lambda)
      throw InvalidArgument("check identity needs --lambda");
    const double lam = *cfg.lambda;
    const double res = eigen_identity_residual(u, lam);
    const double I = I_functional(u);
    const double comb = identity_combination(u, lam);
    payload = {{"lambda", lam},
               {"I", I},
               {"J", J_functional(u)},
               {"identity_residual", res},
               {"identity_rel", I != 0 ? std::abs(res) / std::abs(I) : std::abs(res)},
               {"combination", comb},
               {"grid", to_json(summarize(*u.grid))}};
    t += fmt::format("I - lambda J    {:.6e}\n", res);
    t += fmt::format("relative        {:.3e}\n", I != 0 ? std::abs(res / I) : std::abs(res));
    t += fmt::format("combination     {:.6e}\n", comb);
  }
  Runner(o, "check-" + what).emit(cfg, payload, t);
  return kOk;
}

int cmd_scaling(const Overrides &o, double width, std::vector<double> ts) {
  const RunConfig cfg = resolve(o);
  Field u = o.field.empty() ? Seed::gaussian(width).realize(require_grid(cfg)) : load_field(o.field);
  const GridPtr g = u.grid;
  const ExponentTable &ex = g->exponents();
  const double lam = cfg.lambda.value_or(1.0);
  const double I0 = I_functional(u), J0 = J_functional(u), P0 = Phi_lambda(u, lam);
  json rows = json::array();
  std::string t = fmt::format("{:>6} {:>8} {:>12} {:>12} {:>12} {:>12}\n", "t", "mode", "I err",
                              "J err", "Phi err", "t^sigma");
  auto row = [&](double tv, const char *mode, const Field &ut) {
    const double ts_ = std::pow(tv, ex.sigma);
    const double eI = relative_gap(I_functional(ut), ts_ * I0);
    const double eJ = relative_gap(J_functional(ut), ts_ * J0);
    const double eP = relative_gap(Phi_lambda(ut, lam), ts_ * P0);
    rows.push_back({{"t", tv}, {"mode", mode}, {"I_rel", eI}, {"J_rel", eJ}, {"Phi_rel", eP}});
    t += fmt::format("{:>6.3g} {:>8} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.6g}\n", tv, mode, eI, eJ,
                     eP, ts_);
  };
  for (double tv : ts) {
    row(tv, "exact", scale_exact(u, tv));
    row(tv, "interp", scale(u, tv));
  }
  json payload = {{"sigma", ex.sigma}, {"lambda", lam}, {"rows", rows},
                  {"grid", to_json(summarize(*g))}};
  Runner(o, "scaling-check").emit(cfg, payload, t);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variational toolkit for the radial fractional Schrodinger-Poisson-Slater problem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Overrides o;
  auto *exps = app.add_subcommand("exponents", "exponent table and regime");
  add_common(exps, o);
  auto *eig = app.add_subcommand("eigen1", "first nonlinear eigenpair");
  add_common(eig, o);

  std::string method;
  auto *solve = app.add_subcommand("solve", "run the solver named in the config");
  add_common(solve, o);
  solve->add_option("--method", method, "override solver.method");

  std::string what;
  auto *check = app.add_subcommand("check", "identity residuals of a stored field");
  add_common(check, o);
  check->add_option("identity", what, "pohozaev | nehari | identity")
      ->required()
      ->check(CLI::IsMember({"pohozaev", "nehari", "identity"}));

  double width = 1.0;
  std::vector<double> ts{0.5, 2.0};
  auto *sc = app.add_subcommand("scaling-check", "scaling laws of I, J, Phi_lambda");
  add_common(sc, o);
  sc->add_option("--width", width, "Gaussian width when no --field is given");
  sc->add_option("--t", ts, "dilation factors");

  auto *sw = app.add_subcommand("sweep", "parameter continuation to CSV");
  add_common(sw, o);
  auto *sob = app.add_subcommand("sobolev", "fractional Sobolev constant estimate");
  add_common(sob, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*exps) return cmd_exponents(o);
    if (*eig) return cmd_eigen1(o);
    if (*solve) return cmd_solve(o, method);
    if (*check) return cmd_check(o, what);
    if (*sc) return cmd_scaling(o, width, ts);
    if (*sw) return cmd_solve(o, "sweep");
    if (*sob) return cmd_solve(o, "sobolev");
  } catch (const SolverError &e) {
    std::cerr << "fcs: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception &e) {
    std::cerr << "fcs: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
