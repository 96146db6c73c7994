#include "fcs/config.hpp"

#include "fcs/error.hpp"
#include "fcs/field_io.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

namespace fcs {

namespace {

struct Ctx {
  std::string source;

  [[noreturn]] void fail(const YAML::Node &n, const std::string &what) const {
    throw ConfigError(source, n.Mark().line + 1, what);
  }

  void require_map(const YAML::Node &n, const std::string &where) const {
    if (!n.IsMap())
      fail(n, fmt::format("'{}' must be a mapping", where));
  }

  void only_keys(const YAML::Node &n, const std::string &where,
                 const std::set<std::string> &allowed) const {
    for (const auto &kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key))
        fail(kv.first, fmt::format("unknown key '{}' in '{}'", key, where));
    }
  }

  template <class T> T get(const YAML::Node &n, const std::string &what) const {
    if (!n.IsScalar())
      fail(n, fmt::format("'{}' must be a scalar", what));
    try {
      return n.as<T>();
    } catch (const YAML::Exception &) {
      fail(n, fmt::format("'{}' has invalid value '{}'", what, n.Scalar()));
    }
  }

  double finite(const YAML::Node &n, const std::string &what) const {
    const double v = get<double>(n, what);
    if (!std::isfinite(v))
      fail(n, fmt::format("'{}' must be finite", what));
    return v;
  }
};

Seed::Kind seed_kind(const Ctx &c, const YAML::Node &n) {
  const auto k = c.get<std::string>(n, "seed.kind");
  if (k == "gaussian")
    return Seed::Kind::Gaussian;
  if (k == "bump")
    return Seed::Kind::Bump;
  if (k == "file")
    return Seed::Kind::File;
  c.fail(n, fmt::format("unknown seed kind '{}' (expected gaussian, bump, file)", k));
}

const std::set<std::string> kMethods{"eigen1",       "eigen-deflated", "minimize",
                                     "mountain-pass", "sweep",          "sobolev"};

std::vector<std::pair<double, double>> read_profile(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw ConfigError(fmt::format("cannot open weight file '{}'", path));
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#')
      continue;
    for (char &ch : line)
      if (ch == ',')
        ch = ' ';
    std::istringstream ls(line);
    double r, a;
    if (!(ls >> r >> a))
      throw ConfigError(path, lineno, "expected two numbers 'r a'");
    rows.emplace_back(r, a);
  }
  return rows;
}

} // namespace

RunConfig parse_config(const std::string &text, const std::string &source) {
  const Ctx c{source};
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    throw ConfigError(source, e.mark.line + 1, e.msg);
  }
  RunConfig cfg;
  cfg.source = source;
  if (root.IsNull())
    return cfg;
  c.require_map(root, "<root>");
  c.only_keys(root, "<root>", {"params", "grid", "nonlinearity", "solver", "output"});

  if (const auto p = root["params"]) {
    c.require_map(p, "params");
    c.only_keys(p, "params", {"N", "s", "alpha"});
    if (p["N"])
      cfg.N = c.get<int>(p["N"], "params.N");
    if (p["s"])
      cfg.s = c.finite(p["s"], "params.s");
    if (p["alpha"])
      cfg.alpha = c.finite(p["alpha"], "params.alpha");
  }
  if (const auto g = root["grid"]) {
    c.require_map(g, "grid");
    c.only_keys(g, "grid", {"R", "M"});
    if (g["R"])
      cfg.R = c.finite(g["R"], "grid.R");
    if (g["M"]) {
      const long M = c.get<long>(g["M"], "grid.M");
      if (M < 16)
        c.fail(g["M"], "'grid.M' must be >= 16");
      cfg.M = static_cast<std::size_t>(M);
    }
  }
  if (const auto nl = root["nonlinearity"]) {
    if (!nl.IsSequence())
      c.fail(nl, "'nonlinearity' must be a list of terms");
    for (const auto &t : nl) {
      c.require_map(t, "nonlinearity[]");
      c.only_keys(t, "nonlinearity[]", {"kind", "coef", "q", "gamma", "weight_file"});
      TermConfig tc;
      if (!t["kind"])
        c.fail(t, "term without 'kind'");
      try {
        tc.kind = term_kind_from_string(c.get<std::string>(t["kind"], "kind"));
      } catch (const InvalidArgument &e) {
        c.fail(t["kind"], e.what());
      }
      if (t["coef"])
        tc.coef = c.finite(t["coef"], "coef");
      if (!t["q"])
        c.fail(t, "term without 'q'");
      const auto qs = c.get<std::string>(t["q"], "q");
      if (qs == "scaled" || qs == "critical")
        tc.q_keyword = qs;
      else
        tc.q = c.finite(t["q"], "q");
      if (t["gamma"])
        tc.gamma = c.finite(t["gamma"], "gamma");
      if (tc.kind == TermKind::DampedPower && !(tc.gamma > 0))
        c.fail(t, "damped term needs 'gamma' > 0");
      if (t["weight_file"])
        tc.weight_file = c.get<std::string>(t["weight_file"], "weight_file");
      if (tc.kind == TermKind::WeightedPower && tc.weight_file.empty())
        c.fail(t, "weighted term needs 'weight_file'");
      cfg.nonlinearity.push_back(tc);
    }
  }
  if (const auto s = root["solver"]) {
    c.require_map(s, "solver");
    c.only_keys(s, "solver",
                {"method", "tol", "max_iter", "seed", "path_nodes", "gauge_width",
                 "newton_polish", "count", "lambda", "sobolev_constant", "sweep"});
    auto &o = cfg.options;
    if (s["method"]) {
      cfg.method = c.get<std::string>(s["method"], "solver.method");
      if (!kMethods.count(cfg.method))
        c.fail(s["method"], fmt::format("unknown method '{}'", cfg.method));
    }
    if (s["tol"]) {
      o.tol = c.finite(s["tol"], "solver.tol");
      if (!(o.tol > 0))
        c.fail(s["tol"], "'solver.tol' must be positive");
    }
    if (s["max_iter"]) {
      o.max_iter = c.get<int>(s["max_iter"], "solver.max_iter");
      if (o.max_iter < 1)
        c.fail(s["max_iter"], "'solver.max_iter' must be >= 1");
    }
    if (s["path_nodes"]) {
      o.path_nodes = c.get<int>(s["path_nodes"], "solver.path_nodes");
      if (o.path_nodes < 4)
        c.fail(s["path_nodes"], "'solver.path_nodes' must be >= 4");
    }
    if (s["gauge_width"])
      o.gauge_width = c.finite(s["gauge_width"], "solver.gauge_width");
    if (s["newton_polish"])
      o.newton_polish = c.get<bool>(s["newton_polish"], "solver.newton_polish");
    if (s["count"]) {
      cfg.count = c.get<int>(s["count"], "solver.count");
      if (cfg.count < 1)
        c.fail(s["count"], "'solver.count' must be >= 1");
    }
    if (s["lambda"])
      cfg.lambda = c.finite(s["lambda"], "solver.lambda");
    if (s["sobolev_constant"])
      o.sobolev_constant = c.finite(s["sobolev_constant"], "solver.sobolev_constant");
    if (const auto sd = s["seed"]) {
      c.require_map(sd, "solver.seed");
      c.only_keys(sd, "solver.seed", {"kind", "width", "path"});
      if (sd["kind"])
        o.seed.kind = seed_kind(c, sd["kind"]);
      if (sd["width"]) {
        o.seed.width = c.finite(sd["width"], "seed.width");
        if (!(o.seed.width > 0))
          c.fail(sd["width"], "'seed.width' must be positive");
      }
      if (sd["path"])
        cfg.seed_file = c.get<std::string>(sd["path"], "seed.path");
      if (o.seed.kind == Seed::Kind::File && cfg.seed_file.empty())
        c.fail(sd, "file seed needs 'path'");
    }
    if (const auto sw = s["sweep"]) {
      c.require_map(sw, "solver.sweep");
      c.only_keys(sw, "solver.sweep", {"term", "from", "to", "steps", "method"});
      if (sw["term"])
        cfg.sweep.term = c.get<std::size_t>(sw["term"], "sweep.term");
      if (sw["from"])
        cfg.sweep.from = c.finite(sw["from"], "sweep.from");
      if (sw["to"])
        cfg.sweep.to = c.finite(sw["to"], "sweep.to");
      if (sw["steps"]) {
        cfg.sweep.steps = c.get<int>(sw["steps"], "sweep.steps");
        if (cfg.sweep.steps < 1)
          c.fail(sw["steps"], "'sweep.steps' must be >= 1");
      }
      if (sw["method"]) {
        const auto m = c.get<std::string>(sw["method"], "sweep.method");
        if (m == "minimize")
          cfg.sweep.method = SweepMethod::Minimize;
        else if (m == "mountain-pass")
          cfg.sweep.method = SweepMethod::MountainPass;
        else
          c.fail(sw["method"], fmt::format("unknown sweep method '{}'", m));
      }
    }
  }
  if (const auto o = root["output"]) {
    c.require_map(o, "output");
    c.only_keys(o, "output", {"json", "field", "csv"});
    if (o["json"])
      cfg.out_json = c.get<std::string>(o["json"], "output.json");
    if (o["field"])
      cfg.out_field = c.get<std::string>(o["field"], "output.field");
    if (o["csv"])
      cfg.out_csv = c.get<std::string>(o["csv"], "output.csv");
  }
  return cfg;
}

RunConfig load_config(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw ConfigError(fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

ProblemParams require_params(const RunConfig &cfg) {
  if (!cfg.N)
    throw ConfigError(cfg.source + ": missing mandatory value params.N");
  if (!cfg.s)
    throw ConfigError(cfg.source + ": missing mandatory value params.s");
  if (!cfg.alpha)
    throw ConfigError(cfg.source + ": missing mandatory value params.alpha");
  return ProblemParams::make(*cfg.N, *cfg.s, *cfg.alpha);
}

GridPtr require_grid(const RunConfig &cfg) {
  const ProblemParams p = require_params(cfg);
  if (!cfg.R)
    throw ConfigError(cfg.source + ": missing mandatory value grid.R");
  if (!cfg.M)
    throw ConfigError(cfg.source + ": missing mandatory value grid.M");
  return make_grid(p, *cfg.R, *cfg.M);
}

NonlinearitySpec build_nonlinearity(const RunConfig &cfg, const ExponentTable &exps) {
  std::vector<NonlinearTerm> terms;
  for (const auto &tc : cfg.nonlinearity) {
    NonlinearTerm t;
    t.kind = tc.kind;
    t.coef = tc.coef;
    t.gamma = tc.gamma;
    if (tc.q_keyword == "scaled")
      t.q = exps.two_star_s_alpha;
    else if (tc.q_keyword == "critical")
      t.q = exps.two_star_s;
    else
      t.q = *tc.q;
    if (tc.kind == TermKind::WeightedPower) {
      std::vector<double> r, a;
      for (const auto &[ri, ai] : read_profile(tc.weight_file)) {
        r.push_back(ri);
        a.push_back(ai);
      }
      t.weight = std::make_shared<const RadialProfile>(std::move(r), std::move(a));
    }
    terms.push_back(std::move(t));
  }
  NonlinearitySpec f(std::move(terms));
  f.validate(exps);
  return f;
}

nlohmann::json config_echo(const RunConfig &cfg) {
  using nlohmann::json;
  json j;
  auto opt = [](const auto &v) -> json { return v ? json(*v) : json(nullptr); };
  j["params"] = {{"N", opt(cfg.N)}, {"s", opt(cfg.s)}, {"alpha", opt(cfg.alpha)}};
  j["grid"] = {{"R", opt(cfg.R)}, {"M", opt(cfg.M)}};

  std::optional<ExponentTable> exps;
  try {
    exps = compute_exponents(require_params(cfg));
  } catch (const Error &) {
  }
  json terms = json::array();
  for (const auto &tc : cfg.nonlinearity) {
    json t{{"kind", to_string(tc.kind)}, {"coef", tc.coef}};
    if (!tc.q_keyword.empty() && exps)
      t["q"] = tc.q_keyword == "scaled" ? exps->two_star_s_alpha : exps->two_star_s;
    else if (!tc.q_keyword.empty())
      t["q"] = tc.q_keyword;
    else
      t["q"] = *tc.q;
    if (tc.kind == TermKind::DampedPower)
      t["gamma"] = tc.gamma;
    if (!tc.weight_file.empty())
      t["weight_file"] = tc.weight_file;
    terms.push_back(t);
  }
  j["nonlinearity"] = terms;

  const auto &o = cfg.options;
  json seed{{"kind", o.seed.kind == Seed::Kind::Gaussian ? "gaussian"
                     : o.seed.kind == Seed::Kind::Bump   ? "bump"
                                                         : "file"},
            {"width", o.seed.width}};
  if (!cfg.seed_file.empty())
    seed["path"] = cfg.seed_file;
  j["solver"] = {{"method", cfg.method},
                 {"tol", o.tol},
                 {"max_iter", o.max_iter},
                 {"seed", seed},
                 {"path_nodes", o.path_nodes},
                 {"gauge_width", o.gauge_width},
                 {"newton_polish", o.newton_polish},
                 {"count", cfg.count},
                 {"lambda", opt(cfg.lambda)},
                 {"sobolev_constant", opt(o.sobolev_constant)},
                 {"sweep",
                  {{"term", cfg.sweep.term},
                   {"from", cfg.sweep.from},
                   {"to", cfg.sweep.to},
                   {"steps", cfg.sweep.steps},
                   {"method", cfg.sweep.method == SweepMethod::Minimize ? "minimize"
                                                                        : "mountain-pass"}}}};
  j["output"] = {{"json", cfg.out_json}, {"field", cfg.out_field}, {"csv", cfg.out_csv}};
  return j;
}

} // namespace fcs
