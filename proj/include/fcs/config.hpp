#pragma once

#include "fcs/grid.hpp"
#include "fcs/nonlinearity.hpp"
#include "fcs/solvers.hpp"

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace fcs {

struct TermConfig {
  TermKind kind = TermKind::Power;
  double coef = 1.0;
  std::optional<double> q;
  std::string q_keyword;   ///< "scaled" (2*_{s,alpha}) or "critical" (2*_s)
  double gamma = 0.0;
  std::string weight_file; ///< two-column r,a(r) text file
};

struct SweepConfig {
  std::size_t term = 0;
  double from = 0, to = 0;
  int steps = 1;
  SweepMethod method = SweepMethod::Minimize;
};

/// Parsed run configuration. The problem and grid block have no defaults:
/// missing values stay empty until validated.
struct RunConfig {
  std::optional<int> N;
  std::optional<double> s, alpha, R;
  std::optional<std::size_t> M;
  std::vector<TermConfig> nonlinearity;
  std::string method;        ///< eigen1 | eigen-deflated | minimize | mountain-pass | sweep | sobolev
  SolverOptions options;
  int count = 2;             ///< eigen-deflated
  std::optional<double> lambda;
  SweepConfig sweep;
  std::string seed_file;     ///< FCSF field used when the seed kind is "file"
  std::string out_json, out_field, out_csv;
  std::string source = "<config>";
};

/// Parses YAML text; unknown keys and bad values raise ConfigError with the
/// offending line.
RunConfig parse_config(const std::string &text, const std::string &source = "<config>");
RunConfig load_config(const std::string &path);

/// Throws ConfigError naming the first missing mandatory value.
ProblemParams require_params(const RunConfig &cfg);
GridPtr require_grid(const RunConfig &cfg);

/// Builds f from the nonlinearity block (keywords resolved on exps).
NonlinearitySpec build_nonlinearity(const RunConfig &cfg, const ExponentTable &exps);

/// The parsed configuration, resolved, as JSON.
nlohmann::json config_echo(const RunConfig &cfg);

} // namespace fcs
