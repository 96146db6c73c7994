#pragma once

#include "fcs/diagnostics.hpp"
#include "fcs/params.hpp"
#include "fcs/solvers.hpp"

#include <json.hpp>
#include <string>

namespace fcs {

inline constexpr const char *kToolVersion = "0.1.0";

/// Everything that may legitimately differ between identical runs.
struct Provenance {
  std::string timestamp;
  double wall_time_s = 0;
  std::string commit;
};

struct ResultEnvelope {
  std::string tool_version = kToolVersion;
  std::string kind;
  nlohmann::json config;
  nlohmann::json payload;
  Provenance provenance;
};

nlohmann::json to_json(const ExponentTable &t);
nlohmann::json to_json(const GridSummary &g);
nlohmann::json to_json(const SolveReport &r);
nlohmann::json to_json(const DiagnosticsRecord &d);
nlohmann::json to_json(const ResultEnvelope &e);

ResultEnvelope envelope_from_json(const nlohmann::json &j);
ResultEnvelope parse_envelope(const std::string &text);
/// Pretty JSON; with include_provenance = false the output depends only on
/// config and results.
std::string serialize(const ResultEnvelope &e, bool include_provenance = true);

/// ISO-8601 UTC now, and the commit hash baked in at build time (may be empty).
std::string utc_timestamp();
std::string build_commit();

/// param,energy,I,J,multiplier,residual,converged; NaN written as empty cell.
void write_branch_csv(std::ostream &os, const BranchTable &table);
void emit_branch_csv(const BranchTable &table, const std::string &path);
BranchTable read_branch_csv(std::istream &is);

} // namespace fcs
