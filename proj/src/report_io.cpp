#include "fcs/report_io.hpp"

#include "fcs/error.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <ostream>

#ifndef FCS_GIT_COMMIT
#define FCS_GIT_COMMIT ""
#endif

namespace fcs {

using nlohmann::json;

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T> json opt(const std::optional<T> &v) {
  if (!v)
    return nullptr;
  if constexpr (std::is_floating_point_v<T>)
    return number_or_null(*v);
  else
    return *v;
}

std::string csv_cell(double x) { return std::isfinite(x) ? fmt::format("{}", x) : ""; }

/// RFC 4180: quote cells containing separators, quotes or line breaks.
std::string csv_quote(const std::string &cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos)
    return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string &line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string &cell) {
  if (cell.empty())
    return std::nan("");
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size())
      throw FormatError(fmt::format("bad numeric cell '{}'", cell));
    return v;
  } catch (const std::logic_error &) {
    throw FormatError(fmt::format("bad numeric cell '{}'", cell));
  }
}

constexpr const char *kCsvHeader = "param,energy,I,J,multiplier,residual,converged";

} // namespace

json to_json(const ExponentTable &t) {
  return {{"theta", t.theta},
          {"sigma", t.sigma},
          {"p_rad", t.p_rad},
          {"two_star_s", t.two_star_s},
          {"two_star_s_alpha", t.two_star_s_alpha},
          {"c_alpha", t.c_alpha},
          {"regime", to_string(t.regime)}};
}

json to_json(const GridSummary &g) {
  return {{"N", g.N}, {"s", g.s}, {"alpha", g.alpha}, {"R", g.R}, {"M", g.M}, {"h", g.h}};
}

json to_json(const SolveReport &r) {
  json j;
  j["method"] = r.method;
  j["label"] = r.label;
  j["energy"] = number_or_null(r.energy);
  j["multiplier"] = opt(r.multiplier);
  j["I"] = number_or_null(r.I);
  j["J"] = number_or_null(r.J);
  j["residual_dual"] = number_or_null(r.residual_dual);
  j["residual_reference"] = number_or_null(r.residual_reference);
  j["pohozaev_rel"] = number_or_null(r.pohozaev_rel);
  j["nehari"] = number_or_null(r.nehari);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["seed"] = r.seed_descriptor;
  j["grid"] = to_json(r.grid);
  j["fiber_level"] = opt(r.fiber_level);
  j["dilation"] = opt(r.dilation);
  j["ps_threshold"] = opt(r.ps_threshold);
  j["above_threshold"] = opt(r.above_threshold);
  j["morse_index"] = opt(r.morse_index);
  j["warnings"] = r.warnings;
  if (r.solution.grid) {
    std::vector<double> v(r.solution.values.data(),
                          r.solution.values.data() + r.solution.values.size());
    j["solution"] = {{"R", r.solution.grid->R()}, {"M", r.solution.grid->M()}, {"values", v}};
  }
  return j;
}

json to_json(const DiagnosticsRecord &d) {
  return {{"pohozaev_lhs", number_or_null(d.pohozaev_lhs)},
          {"pohozaev_rhs", number_or_null(d.pohozaev_rhs)},
          {"pohozaev_rel", number_or_null(d.pohozaev_rel)},
          {"nehari", number_or_null(d.nehari)},
          {"eigen_identity_rel", opt(d.eigen_identity_rel)},
          {"ps_threshold", opt(d.ps_threshold)},
          {"boundary_decay", d.boundary_decay},
          {"grid", to_json(d.grid)}};
}

json to_json(const ResultEnvelope &e) {
  return {{"tool_version", e.tool_version},
          {"kind", e.kind},
          {"config", e.config},
          {"payload", e.payload},
          {"provenance",
           {{"timestamp", e.provenance.timestamp},
            {"wall_time_s", e.provenance.wall_time_s},
            {"commit", e.provenance.commit}}}};
}

ResultEnvelope envelope_from_json(const json &j) {
  try {
    ResultEnvelope e;
    e.tool_version = j.at("tool_version").get<std::string>();
    e.kind = j.at("kind").get<std::string>();
    e.config = j.at("config");
    e.payload = j.at("payload");
    if (j.contains("provenance")) {
      const auto &p = j.at("provenance");
      e.provenance.timestamp = p.at("timestamp").get<std::string>();
      e.provenance.wall_time_s = p.at("wall_time_s").get<double>();
      e.provenance.commit = p.at("commit").get<std::string>();
    }
    return e;
  } catch (const json::exception &ex) {
    throw FormatError(fmt::format("malformed result envelope: {}", ex.what()));
  }
}

ResultEnvelope parse_envelope(const std::string &text) {
  try {
    return envelope_from_json(json::parse(text));
  } catch (const json::parse_error &ex) {
    throw FormatError(fmt::format("malformed result envelope: {}", ex.what()));
  }
}

std::string serialize(const ResultEnvelope &e, bool include_provenance) {
  json j = to_json(e);
  if (!include_provenance)
    j.erase("provenance");
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string build_commit() { return FCS_GIT_COMMIT; }

void write_branch_csv(std::ostream &os, const BranchTable &table) {
  os << kCsvHeader << "\r\n";
  for (const auto &r : table) {
    os << csv_quote(csv_cell(r.param)) << ',' << csv_quote(csv_cell(r.energy)) << ','
       << csv_quote(csv_cell(r.I)) << ',' << csv_quote(csv_cell(r.J)) << ','
       << csv_quote(csv_cell(r.multiplier)) << ',' << csv_quote(csv_cell(r.residual)) << ','
       << (r.converged ? "true" : "false") << "\r\n";
  }
}

void emit_branch_csv(const BranchTable &table, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw FormatError(fmt::format("cannot open '{}' for writing", path));
  write_branch_csv(os, table);
  if (!os)
    throw FormatError(fmt::format("write to '{}' failed", path));
}

BranchTable read_branch_csv(std::istream &is) {
  std::string line;
  if (!std::getline(is, line))
    throw FormatError("empty CSV");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kCsvHeader)
    throw FormatError(fmt::format("unexpected CSV header '{}'", line));
  BranchTable table;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r")
      continue;
    const auto cells = csv_split(line);
    if (cells.size() != 7)
      throw FormatError(fmt::format("CSV row has {} cells, expected 7", cells.size()));
    BranchRow r;
    r.param = parse_cell(cells[0]);
    r.energy = parse_cell(cells[1]);
    r.I = parse_cell(cells[2]);
    r.J = parse_cell(cells[3]);
    r.multiplier = parse_cell(cells[4]);
    r.residual = parse_cell(cells[5]);
    if (cells[6] != "true" && cells[6] != "false")
      throw FormatError(fmt::format("bad converged cell '{}'", cells[6]));
    r.converged = cells[6] == "true";
    table.push_back(r);
  }
  return table;
}

} // namespace fcs
