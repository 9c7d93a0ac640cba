#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "stabkit/measure.hpp"

namespace stabkit {

inline constexpr const char* kVersion = "0.1.0";

// --- relation documents ----------------------------------------------------
// Text form: a header ("relation <u_x> <u_y>", "mx <indices>", "my <indices>")
// followed by u_x rows of '0'/'1'. '#' starts a comment. The JSON form carries
// the same fields with the matrix as strings.

AmbientRelation load_relation(std::istream& in);
AmbientRelation load_relation_file(const std::string& path);
std::string write_relation_text(const AmbientRelation& rel);
nlohmann::json relation_to_json(const AmbientRelation& rel);
AmbientRelation relation_from_json(const nlohmann::json& j);

// --- generators --------------------------------------------------------------
// half_graph(n); random_bipartite(n,m,p,seed); union_finite_graphs(k);
// full_subsets(n); from_matrix(r1;r2;...). Deterministic given the spec.
AmbientRelation generate(const std::string& spec);

// --- measure documents -------------------------------------------------------
// JSON list of (type trace over the sub-model parameters, weight fraction).

nlohmann::json measure_to_json(const KeislerMeasure& mu);
KeislerMeasure measure_from_json(const nlohmann::json& j, TypeSpacePtr space);
KeislerMeasure load_measure_file(const std::string& path, TypeSpacePtr space);

/// Trace restricted to the parameter set, as '0'/'1' chars in ascending
/// parameter order.
std::string trace_string(const Bits& trace, const Bits& params);
Bits trace_from_string(const std::string& s, const Bits& params);

// --- CLI ---------------------------------------------------------------------

struct RunConfig {
  std::string command;
  std::string input_path;  // exactly one of input_path / gen_spec
  std::string gen_spec;
  int cap = 8;
  Rat eps = rat(1, 8);
  Rat r = rat(0, 1);
  uint64_t seed = 0;
  std::string out_path;  // empty: stdout
  std::string format = "json";
  std::vector<std::string> mu_paths;
  std::vector<std::string> nu_paths;
};

struct RunOutcome {
  nlohmann::json report;
  std::string rendered;  // final output in the requested format
  int exit_code = 0;     // 0 ok, 2 validation, 3 cap exhausted, 4 approx retries
};

/// Dispatches a validated config to the analyses and builds the report
/// document. Throws ValidationError on bad configs; the CLI maps that to
/// exit code 2.
RunOutcome run(const RunConfig& config);

/// Flattens a report to "key,value" CSV lines.
std::string report_to_csv(const nlohmann::json& j);

}  // namespace stabkit
