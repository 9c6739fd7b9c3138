#pragma once

// File formats: household CSV (one row per household, empty cell =
// unbounded/unknown), run configuration JSON, and parameter-set JSON.
// Doubles are written in shortest round-trip form, so write-then-read is
// bit-exact.

#include <array>
#include <string>
#include <vector>

#include "ineq/domain.hpp"

namespace ineq::io {

// A household table plus the covariate column names per component
// (constant term excluded; it is implicit in every design).
struct Dataset {
  std::vector<Household> households;
  std::array<std::vector<std::string>, kComponents> covariate_names;
};

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double x);

Dataset read_households_csv(const std::string& path);
Dataset parse_households_csv(const std::string& text);
std::string households_csv(const Dataset& data);
void write_households_csv(const std::string& path, const Dataset& data);

RunConfig read_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_json(const RunConfig& cfg);

ParameterSet parse_parameter_set(const std::string& json_text);
std::string parameter_set_json(const ParameterSet& params);

// 64-bit FNV-1a of a byte string, hex-encoded; used in run manifests.
std::string content_hash(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ineq::io
