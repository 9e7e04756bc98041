#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ginibeta/inference.hpp"
#include "ginibeta/quadrature.hpp"

namespace ginibeta::cli {

inline constexpr const char* kSchemaVersion = "1.0";

// One invocation of the tool. Weight, model and moments are kept as the
// user's text (shorthand or JSON) and echoed in the report.
struct RunConfig {
  std::string command;  // estimate | infer | variance | simulate | check-assumptions
  std::optional<std::string> input_path;
  std::optional<std::string> weight;
  std::optional<std::string> theorem;
  std::optional<BootstrapSpec> bootstrap;
  std::optional<QuadratureSpec> quadrature;
  std::optional<std::string> model;
  std::optional<std::string> moments;
  std::optional<std::string> plan_path;
  std::optional<std::string> output_path;
  std::optional<std::uint64_t> seed;
  bool y_first = false;  // --columns y,x
};

struct RunOutcome {
  int exit_code = 0;
  std::string report;  // JSON document on success, empty otherwise
  std::string error;   // JSON error object on failure, empty otherwise
};

// Executes a validated configuration. Never throws; errors are mapped to
// exit codes (1 domain, 2 usage/ingestion, 3 assumption violation).
RunOutcome run(const RunConfig& config);

// Full command-line entry point: parses argv, runs, writes the report to
// stdout or --output and errors to stderr. Returns the exit status.
int main(int argc, char** argv);

}  // namespace ginibeta::cli
