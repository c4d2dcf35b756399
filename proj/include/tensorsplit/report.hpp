#pragma once

#include <string>

#include "json.hpp"

namespace tsplit {

struct RunResult {
  nlohmann::json report;
  int exit_status = 0;  // 0 ok, 2 solver non-convergence, 3 failed checks
};

/// Execute one command described by a fully-resolved JSON config.
/// Commands: decompose, curvature, ricci, soliton, hypersurface, map,
/// kernel, convergence. Throws std::invalid_argument on config errors
/// (CLI exit status 1).
RunResult run(const nlohmann::json& config);

/// Convenience: parse config text, run, serialize the report.
/// Returns the exit status; writes the report JSON into report_out.
int run_text(const std::string& config_text, std::string& report_out);

}  // namespace tsplit
