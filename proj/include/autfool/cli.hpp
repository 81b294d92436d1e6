#pragma once

#include <string>
#include <vector>

namespace autfool {

// Parses argv and dispatches to a subcommand. Exit codes: 0 success,
// 2 validation error, 3 guarantee violation.
int run_cli(const std::vector<std::string>& args);

// Builds the deterministic report body for a finished subcommand run; the
// CLI wraps it together with a separate timing section.
std::string report_body_for_test(const std::vector<std::string>& args);

}  // namespace autfool
