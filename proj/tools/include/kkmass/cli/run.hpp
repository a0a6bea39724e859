#pragma once

#include "kkmass/cli/config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace kkmass::cli {

inline constexpr int kSchemaVersion = 1;

/// A declared pass/fail expectation. Relative tolerance when the reference
/// is nonzero, absolute otherwise; `detail` carries anything else.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Everything a run produces. `body` is a pure function of the configuration
/// (thread count excluded); wall-clock data lives in `execution` only.
struct Report {
  nlohmann::json body;
  nlohmann::json execution;
  std::vector<Check> checks;
  std::string text;  // aligned human-readable tables

  bool passed() const;
};

/// Executes the configured task. Throws ConfigError when the model cannot be
/// built from the configuration; numerical failures become failed checks.
Report run(const RunConfig& config);

/// {"schema_version", "body", "execution"}.
nlohmann::json to_json(const Report& report);

/// Full text rendering: body tables, checks, then execution statistics.
std::string render_text(const Report& report);

/// Entry point behind the executable. Exit codes: 0 all checks pass,
/// 1 a check failed, 2 usage or configuration error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kkmass::cli
