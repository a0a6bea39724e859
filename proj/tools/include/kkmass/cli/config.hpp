#pragma once

#include "kkmass/geometry.hpp"
#include "kkmass/models.hpp"
#include "kkmass/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kkmass::cli {

enum class Task { Mass, Decay, VerifyIdentities, BoundaryLimit, Sweep };

Task parse_task(const std::string& s);
std::string to_string(Task task);

/// Raised for anything that makes a configuration unusable; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IdentitySettings {
  std::vector<double> steps{0.04, 0.02, 0.01, 0.005};
  int points = 2;              // seeded sample points per probe spinor
  double min_order = 1.9;
};

struct SweepSettings {
  std::string parameter;       // "epsilon", "m" or "tau"
  std::vector<double> values;
  std::optional<double> fixed_circle;  // euclidean_rn m-sweep at fixed circle length
};

/// A user-declared expectation for the computed mass.
struct MassOracle {
  double value = 0.0;
  double tolerance = 0.01;  // relative, absolute when value == 0
};

struct RunConfig {
  ModelSpec model;
  Task task = Task::Mass;
  std::vector<double> radii;
  QuadratureSpec quadrature;
  StepPolicy step;
  std::string output;
  int threads = 1;
  std::uint64_t seed = 1;
  int samples_per_shell = 32;
  IdentitySettings identities;
  SweepSettings sweep;
  std::optional<MassOracle> oracle;
};

/// Parses a JSON configuration. `task` is the subcommand; a "task" field in
/// the document, when present, has to agree with it. Diagnostics name the
/// source, the line for syntax errors and the field path otherwise.
RunConfig parse_config(const std::string& text, Task task, const std::string& source = "<config>");
RunConfig load_config(const std::string& path, Task task);

/// Radii used when the configuration gives none: 5 doublings ending at
/// 16 times the first radius, which starts well outside r_min.
std::vector<double> default_radii(const Chart& chart);

}  // namespace kkmass::cli
