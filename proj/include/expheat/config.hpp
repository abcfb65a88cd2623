#pragma once

// Run configuration for the command-line front end.
//
// Format: UTF-8 lines "key=value"; '#' starts a comment; blank lines are
// ignored. Defaults depend on the scenario (and experiment name), then the
// file is applied, then --set overrides in order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expheat/heat_solver.hpp"
#include "expheat/nonlinearity.hpp"
#include "expheat/radial.hpp"

namespace expheat {

inline constexpr const char* kScenarios[] = {"evolve", "shoot", "scan-alpha",
                                             "orlicz-norm", "experiment"};
inline constexpr const char* kExperiments[] = {
    "global-decay", "blowup", "nonuniqueness", "mt-sharpness", "degiorgi"};

struct RunConfig {
  std::string scenario = "experiment";
  std::string experiment = "global-decay";
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // Grid.
  std::size_t nodes = 2048;
  double grading = 2.0;
  std::string domain = "truncated_plane";  // or unit_disc
  double radius = 12.0;

  // Nonlinearity and initial data A e^{-r^2}.
  std::string sign = "defocusing";
  std::string variant = "full";
  double amplitude = 3.0;

  // Time stepping.
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double theta = 0.5;
  double cfl_safety = 0.2;
  double t_end = 2.0;
  double u_max_blowup = 12.0;
  std::size_t snapshot_stride = 5;
  std::string scheme = "heun";
  std::size_t implicit_startup_steps = 0;

  // Shooting.
  double alpha = 0.02;
  double t_max = 40.0;
  double tol = 1e-10;
  double alpha_min = 0.05;
  double alpha_max = 10.0;
  std::size_t alpha_count = 200;

  // Orlicz norm; 0 means the whole domain.
  double sub_radius = 0.0;

  // Experiment knobs.
  double blowup_factor = 1.12;     // A = factor * A*, J(A* e^{-r^2}) = 0
  double convexity_factor = 1.1;   // alpha = factor * 2 / (2 + eps)
  double separation_threshold = 1e-3;
  double dg_m_factor = 1.0;        // M = factor * sqrt(2) ||u0||
  double dg_t0 = 0.1;
  double dg_alpha = 4.0;
  std::size_t dg_k_max = 8;

  GridSpec grid_spec() const;
  Nonlinearity nonlinearity() const;
  SolverConfig solver() const;
};

/// Defaults for a scenario; `experiment` only matters for "experiment".
/// Throws ConfigError naming "scenario" or "experiment" for unknown names,
/// listing the valid choices.
RunConfig default_config(const std::string& scenario,
                         const std::string& experiment = "global-decay");

/// Applies one key=value pair. Throws ConfigError for unknown keys and
/// unparsable values, naming the key.
void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value);

/// Splits "key=value"; throws ConfigError on a missing '='.
std::pair<std::string, std::string> split_setting(const std::string& text);

/// Range checks against module preconditions; throws ConfigError naming the
/// offending key.
void validate(const RunConfig& cfg);

/// Defaults, then the file (if any), then overrides; validated.
RunConfig parse_config(const std::string& scenario,
                       const std::string& experiment,
                       const std::optional<std::string>& file,
                       const std::vector<std::string>& overrides);

/// Same, reading the file body from a string.
RunConfig parse_config_text(const std::string& scenario,
                            const std::string& experiment,
                            const std::string& text,
                            const std::vector<std::string>& overrides);

/// Every key with its current value, in a fixed order.
std::vector<std::pair<std::string, std::string>> echo(const RunConfig& cfg);

}  // namespace expheat
