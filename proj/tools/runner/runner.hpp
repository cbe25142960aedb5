#pragma once

// Builds models and sections from a validated config and runs the checks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"
#include "uhj/hj.hpp"
#include "uhj/registry.hpp"

namespace uhj::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct Experiment {
  std::string family;  ///< registry family name or "inline"
  ModelInstance model;
  std::optional<Section> section;
  std::optional<BoxGrid> grid;
};

/// Expression and dimension errors become ConfigError.
Experiment build_experiment(const ExperimentConfig& config);

struct RunOptions {
  std::optional<double> tol;          ///< overrides defect_tol
  std::optional<std::size_t> grid;    ///< overrides every per-axis count
  std::optional<std::string> csv_dir; ///< trajectory dumps for "flow"
  std::size_t samples = 500;          ///< cross-check sample count
  std::uint64_t seed = 1;             ///< cross-check RNG seed
};

struct RunResult {
  nlohmann::json report;
  bool passed = false;
};

/// Applies the overrides in `options` to a copy of `config`.
ExperimentConfig apply_overrides(ExperimentConfig config,
                                 const RunOptions& options);

/// Runs the named checks (sorted in the report). Throws ConfigError when
/// the list is empty or a check lacks what it needs (section, domain, flow).
RunResult run_checks(const ExperimentConfig& config,
                     std::vector<std::string> checks,
                     const RunOptions& options = {});

/// Randomized agreement between the graph-residual test and the subspace
/// test on random affine sections over the config's domain.
RunResult cross_check(const ExperimentConfig& config,
                      const RunOptions& options = {});

nlohmann::json list_models();

}  // namespace uhj::cli
