#pragma once

// Experiment configuration: JSON in, validated structure out.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace uhj::cli {

/// Raised for malformed or inconsistent configuration. `where` is a JSON
/// path such as "model.hamiltonian" or "line 3, column 7".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message) {}
};

struct InlineModel {
  std::vector<std::string> base;
  std::vector<std::string> fiber;
  std::map<std::string, double> parameters;
  /// "a,b" -> expression, strict upper triangle in chart order.
  std::map<std::string, std::string> bivector;
  std::string hamiltonian;
};

struct ModelSpec {
  std::string name;  ///< registry name; empty for inline models
  std::map<std::string, double> params;
  std::string hamiltonian;  ///< optional override for registry models
  std::optional<InlineModel> inline_model;
};

struct DomainSpec {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::size_t> counts;
};

struct FlowConfig {
  std::vector<double> x0;
  double t1 = 1.0;
  std::size_t steps = 1000;
};

struct Tolerances {
  double rank_tol = 1e-10;
  double residual_tol = 1e-8;
  double defect_tol = 1e-8;
  double flow_tol = 1e-6;
};

struct ExperimentConfig {
  std::string name;
  ModelSpec model;
  std::vector<std::string> section;  ///< fiber components over the base
  std::map<std::string, double> section_parameters;
  std::optional<DomainSpec> domain;
  std::optional<FlowConfig> flow;
  std::vector<std::string> checks;   ///< subset of known_checks()
  Tolerances tolerances;
};

const std::vector<std::string>& known_checks();

/// Structural validation only; expressions are checked when the model is
/// built (see runner.hpp).
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Normalized form that parse_config accepts again.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace uhj::cli
