#pragma once

// Built-in models addressed by name, each with numeric parameters.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uhj/canonical.hpp"
#include "uhj/extended.hpp"
#include "uhj/geometry.hpp"
#include "uhj/nonholonomic.hpp"

namespace uhj {

enum class ModelFamily { kCanonical, kNonholonomic, kTimeDependent, kForced };

const char* family_name(ModelFamily family);

struct ParamSpec {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

struct ModelInfo {
  std::string name;
  ModelFamily family;
  std::string description;
  std::vector<ParamSpec> params;
  bool needs_hamiltonian = false;  ///< expects a hamiltonian expression
};

/// Sorted by name.
const std::vector<ModelInfo>& model_catalog();
const ModelInfo& model_info(const std::string& name);

struct ModelInstance {
  std::string name;
  ModelFamily family = ModelFamily::kCanonical;
  std::map<std::string, double> params;  ///< defaults filled in
  FiberedBivector bivector;
  ScalarField hamiltonian;
  bool transitive = false;                 ///< C = TE everywhere
  std::optional<std::size_t> energy_index; ///< set for extended models
  std::shared_ptr<const NonholonomicModel> nonholonomic;
  std::shared_ptr<const TimeDependentModel> time_dependent;
  std::shared_ptr<const ForcedModel> forced;
};

/// Builds a registry model. Unknown names or parameters raise InputError.
/// `hamiltonian` is an expression over the model's coordinates (and, for
/// time-dependent families, t); it is required by "canonical" and overrides
/// the built-in Hamiltonian of the other canonical-family models.
ModelInstance make_model(const std::string& name,
                         const std::map<std::string, double>& params = {},
                         const std::string& hamiltonian = {});

}  // namespace uhj
