#include "uhj/registry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uhj/errors.hpp"
#include "uhj/expr.hpp"

namespace uhj {
namespace {

std::vector<ModelInfo> build_catalog() {
  std::vector<ModelInfo> c = {
      {"canonical", ModelFamily::kCanonical,
       "T*R^n with a user Hamiltonian over q1..qn, p1..pn",
       {{"n", 1, "configuration dimension"}},
       true},
      {"oscillator", ModelFamily::kCanonical,
       "T*R, h = (p1^2 + omega^2 q1^2) / 2",
       {{"omega", 1, "angular frequency"}},
       false},
      {"free-particle", ModelFamily::kCanonical,
       "T*R^n, h = |p|^2 / 2",
       {{"n", 2, "configuration dimension"}},
       false},
      {"nonholonomic-particle", ModelFamily::kNonholonomic,
       "R^3 with g = I, V = 0 and the constraint dq3 - q2 dq1 = 0",
       {},
       false},
      {"forced-linear", ModelFamily::kForced,
       "T*(R x R), h = p1^2 / 2 with constant force F1 = c",
       {{"c", 1, "force magnitude"}},
       false},
      {"time-oscillator", ModelFamily::kTimeDependent,
       "T*R x T*R, h = (p1^2 + omega^2 q1^2) / 2 - amp q1 cos(t)",
       {{"omega", 1, "angular frequency"}, {"amp", 0, "drive amplitude"}},
       false},
  };
  std::sort(c.begin(), c.end(),
            [](const ModelInfo& a, const ModelInfo& b) { return a.name < b.name; });
  return c;
}

std::map<std::string, double> resolve_params(
    const ModelInfo& info, const std::map<std::string, double>& given) {
  std::map<std::string, double> out;
  for (const auto& p : info.params) out[p.name] = p.default_value;
  for (const auto& [name, value] : given) {
    if (!out.count(name)) {
      throw InputError("model '" + info.name + "' has no parameter '" + name +
                       "'");
    }
    if (!std::isfinite(value)) {
      throw InputError("parameter '" + name + "' must be finite");
    }
    out[name] = value;
  }
  return out;
}

std::size_t dimension_param(const std::map<std::string, double>& params) {
  const double n = params.at("n");
  if (n < 1 || n > 64 || n != std::floor(n)) {
    throw InputError("parameter n must be an integer in [1, 64]");
  }
  return static_cast<std::size_t>(n);
}

ScalarField parse_hamiltonian(const std::string& text,
                              std::vector<std::string> names) {
  return expr::scalar_field(expr::Expr::parse(text, std::move(names)));
}

ModelInstance canonical_instance(ModelInstance m, std::size_t n,
                                 ScalarField h) {
  CanonicalModel c = build_canonical(n, std::move(h));
  m.bivector = c.bivector;
  m.hamiltonian = c.hamiltonian;
  m.transitive = true;
  return m;
}

}  // namespace

const char* family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::kCanonical: return "canonical";
    case ModelFamily::kNonholonomic: return "nonholonomic";
    case ModelFamily::kTimeDependent: return "time-dependent";
    case ModelFamily::kForced: return "forced";
  }
  return "unknown";
}

const std::vector<ModelInfo>& model_catalog() {
  static const std::vector<ModelInfo> catalog = build_catalog();
  return catalog;
}

const ModelInfo& model_info(const std::string& name) {
  for (const auto& info : model_catalog()) {
    if (info.name == name) return info;
  }
  throw InputError("unknown model '" + name + "'");
}

ModelInstance make_model(const std::string& name,
                         const std::map<std::string, double>& params,
                         const std::string& hamiltonian) {
  const ModelInfo& info = model_info(name);
  ModelInstance m{name,
                  info.family,
                  resolve_params(info, params),
                  FiberedBivector::zero(FiberedChart({"x"}, {})),
                  ScalarField::constant(0.0),
                  false,
                  std::nullopt,
                  nullptr,
                  nullptr,
                  nullptr};
  if (info.needs_hamiltonian && hamiltonian.empty()) {
    throw InputError("model '" + name + "' needs a hamiltonian expression");
  }

  if (name == "canonical" || name == "free-particle") {
    const std::size_t n = dimension_param(m.params);
    if (!hamiltonian.empty()) {
      return canonical_instance(
          std::move(m), n,
          parse_hamiltonian(hamiltonian, canonical_chart(n).names()));
    }
    const auto nn = static_cast<Eigen::Index>(n);
    ScalarField h(
        [nn](const Vector& z) { return 0.5 * z.tail(nn).squaredNorm(); },
        [nn](const Vector& z) {
          Vector g = Vector::Zero(2 * nn);
          g.tail(nn) = z.tail(nn);
          return g;
        });
    return canonical_instance(std::move(m), n, std::move(h));
  }

  if (name == "oscillator") {
    if (!hamiltonian.empty()) {
      return canonical_instance(
          std::move(m), 1, parse_hamiltonian(hamiltonian, canonical_chart(1).names()));
    }
    const double w2 = m.params.at("omega") * m.params.at("omega");
    ScalarField h(
        [w2](const Vector& z) { return 0.5 * (z(1) * z(1) + w2 * z(0) * z(0)); },
        [w2](const Vector& z) {
          Vector g(2);
          g << w2 * z(0), z(1);
          return g;
        });
    return canonical_instance(std::move(m), 1, std::move(h));
  }

  if (name == "nonholonomic-particle") {
    if (!hamiltonian.empty()) {
      throw InputError("model '" + name + "' has a fixed hamiltonian");
    }
    NonholonomicData data;
    data.n = 3;
    data.metric = [](const Vector&) { return Matrix::Identity(3, 3); };
    data.constraints = [](const Vector& q) {
      Matrix mu(1, 3);
      mu << -q(1), 0.0, 1.0;
      return mu;
    };
    data.distribution = [](const Vector& q) {
      Matrix x(3, 2);
      x << 1.0, 0.0,
           0.0, 1.0,
           q(1), 0.0;
      return x;
    };
    auto model = std::make_shared<const NonholonomicModel>(
        build_nonholonomic(std::move(data)));
    m.bivector = model->bivector();
    m.hamiltonian = model->hamiltonian();
    m.nonholonomic = std::move(model);
    return m;
  }

  if (name == "forced-linear") {
    const double c = m.params.at("c");
    ScalarField h = ScalarField::constant(0.0);
    if (!hamiltonian.empty()) {
      h = parse_hamiltonian(hamiltonian, {"t", "q1", "p1"});
    } else {
      h = ScalarField([](const Vector& z) { return 0.5 * z(2) * z(2); },
                      [](const Vector& z) {
                        Vector g(3);
                        g << 0.0, 0.0, z(2);
                        return g;
                      });
    }
    auto model = std::make_shared<const ForcedModel>(build_forced(
        1, std::move(h), [c](const Vector&) { return Vector::Constant(1, c); }));
    m.bivector = model->bivector();
    m.hamiltonian = model->hamiltonian();
    m.transitive = true;
    m.energy_index = model->energy_index();
    m.forced = std::move(model);
    return m;
  }

  // time-oscillator
  const double w2 = m.params.at("omega") * m.params.at("omega");
  const double amp = m.params.at("amp");
  ScalarField h = ScalarField::constant(0.0);
  if (!hamiltonian.empty()) {
    h = parse_hamiltonian(hamiltonian, {"t", "q1", "p1"});
  } else {
    h = ScalarField(
        [w2, amp](const Vector& z) {
          return 0.5 * (z(2) * z(2) + w2 * z(1) * z(1)) -
                 amp * z(1) * std::cos(z(0));
        },
        [w2, amp](const Vector& z) {
          Vector g(3);
          g << amp * z(1) * std::sin(z(0)), w2 * z(1) - amp * std::cos(z(0)),
              z(2);
          return g;
        });
  }
  auto model = std::make_shared<const TimeDependentModel>(
      build_time_dependent(build_canonical(1, ScalarField::constant(0.0)).bivector,
                           std::move(h)));
  m.bivector = model->bivector();
  m.hamiltonian = model->hamiltonian();
  m.transitive = true;
  m.energy_index = model->energy_index();
  m.time_dependent = std::move(model);
  return m;
}

}  // namespace uhj
