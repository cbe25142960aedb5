#include "uhj/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "uhj/errors.hpp"

namespace uhj {
namespace {

void validate(const FlowSpec& spec) {
  if (!spec.field) throw InputError("flow spec has no field");
  if (spec.steps < 1) throw InputError("flow spec needs at least one step");
  if (!(spec.t1 > spec.t0) || !std::isfinite(spec.t0) ||
      !std::isfinite(spec.t1)) {
    throw InputError("flow spec needs finite t0 < t1");
  }
  require_finite(spec.initial, "initial state");
}

Vector eval_field(const FlowSpec& spec, const Vector& z, double t) {
  Vector v = spec.field(z);
  if (v.size() != z.size()) {
    throw InputError("field dimension " + std::to_string(v.size()) +
                     " does not match state dimension " +
                     std::to_string(z.size()));
  }
  if (!v.allFinite()) {
    throw IntegrationError("non-finite field value at t = " +
                               std::to_string(t),
                           t);
  }
  return v;
}

// Integrates until the end or until the field raises DomainError; returns
// the time of the failing step in the latter case.
std::optional<double> run(const FlowSpec& spec, Trajectory& out) {
  const double dt = (spec.t1 - spec.t0) / static_cast<double>(spec.steps);
  out.times.reserve(spec.steps + 1);
  out.states.reserve(spec.steps + 1);
  Vector z = spec.initial;
  out.times.push_back(spec.t0);
  out.states.push_back(z);
  for (std::size_t k = 0; k < spec.steps; ++k) {
    const double t = spec.t0 + static_cast<double>(k) * dt;
    try {
      const Vector k1 = eval_field(spec, z, t);
      const Vector k2 = eval_field(spec, z + 0.5 * dt * k1, t + 0.5 * dt);
      const Vector k3 = eval_field(spec, z + 0.5 * dt * k2, t + 0.5 * dt);
      const Vector k4 = eval_field(spec, z + dt * k3, t + dt);
      z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const DomainError&) {
      return t;
    }
    if (!z.allFinite()) {
      throw IntegrationError("non-finite state at t = " + std::to_string(t),
                             t);
    }
    out.times.push_back(spec.t0 + static_cast<double>(k + 1) * dt);
    out.states.push_back(z);
  }
  return std::nullopt;
}

double restricted_distance(const Vector& a, const Vector& b,
                           const std::vector<std::size_t>& indices) {
  if (indices.empty()) return (a - b).norm();
  double s = 0.0;
  for (std::size_t i : indices) {
    if (i >= static_cast<std::size_t>(a.size())) {
      throw InputError("comparison index " + std::to_string(i) +
                       " out of range");
    }
    const double d = a(i) - b(i);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Trajectory integrate(const FlowSpec& spec) {
  validate(spec);
  Trajectory out;
  if (auto failed = run(spec, out)) {
    throw IntegrationError(
        "field left its domain at t = " + std::to_string(*failed), *failed);
  }
  return out;
}

double compare(const Trajectory& a, const Trajectory& b,
               const std::vector<std::size_t>& indices) {
  if (a.size() != b.size()) {
    throw InputError("trajectories have different lengths");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) >
        1e-12 * std::max(1.0, std::abs(a.times[k]))) {
      throw InputError("trajectories have different time grids");
    }
    if (a.states[k].size() != b.states[k].size()) {
      throw InputError("trajectory states have different dimensions");
    }
    worst = std::max(worst, restricted_distance(a.states[k], b.states[k],
                                                indices));
  }
  return worst;
}

LiftComparison lift_and_compare(const FiberedBivector& bivector,
                                const ScalarField& h, const Section& section,
                                const Vector& x0, double t1, std::size_t steps,
                                const std::vector<std::size_t>& indices) {
  LiftComparison result;

  FlowSpec down;
  down.field = [&](const Vector& x) {
    return projected_field(bivector, h, section, x);
  };
  down.t0 = 0.0;
  down.t1 = t1;
  down.steps = steps;
  down.initial = x0;
  validate(down);
  std::optional<double> exit = run(down, result.base);

  FlowSpec up;
  up.field = [&](const Vector& z) {
    return hamiltonian_field(bivector, h, z);
  };
  up.t0 = 0.0;
  up.t1 = t1;
  up.steps = steps;
  up.initial = section.point(x0);
  std::optional<double> up_exit = run(up, result.upstairs);

  for (std::size_t k = 0; k < result.base.size(); ++k) {
    try {
      Vector z = section.point(result.base.states[k]);
      result.lifted.times.push_back(result.base.times[k]);
      result.lifted.states.push_back(std::move(z));
    } catch (const DomainError&) {
      exit = result.base.times[k];
      break;
    }
  }

  const std::size_t common =
      std::min(result.lifted.size(), result.upstairs.size());
  if (exit || up_exit || common < steps + 1) {
    result.exited = true;
    result.exit_time = common > 0 ? result.lifted.times[common - 1] : 0.0;
  }
  for (std::size_t k = 0; k < common; ++k) {
    result.max_error =
        std::max(result.max_error,
                 restricted_distance(result.lifted.states[k],
                                     result.upstairs.states[k], indices));
  }
  return result;
}

void write_csv(std::ostream& out, const Trajectory& trajectory,
               const std::vector<std::string>& names) {
  for (const Vector& z : trajectory.states) {
    if (static_cast<std::size_t>(z.size()) != names.size()) {
      throw InputError("write_csv: " + std::to_string(names.size()) +
                       " names for states of size " + std::to_string(z.size()));
    }
  }
  out << 't';
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  char buf[32];
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", trajectory.times[k]);
    out << buf;
    const Vector& z = trajectory.states[k];
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", z(i));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace uhj
