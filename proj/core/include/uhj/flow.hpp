#pragma once

// Fixed-step classical Runge–Kutta integration and trajectory comparison.

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "uhj/geometry.hpp"
#include "uhj/hj.hpp"
#include "uhj/linalg.hpp"

namespace uhj {

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
};

struct FlowSpec {
  std::function<Vector(const Vector&)> field;
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t steps = 1000;
  Vector initial;
};

/// RK4 with step (t1 - t0) / steps; times are t0 + k * step. Throws
/// InputError on a bad spec and IntegrationError (carrying the time of the
/// failing step) when the field returns a non-finite value or throws
/// DomainError.
Trajectory integrate(const FlowSpec& spec);

/// max_k |a_k - b_k| restricted to `indices` (all coordinates when empty).
/// Throws InputError unless both trajectories share the same time grid.
double compare(const Trajectory& a, const Trajectory& b,
               const std::vector<std::size_t>& indices = {});

struct LiftComparison {
  double max_error = 0.0;
  bool exited = false;     ///< the projected curve left the section's domain
  double exit_time = 0.0;  ///< last time compared when exited
  Trajectory base;         ///< integral curve of X_h^gamma from x0
  Trajectory lifted;       ///< gamma applied to `base`
  Trajectory upstairs;     ///< integral curve of X_h from gamma(x0)
};

/// Integrates X_h^gamma on the base and X_h on the total space, maps the
/// base curve through gamma and reports the sup distance. When the base
/// curve leaves the section's domain, the comparison stops at the last
/// in-domain time and `exited` is set. `indices` restricts the distance to
/// a subset of total-space coordinates (all when empty).
LiftComparison lift_and_compare(const FiberedBivector& bivector,
                                const ScalarField& h, const Section& section,
                                const Vector& x0, double t1, std::size_t steps,
                                const std::vector<std::size_t>& indices = {});

/// Header `t,<names>` then one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& trajectory,
               const std::vector<std::string>& names);

}  // namespace uhj
