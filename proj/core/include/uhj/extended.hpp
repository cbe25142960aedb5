#pragma once

// Extended phase spaces with a time coordinate t and its conjugate e.
//
// Time-dependent systems: T*R x E with structure d/dt ^ d/de + L and
// h_ext = h(t, .) + e. Forced systems: T*(R x Q) with
// F_i d/de ^ d/dp_i + d/dt ^ d/de + d/dq^i ^ d/dp_i.
//
// Chart layout for both: base (t, x...) ; fiber (e, y...). The projection
// mu forgets e.

#include <cstddef>
#include <functional>

#include "uhj/geometry.hpp"
#include "uhj/hj.hpp"

namespace uhj {

class TimeDependentModel {
 public:
  /// `h` is a function of (t, inner coordinates).
  TimeDependentModel(FiberedBivector inner, ScalarField h);

  const FiberedChart& chart() const noexcept { return chart_; }
  const FiberedBivector& bivector() const noexcept { return bivector_; }
  const ScalarField& hamiltonian() const noexcept { return h_ext_; }

  const FiberedBivector& inner() const noexcept { return inner_; }
  const ScalarField& inner_hamiltonian() const noexcept { return h_; }

  std::size_t time_index() const noexcept { return 0; }
  std::size_t energy_index() const noexcept { return inner_.chart().n_base() + 1; }

  /// (t, x, e, y) -> (t, x, y)
  Vector project(const Vector& ext) const;
  /// (t, x, y), e -> (t, x, e, y)
  Vector lift(const Vector& txy, double e) const;
  /// d/dt + X_h at (t, x, y); X_h uses the spatial gradient of h(t, .).
  Vector evolution_field(const Vector& txy) const;
  /// Drops the e component of an extended tangent vector.
  Vector push_forward(const Vector& ext_vector) const;

 private:
  FiberedBivector inner_;
  ScalarField h_;
  FiberedChart chart_;
  FiberedBivector bivector_;
  ScalarField h_ext_;
};

inline TimeDependentModel build_time_dependent(FiberedBivector inner,
                                               ScalarField h) {
  return TimeDependentModel(std::move(inner), std::move(h));
}

using ForceField = std::function<Vector(const Vector&)>;

class ForcedModel {
 public:
  /// `h` and `force` are functions of (t, q, p); force returns F_1..F_n.
  ForcedModel(std::size_t n, ScalarField h, ForceField force);

  std::size_t n() const noexcept { return n_; }
  const FiberedChart& chart() const noexcept { return chart_; }
  const FiberedBivector& bivector() const noexcept { return bivector_; }
  const ScalarField& hamiltonian() const noexcept { return h_ext_; }
  const ScalarField& inner_hamiltonian() const noexcept { return h_; }

  std::size_t time_index() const noexcept { return 0; }
  std::size_t energy_index() const noexcept { return n_ + 1; }

  /// (t, q, e, p) -> (t, q, p)
  Vector project(const Vector& ext) const;
  Vector lift(const Vector& tqp, double e) const;
  Vector force(const Vector& tqp) const;

  /// (1, dh/dp, -dh/dq - F) at (t, q, p).
  Vector evolution_field(const Vector& tqp) const;

  /// Inverse of the component matrix at an extended point.
  Matrix omega(const Vector& ext) const;
  /// dq^i ^ dp_i + dt ^ de + F_i dq^i ^ dt as a matrix W(a, b) = Omega(d_a, d_b).
  Matrix omega_closed_form(const Vector& ext) const;

  Vector push_forward(const Vector& ext_vector) const;

 private:
  std::size_t n_;
  ScalarField h_;
  ForceField force_;
  FiberedChart chart_;
  FiberedBivector bivector_;
  ScalarField h_ext_;
};

inline ForcedModel build_forced(std::size_t n, ScalarField h, ForceField force) {
  return ForcedModel(n, std::move(h), std::move(force));
}

struct ExtendedHJResult {
  double residual = 0.0;    ///< distance of dh_ext + B dt from the annihilator
  double multiplier = 0.0;  ///< least-norm B
  std::size_t intersection_dim = 0;

  bool holds(double tol) const noexcept { return residual <= tol; }
};

/// dh_ext ∈ (T Im(gamma) ∩ C_ext)° + <dt> at gamma(x), via least squares in B.
ExtendedHJResult tdep_hj_check(const FiberedBivector& ext,
                               const ScalarField& h_ext, const Section& gamma,
                               const Vector& x, std::size_t time_index = 0,
                               double tol = kAngleTol);

inline ExtendedHJResult tdep_hj_check(const TimeDependentModel& model,
                                      const Section& gamma, const Vector& x,
                                      double tol = kAngleTol) {
  return tdep_hj_check(model.bivector(), model.hamiltonian(), gamma, x,
                       model.time_index(), tol);
}

/// |mu_*(X_h_ext - T gamma(X_h_ext^gamma))| at gamma(x): zero iff the fields
/// are mu o gamma-related there.
double extended_relatedness_defect(const FiberedBivector& ext,
                                   const ScalarField& h_ext,
                                   const Section& gamma, const Vector& x,
                                   std::size_t energy_index);

/// Componentwise max of d gamma - (F o mu o gamma) ^ dt over coordinate
/// pairs of (t, q), with gamma the 1-form (e-slot) dt + (p-slots) dq.
double forced_section_check(const ForcedModel& model, const Section& gamma,
                            const Vector& x);

}  // namespace uhj
