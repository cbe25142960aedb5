#pragma once

// Nonholonomic systems L = 1/2 g(v, v) - V(q) with linear constraints
// mu^a_i(q) dq^i = 0, moved to the Hamiltonian side and written in adapted
// momenta pt_alpha = X^i_alpha p_i on the constraint submanifold M = FL(D).
//
// Coordinates on M are (q^1..q^n ; pt_1..pt_{n-k}). The remaining adapted
// momenta Y^i_a p_i vanish on M, which fixes p from (q, pt).
//
// The structure on M, in the same pinned convention as the canonical model
// (L(z^mu, z^nu) = {z^nu, z^mu}):
//
//   L(q^i, q^j) = 0,  L(q^i, pt_a) = -X^i_a,
//   L(pt_a, pt_b) = p_j [X_a, X_b]^j   with p = p(q, pt) on M.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>

#include "uhj/canonical.hpp"
#include "uhj/geometry.hpp"
#include "uhj/hj.hpp"

namespace uhj {

using OneForm = std::function<Vector(const Vector&)>;

struct NonholonomicData {
  std::size_t n = 0;
  MatrixField metric;        ///< n x n, symmetric positive definite
  ScalarField potential = ScalarField::constant(0.0);
  MatrixField constraints;   ///< k x n, row a = mu^a
  MatrixField distribution;  ///< optional n x (n-k), columns X_alpha
  MatrixField complement;    ///< optional n x k, columns Y_a; default g^-1 mu^a
  /// Anchor for the default D-basis; the origin when unset.
  std::optional<Vector> reference_point;
};

class NonholonomicModel {
 public:
  /// Validates the data at the reference point. Throws InputError on
  /// dependent constraints or a metric that is not SPD.
  explicit NonholonomicModel(NonholonomicData data);

  std::size_t n() const noexcept;
  std::size_t k() const noexcept;
  std::size_t dim_d() const noexcept { return n() - k(); }

  /// q1..qn ; pt1..pt_{n-k}
  const FiberedChart& chart() const noexcept;
  const FiberedBivector& bivector() const noexcept;
  /// h restricted to M, as a function of (q ; pt).
  const ScalarField& hamiltonian() const noexcept;

  Matrix metric(const Vector& q) const;
  Matrix constraints(const Vector& q) const;
  /// n x (n-k), columns X_alpha.
  Matrix d_basis(const Vector& q) const;
  /// n x k, columns Y_a.
  Matrix complement_basis(const Vector& q) const;

  /// Full momenta p on M from adapted coordinates.
  Vector momenta(const Vector& q, const Vector& pt) const;
  /// pt_alpha = X^i_alpha p_i
  Vector adapted_momenta(const Vector& q, const Vector& p) const;
  /// max_a |mu^a(g^-1 p)|: zero iff p lies on M over q.
  double constraint_violation(const Vector& q, const Vector& p) const;

  /// 1/2 p.g^-1.p + V(q) on T*Q.
  double full_hamiltonian(const Vector& q, const Vector& p) const;

  /// [X_alpha, X_beta] as columns, index alpha * (n-k) + beta.
  Matrix lie_brackets(const Vector& q) const;

  /// L(pt_a, pt_b) block at (q, pt).
  Matrix momentum_block(const Vector& q, const Vector& pt) const;

  /// Checks the data invariants at q; throws InputError on violation.
  void validate_at(const Vector& q) const;

 private:
  struct Core;
  std::shared_ptr<const Core> core_;
  std::optional<FiberedChart> chart_;
  std::optional<FiberedBivector> bivector_;
  std::optional<ScalarField> hamiltonian_;
};

inline NonholonomicModel build_nonholonomic(NonholonomicData data) {
  return NonholonomicModel(std::move(data));
}

/// q -> pt(q) = X(q)^T gamma(q), the section of M -> Q induced by a 1-form
/// valued in M.
Section adapted_section(const NonholonomicModel& model, OneForm gamma);

/// q -> p(q), the 1-form on Q represented by a section of M -> Q.
OneForm one_form_of(const NonholonomicModel& model, const Section& section);

/// max_{a<b} |d gamma(X_a, X_b)(q)| with
/// d gamma(X, Y) = X(gamma(Y)) - Y(gamma(X)) - gamma([X, Y]).
/// Throws InputError when gamma(q) is not on M.
double nh_section_check(const NonholonomicModel& model, const OneForm& gamma,
                        const Vector& q);

/// max_a |<d(h o gamma), X_a>(q)|.
double nh_hj_check(const NonholonomicModel& model, const OneForm& gamma,
                   const Vector& q);

}  // namespace uhj
