#pragma once

// Sections of the fibration and the Hamilton–Jacobi checks built on them.
//
// A section is entered in graph form x -> (x, gamma(x)); its image is a
// Lagrangian submanifold when the antisymmetric residual
//
//   R^{ab} = L^{ab} - L^{jb} dgamma^a/dx^j + L^{ja} dgamma^b/dx^j
//            + L^{ij} dgamma^a/dx^i dgamma^b/dx^j
//
// vanishes. Given that, X_h and its projection X_h^gamma are gamma-related
// exactly when dh kills T Im(gamma) ∩ C.

#include <cstddef>
#include <functional>
#include <vector>

#include "uhj/geometry.hpp"
#include "uhj/linalg.hpp"

namespace uhj {

class Section {
 public:
  using Map = std::function<Vector(const Vector&)>;
  using Jacobian = std::function<Matrix(const Vector&)>;

  /// `jacobian`, when given, returns the n_fiber x n_base matrix
  /// d gamma^a / d x^j; otherwise central differences are used.
  Section(FiberedChart chart, Map fiber, Jacobian jacobian = {});

  /// The section gamma(x) = c.
  static Section constant(FiberedChart chart, Vector value);

  const FiberedChart& chart() const noexcept { return chart_; }

  Vector fiber(const Vector& x) const;
  /// (x ; gamma(x)) in total-space coordinates.
  Vector point(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;
  Matrix fd_jacobian(const Vector& x) const;
  bool has_analytic_jacobian() const noexcept {
    return static_cast<bool>(jacobian_);
  }

 private:
  FiberedChart chart_;
  Map fiber_;
  Jacobian jacobian_;
};

/// Uniform samples of a box [lo_i, hi_i], counts[i] points per axis
/// (endpoints included; a count of 1 samples the midpoint).
class BoxGrid {
 public:
  BoxGrid(Vector lo, Vector hi, std::vector<std::size_t> counts);
  BoxGrid(Vector lo, Vector hi, std::size_t per_axis);

  std::size_t dim() const noexcept { return counts_.size(); }
  std::size_t size() const noexcept;
  /// Row-major ordering: the last axis varies fastest.
  Vector point(std::size_t index) const;
  std::vector<Vector> points() const;

  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }

 private:
  Vector lo_;
  Vector hi_;
  std::vector<std::size_t> counts_;
};

/// N x n_base matrix whose columns are T gamma(d/dx^i) = (e_i ; dgamma/dx^i).
Matrix graph_lift(const Section& section, const Vector& x);

Subspace graph_tangent(const Section& section, const Vector& x,
                       double tol = kDefaultRankTol);

/// n_fiber x n_fiber antisymmetric residual of the Lagrangian graph condition
/// at gamma(x).
Matrix lagrangian_residual(const FiberedBivector& bivector,
                           const Section& section, const Vector& x);

double max_abs(const Matrix& m);

/// Base block of X_h at gamma(x).
Vector projected_field(const FiberedBivector& bivector, const ScalarField& h,
                       const Section& section, const Vector& x);

struct HJDefect {
  double defect = 0.0;
  std::size_t intersection_dim = 0;
};

/// max |<dh, v>| over an orthonormal basis of T Im(gamma) ∩ C at gamma(x).
HJDefect hj_condition_defect(const FiberedBivector& bivector,
                             const ScalarField& h, const Section& section,
                             const Vector& x, double tol = kAngleTol);

/// X_h(gamma(x)) - T gamma(X_h^gamma(x)).
Vector relatedness_gap(const FiberedBivector& bivector, const ScalarField& h,
                       const Section& section, const Vector& x);

double relatedness_defect(const FiberedBivector& bivector,
                          const ScalarField& h, const Section& section,
                          const Vector& x);

/// Gradient of x -> h(gamma(x)).
Vector dh_closed_on_base(const ScalarField& h, const Section& section,
                         const Vector& x);

struct EquivalenceOptions {
  double residual_tol = 1e-8;      ///< Lagrangian hypothesis gate
  double defect_tol = 1e-8;        ///< hj_defect threshold
  double relatedness_factor = 100; ///< relatedness threshold = factor * defect_tol
  double intersection_tol = kAngleTol;

  double relatedness_tol() const noexcept {
    return relatedness_factor * defect_tol;
  }
};

struct HJVerdict {
  Vector x;
  double lagrangian_residual = 0.0;
  double hj_defect = 0.0;
  double relatedness_defect = 0.0;
  std::size_t intersection_dim = 0;

  bool hypothesis_holds = false;
  bool hj_holds = false;
  bool related_holds = false;

  /// True when the hypothesis fails (no claim) or both conditions agree.
  bool consistent() const noexcept {
    return !hypothesis_holds || hj_holds == related_holds;
  }
};

HJVerdict theorem_verdict(const FiberedBivector& bivector,
                          const ScalarField& h, const Section& section,
                          const Vector& x, const EquivalenceOptions& options = {});

std::vector<HJVerdict> theorem_equivalence_report(
    const FiberedBivector& bivector, const ScalarField& h,
    const Section& section, const std::vector<Vector>& grid,
    const EquivalenceOptions& options = {});

}  // namespace uhj
