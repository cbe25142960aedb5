#pragma once

// Almost-Poisson structures in coordinates adapted to a fibration
// pi : E -> M, (x^i; y^a) -> (x^i).
//
// Sign convention. Components are stored as L(mu, nu) = Lambda(dz^mu, dz^nu)
// and the sharp map contracts the row index:
//
//     (sharp alpha)^nu = sum_mu alpha_mu L(mu, nu),
//
// i.e. sharp(alpha) = L^T alpha. With this contraction the canonical block on
// T*Q is L(q^i, p_i) = -1, L(p_i, q^i) = +1 (see canonical_block()), which
// makes X_h = sharp(dh) reproduce dq/dt = dh/dp, dp/dt = -dh/dq. All
// built-in models use the same convention: L(z^mu, z^nu) = {z^nu, z^mu} in
// terms of the usual canonical bracket.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uhj/linalg.hpp"

namespace uhj {

/// Angle tolerance for subspace intersections and equality tests on data
/// derived from finite differences.
inline constexpr double kAngleTol = 1e-7;

class FiberedChart {
 public:
  FiberedChart(std::vector<std::string> base_names,
               std::vector<std::string> fiber_names);

  /// x1..xn ; y1..ym
  static FiberedChart with_default_names(std::size_t n_base,
                                         std::size_t n_fiber);

  std::size_t n_base() const noexcept { return base_.size(); }
  std::size_t n_fiber() const noexcept { return fiber_.size(); }
  std::size_t dim() const noexcept { return base_.size() + fiber_.size(); }

  const std::vector<std::string>& base_names() const noexcept { return base_; }
  const std::vector<std::string>& fiber_names() const noexcept {
    return fiber_;
  }
  /// Base names followed by fiber names.
  std::vector<std::string> names() const;

  std::optional<std::size_t> index_of(const std::string& name) const;

  Vector base_of(const Vector& point) const;
  Vector fiber_of(const Vector& point) const;
  Vector join(const Vector& base, const Vector& fiber) const;

  bool operator==(const FiberedChart&) const = default;

 private:
  std::vector<std::string> base_;
  std::vector<std::string> fiber_;
};

/// Point-dependent antisymmetric component matrix on a fibered chart.
class FiberedBivector {
 public:
  using Evaluator = std::function<Matrix(const Vector&)>;

  FiberedBivector(FiberedChart chart, Evaluator eval);

  static FiberedBivector constant(FiberedChart chart, Matrix components);
  static FiberedBivector zero(FiberedChart chart);

  const FiberedChart& chart() const noexcept { return chart_; }

  /// Full N x N matrix at p. Throws InputError on a dimension mismatch,
  /// non-finite entries, or a matrix that is not antisymmetric
  /// (|L + L^T| > 1e-12 |L| + 1e-14).
  Matrix components(const Vector& p) const;

 private:
  FiberedChart chart_;
  Evaluator eval_;
};

/// Central-difference step for coordinate value z.
inline double fd_step(double z) {
  return 1e-6 * (std::abs(z) > 1.0 ? std::abs(z) : 1.0);
}

Vector fd_gradient(const std::function<double(const Vector&)>& f,
                   const Vector& p);

/// d f_r / d z_c, rows = outputs.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f,
                   const Vector& p);

class ScalarField {
 public:
  using Value = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  explicit ScalarField(Value value, Gradient gradient = {});

  static ScalarField constant(double c);

  double operator()(const Vector& p) const { return value_(p); }

  /// Analytic gradient when one was supplied, central differences otherwise.
  Vector gradient(const Vector& p) const;
  Vector fd_gradient(const Vector& p) const;
  bool has_analytic_gradient() const noexcept {
    return static_cast<bool>(gradient_);
  }

 private:
  Value value_;
  Gradient gradient_;
};

Vector sharp_apply(const FiberedBivector& bivector, const Vector& p,
                   const Vector& alpha);

/// X_h(p) = sharp(dh(p)).
Vector hamiltonian_field(const FiberedBivector& bivector, const ScalarField& h,
                         const Vector& p);

/// C_p = sharp(T*_p E); its dimension is the rank of the structure at p.
Subspace characteristic_subspace(const FiberedBivector& bivector,
                                 const Vector& p,
                                 double tol = kDefaultRankTol);

struct SubspaceCheck {
  bool holds = false;
  double defect = 0.0;  ///< sine of the largest principal angle (1 on a
                        ///< dimension mismatch)
};

/// Compares the annihilator of C_p with ker(sharp_p).
SubspaceCheck lemma_check(const FiberedBivector& bivector, const Vector& p,
                          double tol = kDefaultRankTol);

/// Lagrangian test at p: sharp(TN°) == TN ∩ C_p.
SubspaceCheck subspace_lagrangian_check(const FiberedBivector& bivector,
                                        const Vector& p, const Subspace& tn,
                                        double tol = kAngleTol);

struct RankStats {
  std::size_t min_rank = 0;
  std::size_t max_rank = 0;
  std::size_t samples = 0;
  bool constant() const noexcept { return min_rank == max_rank; }
};

RankStats rank_scan(const FiberedBivector& bivector,
                    const std::vector<Vector>& points,
                    double tol = kDefaultRankTol);

}  // namespace uhj
