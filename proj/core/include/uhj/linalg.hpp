#pragma once

// Pointwise dense linear algebra with an explicit tolerance policy.
//
// Rank decisions use singular values relative to the largest one: a
// singular value s counts iff s > tol * s_max. Subspaces keep an
// orthonormal basis (columns), so covectors and vectors share the same
// Euclidean representation in coordinates.

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace uhj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultRankTol = 1e-10;

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);

std::size_t rank(const Matrix& m, double tol = kDefaultRankTol);

class Subspace {
 public:
  /// The zero subspace of R^ambient_dim.
  explicit Subspace(std::size_t ambient_dim, double tol = kDefaultRankTol);

  /// Orthonormal basis of the span of the given columns; dependent columns
  /// (at tolerance) are absorbed. Singular values are compared against
  /// tol * max(s_max, scale), so a nonzero `scale` lets callers discard
  /// columns that are negligible relative to some outside magnitude.
  static Subspace span(const Matrix& columns, double tol = kDefaultRankTol,
                       double scale = 0.0);

  /// Like span(), but the columns must be independent at tolerance.
  static Subspace from_basis(const Matrix& columns,
                             double tol = kDefaultRankTol);

  static Subspace full(std::size_t ambient_dim, double tol = kDefaultRankTol);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(basis_.cols());
  }
  double tol() const noexcept { return tol_; }

  /// ambient_dim x dim, orthonormal columns.
  const Matrix& basis() const noexcept { return basis_; }

  Matrix projector() const;

  /// Euclidean norm of the component of v orthogonal to the subspace.
  double distance(const Vector& v) const;

 private:
  Subspace(std::size_t ambient_dim, Matrix basis, double tol);

  std::size_t ambient_;
  Matrix basis_;
  double tol_;
};

/// Null space of m (a subspace of R^cols).
Subspace kernel(const Matrix& m, double tol = kDefaultRankTol);

/// Column space of m (a subspace of R^rows).
Subspace column_space(const Matrix& m, double tol = kDefaultRankTol);

/// All covectors vanishing on s.
Subspace annihilator(const Subspace& s);

Subspace sum(const Subspace& a, const Subspace& b);

/// a ∩ b = annihilator(annihilator(a) + annihilator(b)). Directions within
/// about `tol` (radians) of both subspaces are kept.
Subspace intersect(const Subspace& a, const Subspace& b,
                   double tol = kDefaultRankTol);

/// Sine of the largest principal angle between a and b; 1 when the
/// dimensions differ, 0 for two trivial subspaces.
double principal_angle_defect(const Subspace& a, const Subspace& b);

bool same_subspace(const Subspace& a, const Subspace& b, double tol);

struct AffineFit {
  double coefficient = 0.0;  ///< B minimizing dist(target + B*direction, s)
  double residual = 0.0;     ///< that minimal distance

  bool member(double tol) const noexcept { return residual <= tol; }
};

/// Least-squares fit of target + B*direction into s; B = 0 whenever the
/// direction is (numerically) inside s, including direction = 0.
AffineFit solve_affine_membership(const Vector& target, const Subspace& s,
                                  const Vector& direction);

}  // namespace uhj
