#include "uhj/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uhj/errors.hpp"

namespace uhj {

namespace {

std::size_t count_above(const Vector& singular_values, double tol,
                        double scale = 0.0) {
  if (singular_values.size() == 0) return 0;
  const double top = std::max(singular_values(0), scale);
  if (top == 0.0) return 0;
  const double threshold = tol * top;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > threshold) ++r;
  }
  return r;
}

void require_tol(double tol) {
  if (!(tol >= 0.0) || !std::isfinite(tol)) {
    throw InputError("tolerance must be a finite nonnegative number");
  }
}

}  // namespace

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + ": non-finite entry");
  }
}

std::size_t rank(const Matrix& m, double tol) {
  require_tol(tol);
  require_finite(m, "rank");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return count_above(svd.singularValues(), tol);
}

Subspace::Subspace(std::size_t ambient_dim, double tol)
    : ambient_(ambient_dim),
      basis_(static_cast<Eigen::Index>(ambient_dim), 0),
      tol_(tol) {
  require_tol(tol);
}

Subspace::Subspace(std::size_t ambient_dim, Matrix basis, double tol)
    : ambient_(ambient_dim), basis_(std::move(basis)), tol_(tol) {}

Subspace Subspace::span(const Matrix& columns, double tol, double scale) {
  require_tol(tol);
  require_finite(columns, "Subspace::span");
  const auto ambient = static_cast<std::size_t>(columns.rows());
  if (columns.cols() == 0 || columns.rows() == 0) return Subspace(ambient, tol);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto r = count_above(svd.singularValues(), tol, scale);
  return Subspace(ambient, svd.matrixU().leftCols(static_cast<Eigen::Index>(r)),
                  tol);
}

Subspace Subspace::from_basis(const Matrix& columns, double tol) {
  Subspace s = span(columns, tol);
  if (s.dim() != static_cast<std::size_t>(columns.cols())) {
    throw InputError("Subspace::from_basis: basis vectors are dependent");
  }
  return s;
}

Subspace Subspace::full(std::size_t ambient_dim, double tol) {
  require_tol(tol);
  const auto n = static_cast<Eigen::Index>(ambient_dim);
  return Subspace(ambient_dim, Matrix::Identity(n, n), tol);
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

double Subspace::distance(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != ambient_) {
    throw InputError("Subspace::distance: dimension mismatch");
  }
  if (dim() == 0) return v.norm();
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

Subspace kernel(const Matrix& m, double tol) {
  require_tol(tol);
  require_finite(m, "kernel");
  const auto cols = static_cast<std::size_t>(m.cols());
  if (m.rows() == 0) return Subspace::full(cols, tol);
  if (m.cols() == 0) return Subspace(0, tol);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto r = static_cast<Eigen::Index>(count_above(svd.singularValues(), tol));
  return Subspace::span(svd.matrixV().rightCols(m.cols() - r), tol);
}

Subspace column_space(const Matrix& m, double tol) {
  return Subspace::span(m, tol);
}

Subspace annihilator(const Subspace& s) {
  const auto n = static_cast<Eigen::Index>(s.ambient_dim());
  if (s.dim() == 0) return Subspace::full(s.ambient_dim(), s.tol());
  if (s.dim() == s.ambient_dim()) return Subspace(s.ambient_dim(), s.tol());
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  const auto d = static_cast<Eigen::Index>(s.dim());
  return Subspace::span(svd.matrixU().rightCols(n - d), s.tol());
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("sum: ambient dimension mismatch");
  }
  Matrix joined(a.basis().rows(), a.basis().cols() + b.basis().cols());
  joined << a.basis(), b.basis();
  return Subspace::span(joined, std::max(a.tol(), b.tol()));
}

Subspace intersect(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("intersect: ambient dimension mismatch");
  }
  const Subspace ann_a = annihilator(a);
  const Subspace ann_b = annihilator(b);
  Matrix rows(ann_a.dim() + ann_b.dim(), a.ambient_dim());
  rows << ann_a.basis().transpose(), ann_b.basis().transpose();
  return kernel(rows, tol);
}

double principal_angle_defect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Matrix off = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  Eigen::JacobiSVD<Matrix> svd(off);
  return std::min(1.0, svd.singularValues()(0));
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && principal_angle_defect(a, b) <= tol;
}

AffineFit solve_affine_membership(const Vector& target, const Subspace& s,
                                  const Vector& direction) {
  const auto n = static_cast<Eigen::Index>(s.ambient_dim());
  if (target.size() != n || direction.size() != n) {
    throw InputError("solve_affine_membership: dimension mismatch");
  }
  require_finite(target, "solve_affine_membership target");
  require_finite(direction, "solve_affine_membership direction");
  const Matrix& q = s.basis();
  const Vector rt = target - q * (q.transpose() * target);
  const Vector rd = direction - q * (q.transpose() * direction);

  AffineFit fit;
  const double dnorm = direction.norm();
  if (dnorm == 0.0 || rd.norm() <= kDefaultRankTol * dnorm) {
    fit.residual = rt.norm();
    return fit;
  }
  fit.coefficient = -rd.dot(rt) / rd.squaredNorm();
  fit.residual = (rt + fit.coefficient * rd).norm();
  return fit;
}

}  // namespace uhj
