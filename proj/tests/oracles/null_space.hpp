#pragma once

// Null space by Gauss–Jordan elimination with partial pivoting. Shares no
// code with the SVD route in the library.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Columns span ker(a); pivots below `tol` * max|a| count as zero.
inline Eigen::MatrixXd null_space(Eigen::MatrixXd a, double tol = 1e-9) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const double scale = a.cwiseAbs().maxCoeff();
  const double eps = tol * (scale > 0.0 ? scale : 1.0);
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    }
    if (std::abs(a(best, c)) <= eps) continue;
    a.row(r).swap(a.row(best));
    a.row(r) /= a(r, c);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != r) a.row(i) -= a(i, c) * a.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  Eigen::MatrixXd basis(cols, cols - static_cast<Eigen::Index>(pivots.size()));
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cols);
    v(f) = 1.0;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      v(pivots[i]) = -a(static_cast<Eigen::Index>(i), f);
    }
    basis.col(k++) = v;
  }
  return basis;
}

/// Largest residual |a v| / |v| over the columns of `basis`.
inline double kernel_residual(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& basis) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    worst = std::max(worst, (a * basis.col(j)).norm() / basis.col(j).norm());
  }
  return worst;
}

/// True when every column of `b` lies in span(a) (and vice versa if the
/// column counts agree), judged by least-squares residuals.
inline bool same_span(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      double tol = 1e-8) {
  if (a.cols() != b.cols()) return false;
  if (a.cols() == 0) return true;
  auto inside = [tol](const Eigen::MatrixXd& base, const Eigen::MatrixXd& v) {
    const Eigen::MatrixXd coeff = base.colPivHouseholderQr().solve(v);
    return (base * coeff - v).norm() <= tol * std::max(1.0, v.norm());
  };
  return inside(a, b) && inside(b, a);
}

}  // namespace oracle
