#include "uhj/canonical.hpp"

#include <string>

#include "uhj/errors.hpp"

namespace uhj {

FiberedChart canonical_chart(std::size_t n) {
  if (n == 0) throw InputError("canonical chart needs n >= 1");
  std::vector<std::string> q;
  std::vector<std::string> p;
  for (std::size_t i = 1; i <= n; ++i) {
    q.push_back("q" + std::to_string(i));
    p.push_back("p" + std::to_string(i));
  }
  return FiberedChart(std::move(q), std::move(p));
}

Matrix canonical_block(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix l = Matrix::Zero(2 * m, 2 * m);
  l.topRightCorner(m, m) = -Matrix::Identity(m, m);
  l.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  return l;
}

CanonicalModel build_canonical(std::size_t n, ScalarField h) {
  return CanonicalModel{
      n, FiberedBivector::constant(canonical_chart(n), canonical_block(n)),
      std::move(h)};
}

double closed_form_check(const Section& gamma, const Vector& q) {
  if (gamma.chart().n_base() != gamma.chart().n_fiber()) {
    throw InputError("closed_form_check: section is not a 1-form on the base");
  }
  const Matrix j = gamma.jacobian(q);
  return max_abs(j - j.transpose());
}

namespace {

Eigen::LLT<Matrix> spd_factor(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw InputError("metric must be a nonempty square matrix");
  }
  require_finite(g, "metric");
  if ((g - g.transpose()).norm() > 1e-12 * g.norm()) {
    throw InputError("metric is not symmetric");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw InputError("metric is not positive definite");
  }
  return llt;
}

}  // namespace

Vector legendre(const Matrix& g, const Vector& v) {
  spd_factor(g);
  if (v.size() != g.rows()) throw InputError("legendre: dimension mismatch");
  return g * v;
}

Vector legendre_inv(const Matrix& g, const Vector& p) {
  const auto llt = spd_factor(g);
  if (p.size() != g.rows()) throw InputError("legendre_inv: dimension mismatch");
  return llt.solve(p);
}

}  // namespace uhj
