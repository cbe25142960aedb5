#include "uhj/geometry.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "uhj/errors.hpp"

namespace uhj {

FiberedChart::FiberedChart(std::vector<std::string> base_names,
                           std::vector<std::string> fiber_names)
    : base_(std::move(base_names)), fiber_(std::move(fiber_names)) {
  if (dim() == 0) throw InputError("FiberedChart: no coordinates");
  std::set<std::string> seen;
  for (const auto& name : names()) {
    if (name.empty()) throw InputError("FiberedChart: empty coordinate name");
    if (!seen.insert(name).second) {
      throw InputError("FiberedChart: duplicate coordinate name '" + name + "'");
    }
  }
}

FiberedChart FiberedChart::with_default_names(std::size_t n_base,
                                              std::size_t n_fiber) {
  std::vector<std::string> base;
  std::vector<std::string> fiber;
  for (std::size_t i = 0; i < n_base; ++i) base.push_back("x" + std::to_string(i + 1));
  for (std::size_t a = 0; a < n_fiber; ++a) fiber.push_back("y" + std::to_string(a + 1));
  return FiberedChart(std::move(base), std::move(fiber));
}

std::vector<std::string> FiberedChart::names() const {
  std::vector<std::string> all = base_;
  all.insert(all.end(), fiber_.begin(), fiber_.end());
  return all;
}

std::optional<std::size_t> FiberedChart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_[i] == name) return i;
  }
  for (std::size_t a = 0; a < fiber_.size(); ++a) {
    if (fiber_[a] == name) return base_.size() + a;
  }
  return std::nullopt;
}

Vector FiberedChart::base_of(const Vector& point) const {
  if (static_cast<std::size_t>(point.size()) != dim()) {
    throw InputError("FiberedChart::base_of: dimension mismatch");
  }
  return point.head(static_cast<Eigen::Index>(n_base()));
}

Vector FiberedChart::fiber_of(const Vector& point) const {
  if (static_cast<std::size_t>(point.size()) != dim()) {
    throw InputError("FiberedChart::fiber_of: dimension mismatch");
  }
  return point.tail(static_cast<Eigen::Index>(n_fiber()));
}

Vector FiberedChart::join(const Vector& base, const Vector& fiber) const {
  if (static_cast<std::size_t>(base.size()) != n_base() ||
      static_cast<std::size_t>(fiber.size()) != n_fiber()) {
    throw InputError("FiberedChart::join: dimension mismatch");
  }
  Vector p(static_cast<Eigen::Index>(dim()));
  p << base, fiber;
  return p;
}

FiberedBivector::FiberedBivector(FiberedChart chart, Evaluator eval)
    : chart_(std::move(chart)), eval_(std::move(eval)) {
  if (!eval_) throw InputError("FiberedBivector: empty evaluator");
}

FiberedBivector FiberedBivector::constant(FiberedChart chart, Matrix components) {
  const auto n = static_cast<Eigen::Index>(chart.dim());
  if (components.rows() != n || components.cols() != n) {
    throw InputError("FiberedBivector::constant: wrong matrix size");
  }
  return FiberedBivector(std::move(chart),
                         [c = std::move(components)](const Vector&) { return c; });
}

FiberedBivector FiberedBivector::zero(FiberedChart chart) {
  const auto n = static_cast<Eigen::Index>(chart.dim());
  return constant(std::move(chart), Matrix::Zero(n, n));
}

Matrix FiberedBivector::components(const Vector& p) const {
  const auto n = static_cast<Eigen::Index>(chart_.dim());
  if (p.size() != n) throw InputError("bivector: point dimension mismatch");
  Matrix l = eval_(p);
  if (l.rows() != n || l.cols() != n) {
    throw InputError("bivector: evaluator returned a matrix of the wrong size");
  }
  require_finite(l, "bivector components");
  const double skew = (l + l.transpose()).norm();
  if (skew > 1e-12 * l.norm() + 1e-14) {
    throw InputError("bivector: component matrix is not antisymmetric");
  }
  return l;
}

Vector fd_gradient(const std::function<double(const Vector&)>& f,
                   const Vector& p) {
  Vector g(p.size());
  Vector z = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = fd_step(p(i));
    z(i) = p(i) + h;
    const double up = f(z);
    z(i) = p(i) - h;
    const double down = f(z);
    z(i) = p(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f,
                   const Vector& p) {
  Matrix j;
  Vector z = p;
  for (Eigen::Index c = 0; c < p.size(); ++c) {
    const double h = fd_step(p(c));
    z(c) = p(c) + h;
    const Vector up = f(z);
    z(c) = p(c) - h;
    const Vector down = f(z);
    z(c) = p(c);
    if (c == 0) j.resize(up.size(), p.size());
    j.col(c) = (up - down) / (2.0 * h);
  }
  if (p.size() == 0) j.resize(f(p).size(), 0);
  return j;
}

ScalarField::ScalarField(Value value, Gradient gradient)
    : value_(std::move(value)), gradient_(std::move(gradient)) {
  if (!value_) throw InputError("ScalarField: empty value function");
}

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](const Vector&) { return c; },
                     [](const Vector& p) -> Vector { return Vector::Zero(p.size()); });
}

Vector ScalarField::gradient(const Vector& p) const {
  if (gradient_) {
    Vector g = gradient_(p);
    if (g.size() != p.size()) {
      throw InputError("ScalarField: analytic gradient has the wrong size");
    }
    return g;
  }
  return fd_gradient(p);
}

Vector ScalarField::fd_gradient(const Vector& p) const {
  return uhj::fd_gradient(value_, p);
}

Vector sharp_apply(const FiberedBivector& bivector, const Vector& p,
                   const Vector& alpha) {
  const Matrix l = bivector.components(p);
  if (alpha.size() != l.rows()) {
    throw InputError("sharp_apply: covector dimension mismatch");
  }
  return l.transpose() * alpha;
}

Vector hamiltonian_field(const FiberedBivector& bivector, const ScalarField& h,
                         const Vector& p) {
  return sharp_apply(bivector, p, h.gradient(p));
}

Subspace characteristic_subspace(const FiberedBivector& bivector,
                                 const Vector& p, double tol) {
  // Image of sharp = column space of L^T.
  return column_space(bivector.components(p).transpose(), tol);
}

SubspaceCheck lemma_check(const FiberedBivector& bivector, const Vector& p,
                          double tol) {
  const Matrix l = bivector.components(p);
  const Subspace image = column_space(l.transpose(), tol);
  const Subspace ker = kernel(l.transpose(), tol);
  const Subspace ann = annihilator(image);
  SubspaceCheck out;
  out.defect = principal_angle_defect(ann, ker);
  out.holds = ann.dim() == ker.dim() && out.defect <= std::max(tol, 1e-10);
  return out;
}

SubspaceCheck subspace_lagrangian_check(const FiberedBivector& bivector,
                                        const Vector& p, const Subspace& tn,
                                        double tol) {
  const Matrix l = bivector.components(p);
  if (tn.ambient_dim() != static_cast<std::size_t>(l.rows())) {
    throw InputError("subspace_lagrangian_check: dimension mismatch");
  }
  const Subspace conormal = annihilator(tn);
  const Matrix images = l.transpose() * conormal.basis();
  // Images that are negligible relative to |L| belong to ker(sharp).
  const Subspace lhs = Subspace::span(images, tol, l.norm());
  const Subspace c = column_space(l.transpose(), kDefaultRankTol);
  const Subspace rhs = intersect(tn, c, tol);
  SubspaceCheck out;
  out.defect = principal_angle_defect(lhs, rhs);
  out.holds = lhs.dim() == rhs.dim() && out.defect <= tol;
  return out;
}

RankStats rank_scan(const FiberedBivector& bivector,
                    const std::vector<Vector>& points, double tol) {
  RankStats stats;
  for (const auto& p : points) {
    const std::size_t r = rank(bivector.components(p), tol);
    if (stats.samples == 0) {
      stats.min_rank = stats.max_rank = r;
    } else {
      stats.min_rank = std::min(stats.min_rank, r);
      stats.max_rank = std::max(stats.max_rank, r);
    }
    ++stats.samples;
  }
  return stats;
}

}  // namespace uhj
