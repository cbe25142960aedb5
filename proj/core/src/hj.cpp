#include "uhj/hj.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "uhj/errors.hpp"

namespace uhj {

Section::Section(FiberedChart chart, Map fiber, Jacobian jacobian)
    : chart_(std::move(chart)),
      fiber_(std::move(fiber)),
      jacobian_(std::move(jacobian)) {
  if (!fiber_) throw InputError("Section: empty map");
}

Section Section::constant(FiberedChart chart, Vector value) {
  if (static_cast<std::size_t>(value.size()) != chart.n_fiber()) {
    throw InputError("Section::constant: wrong fiber dimension");
  }
  const auto m = value.size();
  const auto n = static_cast<Eigen::Index>(chart.n_base());
  return Section(
      std::move(chart), [v = std::move(value)](const Vector&) { return v; },
      [m, n](const Vector&) -> Matrix { return Matrix::Zero(m, n); });
}

Vector Section::fiber(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != chart_.n_base()) {
    throw InputError("Section: base point dimension mismatch");
  }
  Vector y = fiber_(x);
  if (static_cast<std::size_t>(y.size()) != chart_.n_fiber()) {
    throw InputError("Section: map returned the wrong fiber dimension");
  }
  if (!y.allFinite()) throw DomainError("Section: non-finite value");
  return y;
}

Vector Section::point(const Vector& x) const {
  return chart_.join(x, fiber(x));
}

Matrix Section::jacobian(const Vector& x) const {
  if (!jacobian_) return fd_jacobian(x);
  Matrix j = jacobian_(x);
  if (static_cast<std::size_t>(j.rows()) != chart_.n_fiber() ||
      static_cast<std::size_t>(j.cols()) != chart_.n_base()) {
    throw InputError("Section: analytic jacobian has the wrong shape");
  }
  return j;
}

Matrix Section::fd_jacobian(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != chart_.n_base()) {
    throw InputError("Section: base point dimension mismatch");
  }
  Matrix j = uhj::fd_jacobian([this](const Vector& z) { return fiber(z); }, x);
  if (!j.allFinite()) throw DomainError("Section: non-finite jacobian");
  return j;
}

BoxGrid::BoxGrid(Vector lo, Vector hi, std::vector<std::size_t> counts)
    : lo_(std::move(lo)), hi_(std::move(hi)), counts_(std::move(counts)) {
  if (lo_.size() != hi_.size() ||
      static_cast<std::size_t>(lo_.size()) != counts_.size()) {
    throw InputError("BoxGrid: inconsistent axis counts");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (counts_[i] == 0) throw InputError("BoxGrid: zero points on an axis");
    if (!(lo_(k) <= hi_(k))) throw InputError("BoxGrid: lo > hi");
  }
}

BoxGrid::BoxGrid(Vector lo, Vector hi, std::size_t per_axis)
    : BoxGrid(lo, hi, std::vector<std::size_t>(static_cast<std::size_t>(lo.size()), per_axis)) {}

std::size_t BoxGrid::size() const noexcept {
  std::size_t n = 1;
  for (auto c : counts_) n *= c;
  return n;
}

Vector BoxGrid::point(std::size_t index) const {
  if (index >= size()) throw InputError("BoxGrid: index out of range");
  Vector p(lo_.size());
  for (std::size_t axis = counts_.size(); axis-- > 0;) {
    const auto k = static_cast<Eigen::Index>(axis);
    const std::size_t c = counts_[axis];
    const std::size_t j = index % c;
    index /= c;
    p(k) = c == 1 ? 0.5 * (lo_(k) + hi_(k))
                  : lo_(k) + (hi_(k) - lo_(k)) * static_cast<double>(j) /
                                 static_cast<double>(c - 1);
  }
  return p;
}

std::vector<Vector> BoxGrid::points() const {
  std::vector<Vector> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

Matrix graph_lift(const Section& section, const Vector& x) {
  const auto n = static_cast<Eigen::Index>(section.chart().n_base());
  const auto m = static_cast<Eigen::Index>(section.chart().n_fiber());
  Matrix lift(n + m, n);
  lift.topRows(n).setIdentity();
  lift.bottomRows(m) = section.jacobian(x);
  return lift;
}

Subspace graph_tangent(const Section& section, const Vector& x, double tol) {
  return Subspace::span(graph_lift(section, x), tol);
}

Matrix lagrangian_residual(const FiberedBivector& bivector,
                           const Section& section, const Vector& x) {
  if (!(bivector.chart().n_base() == section.chart().n_base() &&
        bivector.chart().n_fiber() == section.chart().n_fiber())) {
    throw InputError("lagrangian_residual: chart mismatch");
  }
  const auto n = static_cast<Eigen::Index>(bivector.chart().n_base());
  const auto m = static_cast<Eigen::Index>(bivector.chart().n_fiber());
  const Matrix l = bivector.components(section.point(x));
  const Matrix j = section.jacobian(x);  // m x n

  const Matrix base_base = l.topLeftCorner(n, n);      // L^{ij}
  const Matrix base_fiber = l.topRightCorner(n, m);    // L^{jb}
  const Matrix fiber_fiber = l.bottomRightCorner(m, m);  // L^{ab}

  // R = L^{ab} - J L^{jb} + (J L^{jb})^T + J L^{ij} J^T
  const Matrix jb = j * base_fiber;
  return fiber_fiber - jb + jb.transpose() + j * base_base * j.transpose();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Vector projected_field(const FiberedBivector& bivector, const ScalarField& h,
                       const Section& section, const Vector& x) {
  const Vector full = hamiltonian_field(bivector, h, section.point(x));
  return full.head(static_cast<Eigen::Index>(bivector.chart().n_base()));
}

HJDefect hj_condition_defect(const FiberedBivector& bivector,
                             const ScalarField& h, const Section& section,
                             const Vector& x, double tol) {
  const Vector p = section.point(x);
  const Subspace tangent = graph_tangent(section, x);
  const Subspace c = characteristic_subspace(bivector, p);
  const Subspace s = intersect(tangent, c, tol);
  HJDefect out;
  out.intersection_dim = s.dim();
  if (s.dim() == 0) return out;
  const Vector pairing = s.basis().transpose() * h.gradient(p);
  out.defect = pairing.cwiseAbs().maxCoeff();
  return out;
}

Vector relatedness_gap(const FiberedBivector& bivector, const ScalarField& h,
                       const Section& section, const Vector& x) {
  const Vector p = section.point(x);
  const Vector upstairs = hamiltonian_field(bivector, h, p);
  const auto n = static_cast<Eigen::Index>(bivector.chart().n_base());
  const Vector down = upstairs.head(n);
  return upstairs - graph_lift(section, x) * down;
}

double relatedness_defect(const FiberedBivector& bivector,
                          const ScalarField& h, const Section& section,
                          const Vector& x) {
  return relatedness_gap(bivector, h, section, x).norm();
}

Vector dh_closed_on_base(const ScalarField& h, const Section& section,
                         const Vector& x) {
  const Vector p = section.point(x);
  // Chain rule through the graph: d(h o gamma) = (T gamma)^T dh.
  return graph_lift(section, x).transpose() * h.gradient(p);
}

HJVerdict theorem_verdict(const FiberedBivector& bivector,
                          const ScalarField& h, const Section& section,
                          const Vector& x, const EquivalenceOptions& options) {
  HJVerdict v;
  v.x = x;
  v.lagrangian_residual = max_abs(lagrangian_residual(bivector, section, x));
  const HJDefect d =
      hj_condition_defect(bivector, h, section, x, options.intersection_tol);
  v.hj_defect = d.defect;
  v.intersection_dim = d.intersection_dim;
  v.relatedness_defect = relatedness_defect(bivector, h, section, x);
  v.hypothesis_holds = v.lagrangian_residual <= options.residual_tol;
  v.hj_holds = v.hj_defect <= options.defect_tol;
  v.related_holds = v.relatedness_defect <= options.relatedness_tol();
  return v;
}

std::vector<HJVerdict> theorem_equivalence_report(
    const FiberedBivector& bivector, const ScalarField& h,
    const Section& section, const std::vector<Vector>& grid,
    const EquivalenceOptions& options) {
  std::vector<HJVerdict> out;
  out.reserve(grid.size());
  for (const auto& x : grid) {
    out.push_back(theorem_verdict(bivector, h, section, x, options));
  }
  return out;
}

}  // namespace uhj
