#include "uhj/extended.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "uhj/errors.hpp"

namespace uhj {

namespace {

FiberedChart extended_chart(const FiberedChart& inner) {
  for (const auto& name : inner.names()) {
    if (name == "t" || name == "e") {
      throw InputError("extended chart: inner coordinates may not be named t or e");
    }
  }
  std::vector<std::string> base{"t"};
  std::vector<std::string> fiber{"e"};
  base.insert(base.end(), inner.base_names().begin(), inner.base_names().end());
  fiber.insert(fiber.end(), inner.fiber_names().begin(), inner.fiber_names().end());
  return FiberedChart(std::move(base), std::move(fiber));
}

// Index maps between (t, x, y) and (t, x, e, y).
Vector drop_energy(const Vector& ext, Eigen::Index e) {
  Vector out(ext.size() - 1);
  out << ext.head(e), ext.tail(ext.size() - e - 1);
  return out;
}

Vector insert_energy(const Vector& reduced, Eigen::Index e, double value) {
  Vector out(reduced.size() + 1);
  out << reduced.head(e), value, reduced.tail(reduced.size() - e);
  return out;
}

}  // namespace

TimeDependentModel::TimeDependentModel(FiberedBivector inner, ScalarField h)
    : inner_(std::move(inner)),
      h_(std::move(h)),
      chart_(extended_chart(inner_.chart())),
      bivector_(FiberedBivector::zero(chart_)),
      h_ext_(ScalarField::constant(0.0)) {
  const auto nb = static_cast<Eigen::Index>(inner_.chart().n_base());
  const auto nf = static_cast<Eigen::Index>(inner_.chart().n_fiber());
  const Eigen::Index e = nb + 1;
  const Eigen::Index big = nb + nf + 2;

  // Inner point (x, y) from an extended point (t, x, e, y), and the inverse
  // index map for embedding the inner block.
  auto inner_point = [nb, nf](const Vector& z) {
    Vector p(nb + nf);
    p << z.segment(1, nb), z.tail(nf);
    return p;
  };
  std::vector<Eigen::Index> slot;
  for (Eigen::Index i = 0; i < nb; ++i) slot.push_back(1 + i);
  for (Eigen::Index a = 0; a < nf; ++a) slot.push_back(e + 1 + a);

  bivector_ = FiberedBivector(
      chart_, [inner = inner_, inner_point, slot, e, big](const Vector& z) {
        const Matrix l = inner.components(inner_point(z));
        Matrix out = Matrix::Zero(big, big);
        out(0, e) = -1.0;
        out(e, 0) = 1.0;
        for (std::size_t r = 0; r < slot.size(); ++r) {
          for (std::size_t c = 0; c < slot.size(); ++c) {
            out(slot[r], slot[c]) = l(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
          }
        }
        return out;
      });

  ScalarField::Gradient grad;
  if (h_.has_analytic_gradient()) {
    grad = [h = h_, e](const Vector& z) {
      return insert_energy(h.gradient(drop_energy(z, e)), e, 1.0);
    };
  }
  h_ext_ = ScalarField(
      [h = h_, e](const Vector& z) { return h(drop_energy(z, e)) + z(e); },
      std::move(grad));
}

Vector TimeDependentModel::project(const Vector& ext) const {
  if (static_cast<std::size_t>(ext.size()) != chart_.dim()) {
    throw InputError("TimeDependentModel::project: dimension mismatch");
  }
  return drop_energy(ext, static_cast<Eigen::Index>(energy_index()));
}

Vector TimeDependentModel::lift(const Vector& txy, double e) const {
  if (static_cast<std::size_t>(txy.size()) + 1 != chart_.dim()) {
    throw InputError("TimeDependentModel::lift: dimension mismatch");
  }
  return insert_energy(txy, static_cast<Eigen::Index>(energy_index()), e);
}

Vector TimeDependentModel::evolution_field(const Vector& txy) const {
  const Vector inner_point = txy.tail(txy.size() - 1);
  const Vector dh = h_.gradient(txy).tail(txy.size() - 1);
  Vector out(txy.size());
  out << 1.0, sharp_apply(inner_, inner_point, dh);
  return out;
}

Vector TimeDependentModel::push_forward(const Vector& ext_vector) const {
  return project(ext_vector);
}

ForcedModel::ForcedModel(std::size_t n, ScalarField h, ForceField force)
    : n_(n),
      h_(std::move(h)),
      force_(std::move(force)),
      chart_([n] {
        if (n == 0) throw InputError("forced model needs n >= 1");
        std::vector<std::string> base{"t"};
        std::vector<std::string> fiber{"e"};
        for (std::size_t i = 1; i <= n; ++i) {
          base.push_back("q" + std::to_string(i));
          fiber.push_back("p" + std::to_string(i));
        }
        return FiberedChart(std::move(base), std::move(fiber));
      }()),
      bivector_(FiberedBivector::zero(chart_)),
      h_ext_(ScalarField::constant(0.0)) {
  if (!force_) throw InputError("forced model: empty force field");
  const auto m = static_cast<Eigen::Index>(n_);
  const Eigen::Index e = m + 1;
  const Eigen::Index big = 2 * m + 2;

  bivector_ = FiberedBivector(chart_, [this_force = force_, m, e, big](const Vector& z) {
    const Vector f = this_force(drop_energy(z, e));
    if (f.size() != m) throw InputError("forced model: force has the wrong size");
    Matrix l = Matrix::Zero(big, big);
    l(0, e) = -1.0;
    l(e, 0) = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index q = 1 + i;
      const Eigen::Index p = e + 1 + i;
      l(q, p) = -1.0;
      l(p, q) = 1.0;
      l(e, p) = -f(i);
      l(p, e) = f(i);
    }
    return l;
  });

  ScalarField::Gradient grad;
  if (h_.has_analytic_gradient()) {
    grad = [h = h_, e](const Vector& z) {
      return insert_energy(h.gradient(drop_energy(z, e)), e, 1.0);
    };
  }
  h_ext_ = ScalarField(
      [h = h_, e](const Vector& z) { return h(drop_energy(z, e)) + z(e); },
      std::move(grad));
}

Vector ForcedModel::project(const Vector& ext) const {
  if (static_cast<std::size_t>(ext.size()) != chart_.dim()) {
    throw InputError("ForcedModel::project: dimension mismatch");
  }
  return drop_energy(ext, static_cast<Eigen::Index>(energy_index()));
}

Vector ForcedModel::lift(const Vector& tqp, double e) const {
  if (static_cast<std::size_t>(tqp.size()) + 1 != chart_.dim()) {
    throw InputError("ForcedModel::lift: dimension mismatch");
  }
  return insert_energy(tqp, static_cast<Eigen::Index>(energy_index()), e);
}

Vector ForcedModel::force(const Vector& tqp) const {
  Vector f = force_(tqp);
  if (static_cast<std::size_t>(f.size()) != n_) {
    throw InputError("forced model: force has the wrong size");
  }
  return f;
}

Vector ForcedModel::evolution_field(const Vector& tqp) const {
  const auto m = static_cast<Eigen::Index>(n_);
  const Vector g = h_.gradient(tqp);
  Vector out(2 * m + 1);
  out << 1.0, g.tail(m), -g.segment(1, m) - force(tqp);
  return out;
}

Matrix ForcedModel::omega(const Vector& ext) const {
  return bivector_.components(ext).inverse();
}

Matrix ForcedModel::omega_closed_form(const Vector& ext) const {
  const auto m = static_cast<Eigen::Index>(n_);
  const Eigen::Index e = m + 1;
  const Vector f = force(project(ext));
  Matrix w = Matrix::Zero(2 * m + 2, 2 * m + 2);
  w(0, e) = 1.0;  // dt ^ de
  w(e, 0) = -1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index q = 1 + i;
    const Eigen::Index p = e + 1 + i;
    w(q, p) = 1.0;  // dq ^ dp
    w(p, q) = -1.0;
    w(q, 0) = f(i);  // F dq ^ dt
    w(0, q) = -f(i);
  }
  return w;
}

Vector ForcedModel::push_forward(const Vector& ext_vector) const {
  return project(ext_vector);
}

ExtendedHJResult tdep_hj_check(const FiberedBivector& ext,
                               const ScalarField& h_ext, const Section& gamma,
                               const Vector& x, std::size_t time_index,
                               double tol) {
  const Vector u = gamma.point(x);
  const Subspace tangent = graph_tangent(gamma, x);
  const Subspace c = characteristic_subspace(ext, u);
  const Subspace s = intersect(tangent, c, tol);
  const Subspace ann = annihilator(s);
  Vector dt = Vector::Zero(u.size());
  dt(static_cast<Eigen::Index>(time_index)) = 1.0;
  const AffineFit fit = solve_affine_membership(h_ext.gradient(u), ann, dt);
  return ExtendedHJResult{fit.residual, fit.coefficient, s.dim()};
}

double extended_relatedness_defect(const FiberedBivector& ext,
                                   const ScalarField& h_ext,
                                   const Section& gamma, const Vector& x,
                                   std::size_t energy_index) {
  const Vector gap = relatedness_gap(ext, h_ext, gamma, x);
  return drop_energy(gap, static_cast<Eigen::Index>(energy_index)).norm();
}

double forced_section_check(const ForcedModel& model, const Section& gamma,
                            const Vector& x) {
  if (!(gamma.chart() == model.chart())) {
    throw InputError("forced_section_check: section chart does not match the model");
  }
  const auto m = static_cast<Eigen::Index>(model.n());
  const Matrix j = gamma.jacobian(x);  // fiber (e, p) x base (t, q)
  // The 1-form component paired with base slot b sits in fiber slot b.
  const Matrix dgamma = j.transpose() - j;  // (a, b) -> d_a gamma_b - d_b gamma_a
  const Vector u = gamma.point(x);
  const Vector f = model.force(model.project(u));
  Matrix rhs = Matrix::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs(1 + i, 0) = f(i);
    rhs(0, 1 + i) = -f(i);
  }
  return max_abs(dgamma - rhs);
}

}  // namespace uhj
