#include "uhj/nonholonomic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "uhj/errors.hpp"

namespace uhj {

struct NonholonomicModel::Core {
  NonholonomicData data;
  std::size_t k = 0;
  Matrix reference_frame;  // n x (n-k), used only without a supplied D-basis

  std::size_t m() const { return data.n - k; }

  Matrix metric(const Vector& q) const {
    Matrix g = data.metric(q);
    const auto n = static_cast<Eigen::Index>(data.n);
    if (g.rows() != n || g.cols() != n) {
      throw InputError("nonholonomic: metric has the wrong shape");
    }
    return g;
  }

  Matrix constraints(const Vector& q) const {
    Matrix mu = data.constraints(q);
    if (static_cast<std::size_t>(mu.cols()) != data.n ||
        static_cast<std::size_t>(mu.rows()) != k) {
      throw InputError("nonholonomic: constraint matrix has the wrong shape");
    }
    return mu;
  }

  Matrix complement(const Vector& q) const {
    if (data.complement) {
      Matrix y = data.complement(q);
      if (static_cast<std::size_t>(y.rows()) != data.n ||
          static_cast<std::size_t>(y.cols()) != k) {
        throw InputError("nonholonomic: complement basis has the wrong shape");
      }
      return y;
    }
    return metric(q).llt().solve(constraints(q).transpose());
  }

  // g-orthogonal projection of the reference frame onto D(q), then
  // Gram-Schmidt in the metric. Smooth in q while the projections stay
  // independent.
  Matrix default_basis(const Vector& q) const {
    const Matrix g = metric(q);
    const Matrix mu = constraints(q);
    const Eigen::LLT<Matrix> llt(g);
    const Matrix ginv_mut = llt.solve(mu.transpose());  // n x k
    const Matrix gram = mu * ginv_mut;                   // k x k
    Matrix x = reference_frame - ginv_mut * gram.ldlt().solve(mu * reference_frame);
    for (Eigen::Index a = 0; a < x.cols(); ++a) {
      for (Eigen::Index b = 0; b < a; ++b) {
        x.col(a) -= (x.col(b).dot(g * x.col(a))) * x.col(b);
      }
      const double norm = std::sqrt(x.col(a).dot(g * x.col(a)));
      if (!(norm > 1e-8)) {
        throw DomainError("nonholonomic: default D-basis degenerates at this point");
      }
      x.col(a) /= norm;
    }
    return x;
  }

  Matrix basis(const Vector& q) const {
    if (data.distribution) {
      Matrix x = data.distribution(q);
      if (static_cast<std::size_t>(x.rows()) != data.n ||
          static_cast<std::size_t>(x.cols()) != m()) {
        throw InputError("nonholonomic: D-basis has the wrong shape");
      }
      return x;
    }
    return default_basis(q);
  }

  Matrix frame(const Vector& q) const {
    Matrix f(data.n, data.n);
    f << basis(q), complement(q);
    return f;
  }

  Vector momenta(const Vector& q, const Vector& pt) const {
    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(data.n));
    rhs.head(static_cast<Eigen::Index>(m())) = pt;
    return frame(q).transpose().partialPivLu().solve(rhs);
  }

  // Columns dX/dq^i stacked: result[i] is n x m.
  std::vector<Matrix> basis_derivatives(const Vector& q) const {
    std::vector<Matrix> out;
    Vector z = q;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double h = fd_step(q(i));
      z(i) = q(i) + h;
      const Matrix up = basis(z);
      z(i) = q(i) - h;
      const Matrix down = basis(z);
      z(i) = q(i);
      out.push_back((up - down) / (2.0 * h));
    }
    return out;
  }

  Matrix lie_brackets(const Vector& q) const {
    const Matrix x = basis(q);
    const auto dx = basis_derivatives(q);
    const auto n = static_cast<Eigen::Index>(data.n);
    const auto mm = static_cast<Eigen::Index>(m());
    // Directional derivative of X_b along X_a: sum_i X^i_a dX_b/dq^i.
    auto along = [&](Eigen::Index a, Eigen::Index b) {
      Vector v = Vector::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) v += x(i, a) * dx[static_cast<std::size_t>(i)].col(b);
      return v;
    };
    Matrix out(n, mm * mm);
    for (Eigen::Index a = 0; a < mm; ++a) {
      for (Eigen::Index b = 0; b < mm; ++b) {
        out.col(a * mm + b) = along(a, b) - along(b, a);
      }
    }
    return out;
  }

  Matrix momentum_block(const Vector& q, const Vector& pt) const {
    const Vector p = momenta(q, pt);
    const Matrix brackets = lie_brackets(q);
    const auto mm = static_cast<Eigen::Index>(m());
    Matrix block = Matrix::Zero(mm, mm);
    for (Eigen::Index a = 0; a < mm; ++a) {
      for (Eigen::Index b = a + 1; b < mm; ++b) {
        block(a, b) = p.dot(brackets.col(a * mm + b));
        block(b, a) = -block(a, b);
      }
    }
    return block;
  }

  double full_hamiltonian(const Vector& q, const Vector& p) const {
    return 0.5 * p.dot(metric(q).llt().solve(p)) + data.potential(q);
  }
};

NonholonomicModel::NonholonomicModel(NonholonomicData data) {
  if (data.n == 0) throw InputError("nonholonomic: n must be >= 1");
  if (!data.metric || !data.constraints) {
    throw InputError("nonholonomic: metric and constraints are required");
  }
  auto core = std::make_shared<Core>();
  core->data = std::move(data);
  const auto n = static_cast<Eigen::Index>(core->data.n);
  const Vector q0 = core->data.reference_point.value_or(Vector::Zero(n));
  if (q0.size() != n) throw InputError("nonholonomic: reference point has the wrong size");

  const Matrix mu0 = core->data.constraints(q0);
  if (mu0.cols() != n) throw InputError("nonholonomic: constraint matrix has the wrong shape");
  core->k = static_cast<std::size_t>(mu0.rows());
  if (core->k >= core->data.n) {
    throw InputError("nonholonomic: need fewer constraints than dimensions");
  }
  if (!core->data.distribution) {
    core->reference_frame = kernel(mu0).basis();
    if (static_cast<std::size_t>(core->reference_frame.cols()) != core->m()) {
      throw InputError("nonholonomic: constraints are dependent");
    }
  }
  core_ = core;
  validate_at(q0);

  std::vector<std::string> q_names;
  std::vector<std::string> pt_names;
  for (std::size_t i = 1; i <= core->data.n; ++i) q_names.push_back("q" + std::to_string(i));
  for (std::size_t a = 1; a <= core->m(); ++a) pt_names.push_back("pt" + std::to_string(a));
  chart_.emplace(std::move(q_names), std::move(pt_names));

  const auto mm = static_cast<Eigen::Index>(core->m());
  std::shared_ptr<const Core> shared = core;
  bivector_.emplace(*chart_, [shared, n, mm](const Vector& z) {
    const Vector q = z.head(n);
    const Vector pt = z.tail(mm);
    const Matrix x = shared->basis(q);
    Matrix l = Matrix::Zero(n + mm, n + mm);
    l.topRightCorner(n, mm) = -x;
    l.bottomLeftCorner(mm, n) = x.transpose();
    l.bottomRightCorner(mm, mm) = shared->momentum_block(q, pt);
    return l;
  });
  hamiltonian_.emplace([shared, n, mm](const Vector& z) {
    const Vector q = z.head(n);
    return shared->full_hamiltonian(q, shared->momenta(q, z.tail(mm)));
  });
}

std::size_t NonholonomicModel::n() const noexcept { return core_->data.n; }
std::size_t NonholonomicModel::k() const noexcept { return core_->k; }
const FiberedChart& NonholonomicModel::chart() const noexcept { return *chart_; }
const FiberedBivector& NonholonomicModel::bivector() const noexcept { return *bivector_; }
const ScalarField& NonholonomicModel::hamiltonian() const noexcept { return *hamiltonian_; }

Matrix NonholonomicModel::metric(const Vector& q) const { return core_->metric(q); }
Matrix NonholonomicModel::constraints(const Vector& q) const { return core_->constraints(q); }
Matrix NonholonomicModel::d_basis(const Vector& q) const { return core_->basis(q); }
Matrix NonholonomicModel::complement_basis(const Vector& q) const { return core_->complement(q); }

Vector NonholonomicModel::momenta(const Vector& q, const Vector& pt) const {
  if (static_cast<std::size_t>(q.size()) != n() ||
      static_cast<std::size_t>(pt.size()) != dim_d()) {
    throw InputError("nonholonomic momenta: dimension mismatch");
  }
  return core_->momenta(q, pt);
}

Vector NonholonomicModel::adapted_momenta(const Vector& q, const Vector& p) const {
  return core_->basis(q).transpose() * p;
}

double NonholonomicModel::constraint_violation(const Vector& q, const Vector& p) const {
  const Vector v = core_->metric(q).llt().solve(p);
  return (core_->constraints(q) * v).cwiseAbs().maxCoeff();
}

double NonholonomicModel::full_hamiltonian(const Vector& q, const Vector& p) const {
  return core_->full_hamiltonian(q, p);
}

Matrix NonholonomicModel::lie_brackets(const Vector& q) const { return core_->lie_brackets(q); }

Matrix NonholonomicModel::momentum_block(const Vector& q, const Vector& pt) const {
  return core_->momentum_block(q, pt);
}

void NonholonomicModel::validate_at(const Vector& q) const {
  const Core& s = *core_;
  const Matrix g = s.metric(q);
  require_finite(g, "nonholonomic metric");
  if ((g - g.transpose()).norm() > 1e-12 * g.norm() ||
      g.llt().info() != Eigen::Success) {
    throw InputError("nonholonomic: metric is not symmetric positive definite");
  }
  const Matrix mu = s.constraints(q);
  if (rank(mu) != s.k) throw InputError("nonholonomic: constraints are dependent");
  const Matrix x = s.basis(q);
  const double scale = std::max(1.0, mu.norm() * x.norm());
  const double leak = max_abs(mu * x);
  if (leak > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "nonholonomic: D-basis violates the constraints (|mu(X)| = " << leak << ")";
    throw InputError(msg.str());
  }
  if (rank(s.frame(q)) != s.data.n) {
    throw InputError("nonholonomic: D-basis and complement are not independent");
  }
}

Section adapted_section(const NonholonomicModel& model, OneForm gamma) {
  return Section(model.chart(), [model, gamma = std::move(gamma)](const Vector& q) {
    return model.adapted_momenta(q, gamma(q));
  });
}

OneForm one_form_of(const NonholonomicModel& model, const Section& section) {
  return [model, section](const Vector& q) {
    return model.momenta(q, section.fiber(q));
  };
}

double nh_section_check(const NonholonomicModel& model, const OneForm& gamma,
                        const Vector& q) {
  const Vector p = gamma(q);
  const double violation = model.constraint_violation(q, p);
  if (violation > 1e-10 * std::max(1.0, p.norm())) {
    std::ostringstream msg;
    msg << "nh_section_check: 1-form is not valued in M (constraint violation "
        << violation << ")";
    throw InputError(msg.str());
  }
  const Matrix x = model.d_basis(q);
  const Matrix brackets = model.lie_brackets(q);
  const auto m = static_cast<Eigen::Index>(model.dim_d());
  double worst = 0.0;
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      // gamma(X_b) and gamma(X_a) as functions on Q, differentiated along X_a, X_b.
      auto pairing = [&](Eigen::Index c) {
        return [&, c](const Vector& z) { return gamma(z).dot(model.d_basis(z).col(c)); };
      };
      const double xa_of_gb = fd_gradient(pairing(b), q).dot(x.col(a));
      const double xb_of_ga = fd_gradient(pairing(a), q).dot(x.col(b));
      const double value = xa_of_gb - xb_of_ga - p.dot(brackets.col(a * m + b));
      worst = std::max(worst, std::abs(value));
    }
  }
  return worst;
}

double nh_hj_check(const NonholonomicModel& model, const OneForm& gamma,
                   const Vector& q) {
  const Vector d = fd_gradient(
      [&](const Vector& z) { return model.full_hamiltonian(z, gamma(z)); }, q);
  const Vector pairings = model.d_basis(q).transpose() * d;
  return pairings.size() == 0 ? 0.0 : pairings.cwiseAbs().maxCoeff();
}

}  // namespace uhj
