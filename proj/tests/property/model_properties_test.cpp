#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "canonical_bracket.hpp"
#include "families.hpp"
#include "uhj/canonical.hpp"
#include "uhj/extended.hpp"
#include "uhj/registry.hpp"

namespace {

using support::vec;
using uhj::Matrix;
using uhj::ScalarField;
using uhj::Section;
using uhj::Vector;

TEST(ModelProperties, AllModelsAntisymmetric) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const auto& info : uhj::model_catalog()) {
    const auto m = info.needs_hamiltonian ? uhj::make_model(info.name, {{"n", 3}}, "q1")
                                          : uhj::make_model(info.name);
    for (int k = 0; k < 50; ++k) {
      Vector z(static_cast<Eigen::Index>(m.bivector.chart().dim()));
      for (auto& v : z) v = u(rng);
      const Matrix l = m.bivector.components(z);
      EXPECT_LE((l + l.transpose()).norm(), 1e-12 * l.norm() + 1e-14) << info.name;
    }
  }
}

TEST(ModelProperties, SharpIsLinear) {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto m = uhj::make_model("nonholonomic-particle");
  for (int k = 0; k < 50; ++k) {
    Vector z(5), a(5), b(5);
    for (auto& v : z) v = u(rng);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const double s = u(rng);
    const double t = u(rng);
    const Vector lhs = uhj::sharp_apply(m.bivector, z, s * a + t * b);
    const Vector rhs =
        s * uhj::sharp_apply(m.bivector, z, a) + t * uhj::sharp_apply(m.bivector, z, b);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ModelProperties, AnalyticAndDifferencedFieldsAgree) {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const char* name : {"oscillator", "free-particle", "forced-linear"}) {
    const auto m = uhj::make_model(name);
    ASSERT_TRUE(m.hamiltonian.has_analytic_gradient()) << name;
    const ScalarField h = m.hamiltonian;
    const ScalarField fd([h](const Vector& z) { return h(z); });
    for (int k = 0; k < 50; ++k) {
      Vector z(static_cast<Eigen::Index>(m.bivector.chart().dim()));
      for (auto& v : z) v = u(rng);
      const Vector a = uhj::hamiltonian_field(m.bivector, h, z);
      const Vector b = uhj::hamiltonian_field(m.bivector, fd, z);
      EXPECT_LE(((a - b).array().abs() / (1 + a.array().abs())).maxCoeff(), 1e-5) << name;
    }
  }
}

TEST(ModelProperties, CanonicalPin) {
  std::mt19937_64 rng(84);
  std::uniform_real_distribution<double> u(-2, 2);
  const ScalarField h(
      [](const Vector& z) { return std::cosh(z(0)) * z(1) + z(1) * z(1) * z(1); },
      [](const Vector& z) {
        return vec({std::sinh(z(0)) * z(1), std::cosh(z(0)) + 3 * z(1) * z(1)});
      });
  const auto m = uhj::build_canonical(1, h);
  for (int k = 0; k < 100; ++k) {
    const Vector z = vec({u(rng), u(rng)});
    const Vector x = uhj::hamiltonian_field(m.bivector, m.hamiltonian, z);
    const Vector g = h.gradient(z);
    EXPECT_LE((x - vec({g(1), -g(0)})).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ModelProperties, NonholonomicRankAndOracle) {
  const auto m = uhj::make_model("nonholonomic-particle");
  std::mt19937_64 rng(85);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const Vector q = vec({u(rng), u(rng), u(rng)});
    const Vector pt = vec({u(rng), u(rng)});
    Vector z(5);
    z << q, pt;
    const Matrix l = m.bivector.components(z);
    EXPECT_EQ(uhj::rank(l), 4u);
    EXPECT_LE((l - oracle::particle_structure(q, pt)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((m.nonholonomic->constraints(q) * m.nonholonomic->d_basis(q))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(ModelProperties, TimeDependentProjectionIdentity) {
  const auto m = uhj::make_model("time-oscillator", {{"omega", 0.7}, {"amp", 1.1}});
  const auto& td = *m.time_dependent;
  std::mt19937_64 rng(86);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const Vector z = vec({u(rng), u(rng), u(rng), u(rng)});
    const Vector pushed =
        td.push_forward(uhj::hamiltonian_field(td.bivector(), td.hamiltonian(), z));
    EXPECT_LE((pushed - td.evolution_field(td.project(z))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ModelProperties, ForcedInverseMatchesClosedForm) {
  const auto m = uhj::build_forced(
      2, ScalarField([](const Vector& z) { return z(3) * z(4) + std::sin(z(1)); }),
      [](const Vector& z) { return vec({z(0) * z(3), std::exp(-z(2))}); });
  std::mt19937_64 rng(87);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    Vector z(6);
    for (auto& v : z) v = u(rng);
    const Matrix l = m.bivector().components(z);
    EXPECT_EQ(uhj::rank(l), 6u);
    EXPECT_LE((m.omega(z) * l - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((m.omega(z) - m.omega_closed_form(z)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ModelProperties, ForcedSectionAgreesWithSubspaceTest) {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t passing = 0;
  for (int k = 0; k < 500; ++k) {
    const double c = u(rng);
    const auto m = uhj::make_model("forced-linear", {{"c", c}});
    const Vector x = vec({u(rng), u(rng)});
    // gamma = (a00 t + a01 q + b0) dt + (a10 t + a11 q + b1) dq; Lagrangian
    // iff a01 - a10 = c.
    Matrix a(2, 2);
    for (auto& v : a.reshaped()) v = u(rng);
    if (k % 2 == 0) a(0, 1) = a(1, 0) + c;
    const Vector b = vec({u(rng), u(rng)});
    const Section s(m.bivector.chart(), [a, b](const Vector& y) { return Vector(b + a * y); });
    const bool forced_ok = uhj::forced_section_check(*m.forced, s, x) <= 1e-8;
    const bool sub_ok =
        uhj::subspace_lagrangian_check(m.bivector, s.point(x), uhj::graph_tangent(s, x)).holds;
    EXPECT_EQ(forced_ok, sub_ok) << "sample " << k;
    if (forced_ok) ++passing;
  }
  EXPECT_GE(passing, 240u);
  EXPECT_LE(passing, 260u);
}

}  // namespace
