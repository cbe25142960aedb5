#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exterior.hpp"
#include "families.hpp"
#include "uhj/canonical.hpp"
#include "uhj/errors.hpp"
#include "uhj/flow.hpp"
#include "uhj/hj.hpp"

namespace {

using support::vec;
using uhj::Matrix;
using uhj::ScalarField;
using uhj::Section;
using uhj::Vector;

TEST(CanonicalModel, PinnedBlock) {
  Matrix expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_EQ(uhj::canonical_block(1), expected);
  const Matrix l = uhj::canonical_block(2);
  EXPECT_EQ(l(0, 2), -1.0);
  EXPECT_EQ(l(1, 3), -1.0);
  EXPECT_EQ(l(2, 0), 1.0);
  EXPECT_EQ(l(0, 1), 0.0);
  EXPECT_EQ(l(2, 3), 0.0);
}

TEST(CanonicalModel, ChartNames) {
  EXPECT_EQ(uhj::canonical_chart(2).names(),
            (std::vector<std::string>{"q1", "q2", "p1", "p2"}));
  EXPECT_THROW(uhj::canonical_chart(0), uhj::InputError);
}

TEST(CanonicalModel, OscillatorFieldAtUnitQ) {
  const auto m = uhj::build_canonical(
      1, ScalarField([](const Vector& z) { return 0.5 * z.squaredNorm(); }));
  const Vector x = uhj::hamiltonian_field(m.bivector, m.hamiltonian, vec({1, 0}));
  EXPECT_NEAR(x(0), 0.0, 1e-8);
  EXPECT_NEAR(x(1), -1.0, 1e-8);
}

TEST(CanonicalModel, ZeroHamiltonian) {
  const auto m = uhj::build_canonical(1, ScalarField::constant(0.0));
  EXPECT_EQ(uhj::hamiltonian_field(m.bivector, m.hamiltonian, vec({3, 4})).norm(), 0.0);
}

TEST(CanonicalModel, ReproducesHamiltonEquations) {
  const ScalarField h([](const Vector& z) {
    return z(1) * z(1) * std::cos(z(0)) + std::exp(0.3 * z(0)) * z(1);
  });
  const auto m = uhj::build_canonical(1, h);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const double q = u(rng);
    const double p = u(rng);
    const Vector x = uhj::hamiltonian_field(m.bivector, m.hamiltonian, vec({q, p}));
    const double hq = -p * p * std::sin(q) + 0.3 * std::exp(0.3 * q) * p;
    const double hp = 2 * p * std::cos(q) + std::exp(0.3 * q);
    EXPECT_NEAR(x(0), hp, 1e-5);
    EXPECT_NEAR(x(1), -hq, 1e-5);
  }
}

TEST(CanonicalModel, FreeParticleStraightLine) {
  const auto m = uhj::build_canonical(2, ScalarField([](const Vector& z) {
                                        return 0.5 * (z(2) * z(2) + z(3) * z(3));
                                      }));
  uhj::FlowSpec spec;
  spec.field = [&](const Vector& z) {
    return uhj::hamiltonian_field(m.bivector, m.hamiltonian, z);
  };
  spec.t1 = 2.0;
  spec.steps = 200;
  spec.initial = vec({0, 0, 1, 2});
  const auto tr = uhj::integrate(spec);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    EXPECT_LE((tr.states[k] - vec({t, 2 * t, 1, 2})).norm(), 1e-8);
  }
}

TEST(ClosedForm, ExactForm) {
  // W = q1 q2^2 + exp(q1)
  const Section s(uhj::canonical_chart(2), [](const Vector& q) {
    return vec({q(1) * q(1) + std::exp(q(0)), 2 * q(0) * q(1)});
  });
  EXPECT_LE(uhj::closed_form_check(s, vec({0.3, 0.9})), 1e-8);
}

TEST(ClosedForm, YdxIsNotClosed) {
  const auto form = [](const Vector& q) { return vec({q(1), 0}); };
  const Section s(uhj::canonical_chart(2), form);
  const Vector q = vec({0.2, -0.5});
  EXPECT_NEAR(uhj::closed_form_check(s, q), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(oracle::d_of(form, q)(0, 1)), 1.0, 1e-8);
}

TEST(ClosedForm, LineIsAlwaysClosed) {
  const Section s(uhj::canonical_chart(1), [](const Vector& q) { return vec({std::sin(q(0))}); });
  EXPECT_EQ(uhj::closed_form_check(s, vec({0.7})), 0.0);
}

TEST(ClosedForm, AgreesWithGraphResidual) {
  const auto m = uhj::build_canonical(3, ScalarField::constant(0.0));
  const auto form = [](const Vector& q) {
    return vec({q(1) * q(2), q(0) * q(2) + 0.1 * q(0), q(0) * q(1)});
  };
  const Section s(m.bivector.chart(), form);
  const Vector q = vec({0.4, 0.5, -0.6});
  const double closed = uhj::closed_form_check(s, q);
  const double graph = uhj::max_abs(uhj::lagrangian_residual(m.bivector, s, q));
  EXPECT_NEAR(closed, 0.1, 1e-8);
  EXPECT_NEAR(graph, 0.1, 1e-8);
  EXPECT_NEAR(oracle::d_of(form, q).cwiseAbs().maxCoeff(), 0.1, 1e-8);
}

TEST(Legendre, Euclidean) {
  EXPECT_EQ(uhj::legendre(Matrix::Identity(2, 2), vec({3, -1})), vec({3, -1}));
}

TEST(Legendre, Diagonal) {
  Matrix g = Matrix::Identity(2, 2);
  g(0, 0) = 2;
  EXPECT_EQ(uhj::legendre(g, vec({1, 1})), vec({2, 1}));
}

TEST(Legendre, RoundTripOnRandomSpd) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n01;
  for (int k = 0; k < 20; ++k) {
    Matrix a(4, 4);
    for (auto& v : a.reshaped()) v = n01(rng);
    const Matrix g = a * a.transpose() + 0.5 * Matrix::Identity(4, 4);
    Vector v(4);
    for (auto& x : v) x = n01(rng);
    EXPECT_LE((uhj::legendre_inv(g, uhj::legendre(g, v)) - v).norm(), 1e-12);
  }
}

TEST(Legendre, RejectsSingular) {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1;
  EXPECT_THROW(uhj::legendre(g, vec({1, 1})), uhj::InputError);
  EXPECT_THROW(uhj::legendre_inv(g, vec({1, 1})), uhj::InputError);
}

}  // namespace
