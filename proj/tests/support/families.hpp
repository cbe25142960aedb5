#pragma once

// Section families over the built-in models, shared by the property tests
// and the acceptance binary. For each model: ten sections whose image is
// Lagrangian and satisfies the Hamilton–Jacobi condition, ten Lagrangian
// sections that violate it. Grids are 25 seeded points in a box where
// every section is defined.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uhj/extended.hpp"
#include "uhj/hj.hpp"
#include "uhj/registry.hpp"

namespace support {

using uhj::Matrix;
using uhj::Section;
using uhj::Vector;

struct SectionCase {
  std::string label;
  Section section;
  bool expect_hj;
};

struct ModelCase {
  std::string name;
  uhj::ModelInstance model;
  std::vector<Vector> grid;
  std::vector<SectionCase> sections;
};

inline std::vector<Vector> box_points(const Vector& lo, const Vector& hi,
                                      std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> out;
  for (std::size_t k = 0; k < count; ++k) {
    Vector x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      x(i) = lo(i) + u(rng) * (hi(i) - lo(i));
    }
    out.push_back(x);
  }
  return out;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

template <class F>
Section section_of(const uhj::FiberedChart& chart, F f) {
  return Section(chart, [f](const Vector& x) { return Vector(f(x)); });
}

inline ModelCase oscillator_case() {
  ModelCase c{"oscillator", uhj::make_model("oscillator"),
              box_points(vec({-0.6}), vec({0.6}), 25, 11), {}};
  const auto& chart = c.model.bivector.chart();
  for (int k = 0; k < 10; ++k) {
    const double e = 0.5 + 0.15 * k;
    const double s = k % 2 == 0 ? 1.0 : -1.0;
    c.sections.push_back({"W' = sqrt(2E - q^2), E = " + std::to_string(e),
                          section_of(chart, [e, s](const Vector& x) {
                            return vec({s * std::sqrt(2 * e - x(0) * x(0))});
                          }),
                          true});
  }
  for (int k = 0; k < 10; ++k) {
    const double a = 0.3 * k - 1.0;
    const double b = 0.5 + 0.2 * k;
    c.sections.push_back({"affine p = a + b q", section_of(chart, [a, b](const Vector& x) {
                            return vec({a + b * x(0)});
                          }),
                          false});
  }
  return c;
}

inline ModelCase free_particle_case() {
  ModelCase c{"free-particle", uhj::make_model("free-particle", {{"n", 2}}),
              box_points(vec({-1, -1}), vec({1, 1}), 25, 12), {}};
  const auto& chart = c.model.bivector.chart();
  for (int k = 0; k < 10; ++k) {
    const double a = std::cos(0.7 * k);
    const double b = std::sin(1.3 * k) - 0.2;
    c.sections.push_back({"constant momentum", section_of(chart, [a, b](const Vector&) {
                            return vec({a, b});
                          }),
                          true});
  }
  for (int k = 0; k < 10; ++k) {
    const double al = 0.4 + 0.1 * k;
    const double be = -0.3 - 0.05 * k;
    const double a = 0.1 * k;
    c.sections.push_back({"gradient of a quadratic",
                          section_of(chart, [al, be, a](const Vector& x) {
                            return vec({al * x(0) + a, be * x(1) + 0.5});
                          }),
                          false});
  }
  return c;
}

inline ModelCase anisotropic_case() {
  ModelCase c{"canonical",
              uhj::make_model("canonical", {{"n", 2}},
                              "0.5*(p1^2 + p2^2) + 0.5*(q1^2 + 4*q2^2)"),
              box_points(vec({-0.6, -0.3}), vec({0.6, 0.3}), 25, 13), {}};
  const auto& chart = c.model.bivector.chart();
  for (int k = 0; k < 10; ++k) {
    const double e1 = 0.4 + 0.1 * k;
    const double e2 = 1.2 - 0.05 * k;
    const double s = k % 3 == 0 ? -1.0 : 1.0;
    c.sections.push_back({"separable dW", section_of(chart, [e1, e2, s](const Vector& x) {
                            return vec({s * std::sqrt(2 * e1 - x(0) * x(0)),
                                        std::sqrt(2 * e2 - 4 * x(1) * x(1))});
                          }),
                          true});
  }
  for (int k = 0; k < 10; ++k) {
    const double e1 = 0.5 + 0.1 * k;
    const double b = 0.2 * k - 0.7;
    const double beta = 0.6 + 0.1 * k;
    c.sections.push_back({"half-separable", section_of(chart, [e1, b, beta](const Vector& x) {
                            return vec({std::sqrt(2 * e1 - x(0) * x(0)),
                                        b + beta * x(1)});
                          }),
                          false});
  }
  return c;
}

inline ModelCase nonholonomic_case() {
  ModelCase c{"nonholonomic-particle", uhj::make_model("nonholonomic-particle"),
              box_points(vec({-1, -1, -1}), vec({1, 1, 1}), 25, 14), {}};
  const auto& chart = c.model.bivector.chart();
  for (int k = 0; k < 10; ++k) {
    const double a = 0.25 * k - 1.0;
    const double cc = std::cos(0.9 * k);
    c.sections.push_back({"pt = (a sqrt(1 + y^2), c)",
                          section_of(chart, [a, cc](const Vector& q) {
                            return vec({a * std::sqrt(1 + q(1) * q(1)), cc});
                          }),
                          true});
  }
  for (int k = 0; k < 10; ++k) {
    const double b = 1.5 + 0.1 * k;
    const double beta = 0.5 + 0.15 * k;
    c.sections.push_back({"pt = (0, b + beta y)", section_of(chart, [b, beta](const Vector& q) {
                            return vec({0.0, b + beta * q(1)});
                          }),
                          false});
  }
  return c;
}

inline ModelCase time_oscillator_case() {
  ModelCase c{"time-oscillator", uhj::make_model("time-oscillator"),
              box_points(vec({0, -0.6}), vec({0.8, 0.6}), 25, 15), {}};
  const auto& chart = c.model.bivector.chart();
  for (int k = 0; k < 5; ++k) {
    const double e = 0.5 + 0.2 * k;
    c.sections.push_back({"S = W - E t", section_of(chart, [e](const Vector& x) {
                            return vec({-e, std::sqrt(2 * e - x(1) * x(1))});
                          }),
                          true});
  }
  for (int k = 0; k < 5; ++k) {
    const double phi = 0.1 * k - 0.3;
    c.sections.push_back({"S = -q^2 tan(t + phi) / 2",
                          section_of(chart, [phi](const Vector& x) {
                            const double tn = std::tan(x(0) + phi);
                            return vec({-0.5 * x(1) * x(1) * (1 + tn * tn), -x(1) * tn});
                          }),
                          true});
  }
  for (int k = 0; k < 10; ++k) {
    const double e0 = 0.1 * k - 0.5;
    const double a = 0.2 * k - 1.0;
    const double b = 0.7 + 0.1 * k;
    c.sections.push_back({"affine in q", section_of(chart, [e0, a, b](const Vector& x) {
                            return vec({e0, a + b * x(1)});
                          }),
                          false});
  }
  return c;
}

inline ModelCase forced_case() {
  const double cf = 0.5;
  ModelCase c{"forced-linear", uhj::make_model("forced-linear", {{"c", cf}}),
              box_points(vec({0, -1}), vec({1, 1}), 25, 16), {}};
  const auto& chart = c.model.bivector.chart();
  for (int k = 0; k < 10; ++k) {
    const double a = 0.3 * k - 1.2;
    const int kind = k % 3;
    c.sections.push_back({"p = a - c t", section_of(chart, [a, cf, kind](const Vector& x) {
                            const double p = a - cf * x(0);
                            const double e = kind == 0   ? -0.5 * p * p
                                             : kind == 1 ? 0.0
                                                         : std::sin(x(0));
                            return vec({e, p});
                          }),
                          true});
  }
  for (int k = 0; k < 10; ++k) {
    const double a = 0.2 * k - 0.9;
    const double b = 0.5 + 0.1 * k;
    c.sections.push_back({"p = a - c t + b q", section_of(chart, [a, b, cf](const Vector& x) {
                            const double p = a - cf * x(0) + b * x(1);
                            return vec({0.0, p});
                          }),
                          false});
  }
  return c;
}

inline std::vector<ModelCase> equivalence_cases() {
  return {oscillator_case(),   free_particle_case(),   anisotropic_case(),
          nonholonomic_case(), time_oscillator_case(), forced_case()};
}

struct Outcome {
  double residual = 0.0;
  double hj = 0.0;
  double related = 0.0;
};

/// Graph residual, HJ defect and relatedness defect at x, using the
/// extended forms (dt multiplier, e dropped) for extended models.
inline Outcome evaluate(const uhj::ModelInstance& m, const Section& s, const Vector& x) {
  Outcome o;
  o.residual = uhj::max_abs(uhj::lagrangian_residual(m.bivector, s, x));
  if (m.energy_index) {
    o.hj = uhj::tdep_hj_check(m.bivector, m.hamiltonian, s, x, 0).residual;
    o.related = uhj::extended_relatedness_defect(m.bivector, m.hamiltonian, s, x,
                                                 *m.energy_index);
  } else {
    o.hj = uhj::hj_condition_defect(m.bivector, m.hamiltonian, s, x).defect;
    o.related = uhj::relatedness_defect(m.bivector, m.hamiltonian, s, x);
  }
  return o;
}

}  // namespace support
