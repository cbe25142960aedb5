#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "uhj/expr.hpp"
#include "uhj/flow.hpp"
#include "uhj/hj.hpp"
#include "uhj/linalg.hpp"
#include "uhj/registry.hpp"

namespace {

using uhj::Matrix;
using uhj::Section;
using uhj::Vector;

Matrix random_antisymmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (auto& v : a.reshaped()) v = g(rng);
  return a - a.transpose();
}

void BM_Kernel(benchmark::State& state) {
  const Matrix l = random_antisymmetric(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(uhj::kernel(l));
}
BENCHMARK(BM_Kernel)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Intersect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix l = random_antisymmetric(n, 2);
  const uhj::Subspace a = uhj::Subspace::span(l.leftCols(n / 2));
  const uhj::Subspace b = uhj::Subspace::span(l.rightCols(n / 2 + 1));
  for (auto _ : state) benchmark::DoNotOptimize(uhj::intersect(a, b));
}
BENCHMARK(BM_Intersect)->Arg(4)->Arg(8)->Arg(16);

void BM_OscillatorVerdict(benchmark::State& state) {
  const auto m = uhj::make_model("oscillator");
  const Section s(m.bivector.chart(),
                  [](const Vector& q) { return Vector::Constant(1, std::sqrt(2 - q(0) * q(0))); });
  const Vector x = Vector::Constant(1, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(uhj::theorem_verdict(m.bivector, m.hamiltonian, s, x));
  }
}
BENCHMARK(BM_OscillatorVerdict);

void BM_NonholonomicComponents(benchmark::State& state) {
  const auto m = uhj::make_model("nonholonomic-particle");
  Vector z(5);
  z << 0.1, 0.4, -0.2, 1.0, 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(m.bivector.components(z));
}
BENCHMARK(BM_NonholonomicComponents);

void BM_LiftAndCompare(benchmark::State& state) {
  const auto m = uhj::make_model("oscillator");
  const Section s(m.bivector.chart(),
                  [](const Vector& q) { return Vector::Constant(1, std::sqrt(2 - q(0) * q(0))); });
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(uhj::lift_and_compare(m.bivector, m.hamiltonian, s,
                                                   Vector::Constant(1, 0.5), 0.5, steps));
  }
}
BENCHMARK(BM_LiftAndCompare)->Arg(100)->Arg(1000);

void BM_ExprParse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(uhj::expr::Expr::parse(
        "0.5*(p1^2 + p2^2) + 0.5*(q1^2 + 4*q2^2) - amp*q1*cos(t)",
        {"t", "q1", "q2", "p1", "p2", "amp"}));
  }
}
BENCHMARK(BM_ExprParse);

void BM_ExprEval(benchmark::State& state) {
  const auto e = uhj::expr::Expr::parse(
      "0.5*(p1^2 + p2^2) + 0.5*(q1^2 + 4*q2^2) - amp*q1*cos(t)",
      {"t", "q1", "q2", "p1", "p2", "amp"});
  Vector v(6);
  v << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
  for (auto _ : state) benchmark::DoNotOptimize(e.eval(v));
}
BENCHMARK(BM_ExprEval);

}  // namespace

BENCHMARK_MAIN();
