#pragma once

#include <cstddef>
#include <functional>

#include "uhj/geometry.hpp"
#include "uhj/hj.hpp"

namespace uhj {

/// q1..qn ; p1..pn
FiberedChart canonical_chart(std::size_t n);

/// Constant component matrix of the canonical structure on T*R^n in the
/// pinned convention: L(q^i, p_i) = -1, L(p_i, q^i) = +1.
Matrix canonical_block(std::size_t n);

struct CanonicalModel {
  std::size_t n = 0;
  FiberedBivector bivector;
  ScalarField hamiltonian;
};

CanonicalModel build_canonical(std::size_t n, ScalarField h);

/// max_{i,j} |d gamma_i / dq^j - d gamma_j / dq^i| for a 1-form gamma on Q
/// entered as a section of T*Q.
double closed_form_check(const Section& gamma, const Vector& q);

/// Fiber derivative of L = 1/2 g(v, v) - V: p = g v. Throws InputError
/// unless g is symmetric positive definite.
Vector legendre(const Matrix& g, const Vector& v);
Vector legendre_inv(const Matrix& g, const Vector& p);

using MatrixField = std::function<Matrix(const Vector&)>;

inline Vector legendre(const MatrixField& g, const Vector& q, const Vector& v) {
  return legendre(g(q), v);
}
inline Vector legendre_inv(const MatrixField& g, const Vector& q,
                           const Vector& p) {
  return legendre_inv(g(q), p);
}

}  // namespace uhj
