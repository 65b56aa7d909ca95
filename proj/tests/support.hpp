#pragma once

#include <vector>

#include "relab/relation.hpp"

namespace relab::testing {

inline Vector e(Index n, Index i) {
  Vector v = Vector::Zero(n);
  v(i) = 1.0;
  return v;
}

inline Vector vec(std::initializer_list<Complex> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const Complex& x : xs) v(i++) = x;
  return v;
}

inline Subspace span_of(Index n, std::vector<Vector> vs) { return span(n, vs); }

inline Matrix diag(std::initializer_list<Complex> xs) { return vec(xs).asDiagonal(); }

// Zero operator on span e1 inside C^2.
inline Relation fx_a() { return make_relation(2, 2, {{e(2, 0), Vector::Zero(2)}}); }
// I + iI on C^2.
inline Relation fx_b() { return Relation::from_matrix(Complex(1.0, 1.0) * Matrix::Identity(2, 2)); }
// Singular T from C^2 to C^1: dom = ker = span e1, mul = C.
inline Relation fx_c() { return make_relation(2, 1, {{e(2, 0), Vector::Zero(1)}, {Vector::Zero(2), e(1, 0)}}); }
inline Relation fx_d1() { return Relation::from_matrix(diag({1.0, 2.0})); }
inline Relation fx_d2() { return Relation::from_matrix(diag({Complex(1.0, 1.0), 0.0})); }

// Graph {0} (+) mul-part: the pure relation {0} x span(vs).
inline Relation pure(Index n, std::vector<Vector> vs) {
  std::vector<VectorPair> pairs;
  for (const Vector& v : vs) pairs.push_back({Vector::Zero(n), v});
  return make_relation(n, n, pairs);
}

}  // namespace relab::testing
