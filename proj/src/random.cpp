#include "relab/random.hpp"

#include "relab/sectorial.hpp"

namespace relab {

Index Random::uniform_int(Index lo, Index hi) {
  std::uniform_int_distribution<Index> dist(lo, hi);
  return dist(engine_);
}

bool Random::coin(double p) {
  std::bernoulli_distribution dist(p);
  return dist(engine_);
}

Matrix Random::matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal();
      const double im = normal();
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Matrix Random::hermitian(Index n, double scale) {
  const Matrix g = matrix(n, n);
  return hermitian_part(g) * scale;
}

Subspace Random::subspace(Index n, Index d) {
  if (d <= 0) return Subspace(n);
  return Subspace::from_columns(matrix(n, d));
}

Subspace Random::subspace_between(Index n, Index lo, Index hi) { return subspace(n, uniform_int(lo, hi)); }

Relation Random::relation(Index p, Index q) { return Relation(p, q, subspace_between(p + q, 0, p + q)); }

Relation Random::operator_relation(Index p, Index q) { return Relation::from_matrix(matrix(q, p)); }

Relation Random::maximal_sectorial(Index n, bool real) {
  // Form on a random domain with real part R R^H, possibly singular, and imaginary part R X R^H.
  const Subspace dom = subspace_between(n, 0, n);
  const Index d = dom.dim();
  const Index r = d == 0 ? 0 : uniform_int(0, d);
  const Matrix root = matrix(d, r);
  Matrix m = root * root.adjoint();
  if (!real && r > 0) m += kI * (root * hermitian(r) * root.adjoint());
  return relation_of_form(SesquiForm{dom, m});
}

}  // namespace relab
