#include "relab/subspace.hpp"

#include <algorithm>
#include <string>

#include "relab/errors.hpp"

namespace relab {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " + std::to_string(a.ambient_dim()) +
                            " and " + std::to_string(b.ambient_dim()) + " differ");
  }
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows(), a.cols() + b.cols());
  m << a, b;
  return m;
}

}  // namespace

Index numerical_rank(const Eigen::VectorXd& singular_values, const Tolerance& tol, double floor) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = tol.rank_rel * std::max(singular_values.maxCoeff(), floor);
  Index r = 0;
  for (Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > cutoff) ++r;
  }
  return r;
}

Subspace::Subspace(Index ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw DimensionMismatch("negative ambient dimension");
}

Subspace Subspace::full(Index ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  const Index d = basis.cols();
  if (d > basis.rows()) throw DimensionMismatch("more basis vectors than ambient dimension");
  if (d > 0) {
    const Matrix g = basis.adjoint() * basis - Matrix::Identity(d, d);
    if (g.cwiseAbs().maxCoeff() > 1e-12) throw PreconditionError("basis columns are not orthonormal");
  }
  const Index n = basis.rows();
  return Subspace(n, std::move(basis));
}

Subspace Subspace::from_columns(const Matrix& generators, const Tolerance& tol, double floor) {
  const Index n = generators.rows();
  if (generators.cols() == 0 || n == 0) return Subspace(n);
  Eigen::JacobiSVD<Matrix> svd(generators, Eigen::ComputeThinU);
  const Index r = numerical_rank(svd.singularValues(), tol, floor);
  return Subspace(n, svd.matrixU().leftCols(r));
}

Matrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

double Subspace::residual(const Matrix& vectors) const {
  if (vectors.rows() != ambient_) throw DimensionMismatch("residual: vector dimension differs from ambient dimension");
  if (vectors.cols() == 0) return 0.0;
  const Matrix r = vectors - basis_ * (basis_.adjoint() * vectors);
  return r.colwise().norm().maxCoeff();
}

bool Subspace::contains(const Matrix& vectors, const Tolerance& tol) const {
  return residual(vectors) <= tol.gap_eq;
}

bool Subspace::contains(const Subspace& other, const Tolerance& tol) const {
  require_same_ambient(*this, other, "contains");
  return residual(other.basis()) <= tol.gap_eq;
}

Subspace span(Index ambient_dim, std::span<const Vector> generators, const Tolerance& tol) {
  Matrix g(ambient_dim, static_cast<Index>(generators.size()));
  for (Index j = 0; j < g.cols(); ++j) {
    const Vector& v = generators[static_cast<std::size_t>(j)];
    if (v.size() != ambient_dim) {
      throw DimensionMismatch("span: generator " + std::to_string(j) + " has dimension " + std::to_string(v.size()) +
                              ", expected " + std::to_string(ambient_dim));
    }
    g.col(j) = v;
  }
  return Subspace::from_columns(g, tol, 0.0);
}

Subspace complement(const Subspace& s) {
  const Index n = s.ambient_dim();
  const Index d = s.dim();
  if (d == 0) return Subspace::full(n);
  if (d == n) return Subspace::zero(n);
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  return Subspace::from_orthonormal(svd.matrixU().rightCols(n - d));
}

Subspace join(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  require_same_ambient(a, b, "join");
  return Subspace::from_columns(hcat(a.basis(), b.basis()), tol);
}

Subspace meet(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  require_same_ambient(a, b, "meet");
  if (a.is_zero() || b.is_zero()) return Subspace::zero(a.ambient_dim());
  if (a.is_full()) return b;
  if (b.is_full()) return a;
  return complement(join(complement(a), complement(b), tol));
}

MeetJoin meet_join(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  return {meet(a, b, tol), join(a, b, tol)};
}

double gap(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "gap");
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  return spectral_norm(a.projector() - b.projector());
}

Vector project(const Subspace& s, const Vector& v) {
  if (v.size() != s.ambient_dim()) throw DimensionMismatch("project: vector dimension differs from ambient dimension");
  return s.basis() * (s.basis().adjoint() * v);
}

Subspace image(const Matrix& map, const Subspace& s, const Tolerance& tol) {
  if (map.cols() != s.ambient_dim()) throw DimensionMismatch("image: matrix columns differ from ambient dimension");
  return Subspace::from_columns(map * s.basis(), tol);
}

Subspace direct_sum(const Subspace& a, const Subspace& b) {
  const Index n = a.ambient_dim() + b.ambient_dim();
  Matrix basis = Matrix::Zero(n, a.dim() + b.dim());
  basis.topLeftCorner(a.ambient_dim(), a.dim()) = a.basis();
  basis.bottomRightCorner(b.ambient_dim(), b.dim()) = b.basis();
  return Subspace::from_orthonormal(std::move(basis));
}

Subspace coordinate_projection(const Subspace& s, Index offset, Index count, const Tolerance& tol) {
  if (offset < 0 || count < 0 || offset + count > s.ambient_dim()) {
    throw DimensionMismatch("coordinate_projection: block outside ambient space");
  }
  return Subspace::from_columns(s.basis().middleRows(offset, count), tol);
}

Matrix coordinates(const Subspace& s, const Matrix& vectors) {
  if (vectors.rows() != s.ambient_dim()) throw DimensionMismatch("coordinates: dimension mismatch");
  return s.basis().adjoint() * vectors;
}

Matrix null_space(const Matrix& m, const Tolerance& tol) {
  const Index c = m.cols();
  if (c == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(c, c);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index r = numerical_rank(svd.singularValues(), tol);
  return svd.matrixV().rightCols(c - r);
}

}  // namespace relab
