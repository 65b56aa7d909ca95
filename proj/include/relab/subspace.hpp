#pragma once

#include <span>
#include <utility>
#include <vector>

#include "relab/types.hpp"

namespace relab {

// A linear subspace of C^n stored as an n x d matrix with orthonormal columns.
// The zero subspace has d = 0. Instances are immutable.
class Subspace {
 public:
  // Zero subspace of C^n.
  explicit Subspace(Index ambient_dim);

  // Whole space C^n.
  static Subspace full(Index ambient_dim);
  static Subspace zero(Index ambient_dim) { return Subspace(ambient_dim); }

  // Adopts `basis` as-is; its columns must already be orthonormal (checked to 1e-12 entrywise).
  static Subspace from_orthonormal(Matrix basis);

  // Orthonormalized span of the columns of `generators` (n x k). Singular values at or below
  // tol.rank_rel * max(sigma_max, floor) are dropped. Internal callers work with unit-scale
  // data and keep floor = 1 so that pure round-off never survives as a direction.
  static Subspace from_columns(const Matrix& generators, const Tolerance& tol = {}, double floor = 1.0);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }
  const Matrix& basis() const { return basis_; }

  // Orthogonal projector basis * basis^H.
  Matrix projector() const;

  // Largest distance ||(I - P) v|| over the columns v of `vectors`.
  double residual(const Matrix& vectors) const;

  // True when every column of `vectors` lies in this subspace within tol.gap_eq.
  bool contains(const Matrix& vectors, const Tolerance& tol = {}) const;
  bool contains(const Subspace& other, const Tolerance& tol = {}) const;

 private:
  Subspace(Index ambient_dim, Matrix basis) : ambient_(ambient_dim), basis_(std::move(basis)) {}

  Index ambient_;
  Matrix basis_;
};

// Orthonormalized span of a list of vectors in C^n, with a purely relative rank cutoff.
// The ambient dimension is explicit so that the empty list is meaningful.
Subspace span(Index ambient_dim, std::span<const Vector> generators, const Tolerance& tol = {});

// Orthogonal complement inside the ambient space.
Subspace complement(const Subspace& s);

struct MeetJoin {
  Subspace meet;
  Subspace join;
};

// join = span of both bases; meet = complement(join(A^perp, B^perp)).
MeetJoin meet_join(const Subspace& a, const Subspace& b, const Tolerance& tol = {});
Subspace meet(const Subspace& a, const Subspace& b, const Tolerance& tol = {});
Subspace join(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

// Gap metric ||P_A - P_B||; 1 when the dimensions differ.
double gap(const Subspace& a, const Subspace& b);

inline bool equal(const Subspace& a, const Subspace& b, const Tolerance& tol = {}) {
  return gap(a, b) <= tol.gap_eq;
}

// Orthogonal projection of v onto s.
Vector project(const Subspace& s, const Vector& v);

// Image of a subspace under a square or rectangular matrix (rows = new ambient dimension).
Subspace image(const Matrix& map, const Subspace& s, const Tolerance& tol = {});

// Direct sum A (+) B inside C^(n_A + n_B).
Subspace direct_sum(const Subspace& a, const Subspace& b);

// Rows [offset, offset + count) of every basis vector, re-spanned: the coordinate projection of s.
Subspace coordinate_projection(const Subspace& s, Index offset, Index count, const Tolerance& tol = {});

// Coordinates of `vectors` in the orthonormal basis of s (s.basis()^H * vectors).
Matrix coordinates(const Subspace& s, const Matrix& vectors);

// Number of singular values (sorted descending) above tol.rank_rel * max(sigma_max, floor).
Index numerical_rank(const Eigen::VectorXd& singular_values, const Tolerance& tol, double floor = 1.0);

// Orthonormal basis of the null space of m (m.cols() x k).
Matrix null_space(const Matrix& m, const Tolerance& tol = {});

}  // namespace relab
