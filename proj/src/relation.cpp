#include "relab/relation.hpp"

#include <string>

#include "relab/errors.hpp"

namespace relab {

namespace {

std::string dims(Index p, Index q) { return "(" + std::to_string(p) + " -> " + std::to_string(q) + ")"; }

void require_same_shape(const Relation& a, const Relation& b, const char* op) {
  if (a.dim_from() != b.dim_from() || a.dim_to() != b.dim_to()) {
    throw DimensionMismatch(std::string(op) + ": relations " + dims(a.dim_from(), a.dim_to()) + " and " +
                            dims(b.dim_from(), b.dim_to()) + " differ in shape");
  }
}

// Subspace of C^n spanned by the coordinate vectors e_offset, ..., e_(offset+count-1).
Subspace coordinate_block(Index n, Index offset, Index count) {
  Matrix basis = Matrix::Zero(n, count);
  basis.middleRows(offset, count).setIdentity();
  return Subspace::from_orthonormal(std::move(basis));
}

// Embeds the rows of `g` into a taller zero matrix; rows_map[i] is the target row of row i.
Matrix embed_rows(const Matrix& g, Index total_rows, Index first_target, Index first_rows, Index second_target) {
  Matrix out = Matrix::Zero(total_rows, g.cols());
  out.middleRows(first_target, first_rows) = g.topRows(first_rows);
  out.middleRows(second_target, g.rows() - first_rows) = g.bottomRows(g.rows() - first_rows);
  return out;
}

// Graph (h, a, b) in C^p (+) C^q1 (+) C^q2 with (h, a) in r1 and (h, b) in r2.
Subspace paired_graph(const Relation& r1, const Relation& r2, const Tolerance& tol) {
  const Index p = r1.dim_from();
  const Index q1 = r1.dim_to();
  const Index q2 = r2.dim_to();
  const Index n = p + q1 + q2;
  Matrix u1(n, r1.graph().dim() + q2);
  u1 << embed_rows(r1.graph().basis(), n, 0, p, p), coordinate_block(n, p + q1, q2).basis();
  Matrix u2(n, r2.graph().dim() + q1);
  u2 << embed_rows(r2.graph().basis(), n, 0, p, p + q1), coordinate_block(n, p, q1).basis();
  return meet(Subspace::from_orthonormal(std::move(u1)), Subspace::from_orthonormal(std::move(u2)), tol);
}

}  // namespace

Relation::Relation(Index dim_from, Index dim_to, Subspace graph)
    : from_(dim_from), to_(dim_to), graph_(std::move(graph)) {
  if (dim_from < 0 || dim_to < 0) throw DimensionMismatch("negative relation dimension");
  if (graph_.ambient_dim() != dim_from + dim_to) {
    throw DimensionMismatch("graph ambient dimension " + std::to_string(graph_.ambient_dim()) +
                            " does not match relation shape " + dims(dim_from, dim_to));
  }
}

Relation Relation::from_matrix(const Matrix& m) {
  const Index p = m.cols();
  const Index q = m.rows();
  Matrix g(p + q, p);
  g << Matrix::Identity(p, p), m;
  return Relation(p, q, Subspace::from_columns(g, Tolerance{}));
}

Relation Relation::zero_graph(Index dim_from, Index dim_to) {
  return Relation(dim_from, dim_to, Subspace::zero(dim_from + dim_to));
}

Relation make_relation(Index dim_from, Index dim_to, const std::vector<VectorPair>& pairs, const Tolerance& tol) {
  std::vector<Vector> stacked;
  stacked.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [f, fp] = pairs[i];
    if (f.size() != dim_from || fp.size() != dim_to) {
      throw DimensionMismatch("make_relation: pair " + std::to_string(i) + " has shape " + dims(f.size(), fp.size()) +
                              ", expected " + dims(dim_from, dim_to));
    }
    Vector v(dim_from + dim_to);
    v << f, fp;
    stacked.push_back(std::move(v));
  }
  return Relation(dim_from, dim_to, span(dim_from + dim_to, stacked, tol));
}

Subspace domain(const Relation& r, const Tolerance& tol) {
  return coordinate_projection(r.graph(), 0, r.dim_from(), tol);
}

Subspace range(const Relation& r, const Tolerance& tol) {
  return coordinate_projection(r.graph(), r.dim_from(), r.dim_to(), tol);
}

Subspace kernel(const Relation& r, const Tolerance& tol) {
  const Index n = r.dim_from() + r.dim_to();
  const Subspace m = meet(r.graph(), coordinate_block(n, 0, r.dim_from()), tol);
  return coordinate_projection(m, 0, r.dim_from(), tol);
}

Subspace multivalued_part(const Relation& r, const Tolerance& tol) {
  const Index n = r.dim_from() + r.dim_to();
  const Subspace m = meet(r.graph(), coordinate_block(n, r.dim_from(), r.dim_to()), tol);
  return coordinate_projection(m, r.dim_from(), r.dim_to(), tol);
}

RelationParts parts(const Relation& r, const Tolerance& tol) {
  return {domain(r, tol), range(r, tol), kernel(r, tol), multivalued_part(r, tol)};
}

Relation adjoint(const Relation& r) {
  // Flipped-negated graph {(f', -f)} inside K (+) H; the adjoint is its orthogonal complement.
  const Index p = r.dim_from();
  const Index q = r.dim_to();
  Matrix flipped(q + p, r.graph().dim());
  flipped << r.range_block(), -r.domain_block();
  return Relation(q, p, complement(Subspace::from_orthonormal(std::move(flipped))));
}

Relation inverse(const Relation& r) {
  Matrix swapped(r.dim_to() + r.dim_from(), r.graph().dim());
  swapped << r.range_block(), r.domain_block();
  return Relation(r.dim_to(), r.dim_from(), Subspace::from_orthonormal(std::move(swapped)));
}

Relation compose(const Relation& r2, const Relation& r1, const Tolerance& tol) {
  if (r1.dim_to() != r2.dim_from()) {
    throw DimensionMismatch("compose: inner dimensions differ, " + dims(r1.dim_from(), r1.dim_to()) + " then " +
                            dims(r2.dim_from(), r2.dim_to()));
  }
  const Index p = r1.dim_from();
  const Index m = r1.dim_to();
  const Index q = r2.dim_to();
  const Index n = p + m + q;
  // (graph r1) (+) C^q and C^p (+) (graph r2) inside H (+) M (+) K.
  Matrix u1(n, r1.graph().dim() + q);
  u1 << embed_rows(r1.graph().basis(), n, 0, p + m, p + m), coordinate_block(n, p + m, q).basis();
  Matrix u2(n, p + r2.graph().dim());
  u2 << coordinate_block(n, 0, p).basis(), embed_rows(r2.graph().basis(), n, p, m, p + m);
  const Subspace both =
      meet(Subspace::from_orthonormal(std::move(u1)), Subspace::from_orthonormal(std::move(u2)), tol);
  Matrix outer(p + q, both.dim());
  outer << both.basis().topRows(p), both.basis().bottomRows(q);
  return Relation(p, q, Subspace::from_columns(outer, tol));
}

Relation column(const Relation& r1, const Relation& r2, const Tolerance& tol) {
  if (r1.dim_from() != r2.dim_from()) throw DimensionMismatch("column: source dimensions differ");
  const Subspace g = paired_graph(r1, r2, tol);
  return Relation(r1.dim_from(), r1.dim_to() + r2.dim_to(), g);
}

Relation operator_sum(const Relation& r1, const Relation& r2, const Tolerance& tol) {
  require_same_shape(r1, r2, "operator_sum");
  const Index p = r1.dim_from();
  const Index q = r1.dim_to();
  const Subspace g = paired_graph(r1, r2, tol);
  Matrix summed(p + q, g.dim());
  summed << g.basis().topRows(p), g.basis().middleRows(p, q) + g.basis().bottomRows(q);
  return Relation(p, q, Subspace::from_columns(summed, tol));
}

Relation row(const Relation& r1, const Relation& r2, const Tolerance& tol) {
  if (r1.dim_to() != r2.dim_to()) throw DimensionMismatch("row: target dimensions differ");
  const Index p1 = r1.dim_from();
  const Index p2 = r2.dim_from();
  const Index q = r1.dim_to();
  const Index n = p1 + p2 + q;
  Matrix g(n, r1.graph().dim() + r2.graph().dim());
  g << embed_rows(r1.graph().basis(), n, 0, p1, p1 + p2), embed_rows(r2.graph().basis(), n, p1, p2, p1 + p2);
  return Relation(p1 + p2, q, Subspace::from_columns(g, tol));
}

Relation operator_part(const Relation& r, const Tolerance& tol) {
  const Subspace mul = multivalued_part(r, tol);
  const Matrix p = Matrix::Identity(r.dim_to(), r.dim_to()) - mul.projector();
  Matrix g(r.dim_from() + r.dim_to(), r.graph().dim());
  g << r.domain_block(), p * r.range_block();
  return Relation(r.dim_from(), r.dim_to(), Subspace::from_columns(g, tol));
}

Relation restrict(const Relation& r, const Subspace& l, const Tolerance& tol) {
  if (l.ambient_dim() != r.dim_from()) throw DimensionMismatch("restrict: subspace is not in the source space");
  const Subspace admissible = direct_sum(l, Subspace::full(r.dim_to()));
  return Relation(r.dim_from(), r.dim_to(), meet(r.graph(), admissible, tol));
}

double gap(const Relation& a, const Relation& b) {
  require_same_shape(a, b, "gap");
  return gap(a.graph(), b.graph());
}

bool equal(const Relation& a, const Relation& b, const Tolerance& tol) { return gap(a, b) <= tol.gap_eq; }

double inclusion_residual(const Relation& smaller, const Relation& larger) {
  require_same_shape(smaller, larger, "inclusion");
  return larger.graph().residual(smaller.graph().basis());
}

bool includes(const Relation& larger, const Relation& smaller, const Tolerance& tol) {
  return inclusion_residual(smaller, larger) <= tol.gap_eq;
}

Vector apply(const Relation& r, const Vector& f, const Tolerance& tol) {
  if (f.size() != r.dim_from()) throw DimensionMismatch("apply: vector is not in the source space");
  const Matrix x = r.domain_block();
  if (x.cols() == 0) {
    if (f.norm() > tol.gap_eq) throw PreconditionError("apply: vector is not in the domain");
    return Vector::Zero(r.dim_to());
  }
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(x);
  const Vector c = cod.solve(f);
  if ((x * c - f).norm() > tol.gap_eq * std::max(1.0, f.norm())) {
    throw PreconditionError("apply: vector is not in the domain");
  }
  const Subspace mul = multivalued_part(r, tol);
  Vector fp = r.range_block() * c;
  return fp - project(mul, fp);
}

bool is_operator(const Relation& r, const Tolerance& tol) { return multivalued_part(r, tol).is_zero(); }

Matrix operator_matrix(const Relation& r, const Tolerance& tol) {
  const Subspace dom = domain(r, tol);
  Matrix images(r.dim_to(), dom.dim());
  for (Index j = 0; j < dom.dim(); ++j) images.col(j) = apply(r, dom.basis().col(j), tol);
  return images * dom.basis().adjoint();
}

}  // namespace relab
