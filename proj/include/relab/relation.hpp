#pragma once

#include <utility>
#include <vector>

#include "relab/subspace.hpp"

namespace relab {

// A linear relation from C^p to C^q, i.e. a subspace of C^p (+) C^q whose elements are
// written as pairs {f, f'}. Rows [0, p) of the graph basis are the f-block, rows [p, p+q)
// the f'-block. Every relation here is closed, so closure() returns *this.
class Relation {
 public:
  Relation(Index dim_from, Index dim_to, Subspace graph);

  // Graph {(f, M f)} of the everywhere defined operator M (q x p).
  static Relation from_matrix(const Matrix& m);
  // The relation {0} x {0}.
  static Relation zero_graph(Index dim_from, Index dim_to);
  static Relation identity(Index n) { return from_matrix(Matrix::Identity(n, n)); }

  Index dim_from() const { return from_; }
  Index dim_to() const { return to_; }
  bool is_endo() const { return from_ == to_; }
  const Subspace& graph() const { return graph_; }

  // Upper (f) and lower (f') blocks of the orthonormal graph basis.
  Matrix domain_block() const { return graph_.basis().topRows(from_); }
  Matrix range_block() const { return graph_.basis().bottomRows(to_); }

  // Finite-dimensional relations are closed: T** = T.
  const Relation& closure() const { return *this; }

 private:
  Index from_;
  Index to_;
  Subspace graph_;
};

struct RelationParts {
  Subspace dom;
  Subspace ran;
  Subspace ker;
  Subspace mul;
};

using VectorPair = std::pair<Vector, Vector>;

// Relation spanned by the given pairs {f, f'}; f in C^p, f' in C^q.
Relation make_relation(Index dim_from, Index dim_to, const std::vector<VectorPair>& pairs, const Tolerance& tol = {});

Subspace domain(const Relation& r, const Tolerance& tol = {});
Subspace range(const Relation& r, const Tolerance& tol = {});
Subspace kernel(const Relation& r, const Tolerance& tol = {});
Subspace multivalued_part(const Relation& r, const Tolerance& tol = {});
RelationParts parts(const Relation& r, const Tolerance& tol = {});

// {(k, k')} with <k', f> = <k, f'> for all {f, f'} in r.
Relation adjoint(const Relation& r);
Relation inverse(const Relation& r);

// r2 after r1: {(h, k) : (h, m) in r1 and (m, k) in r2 for some m}.
Relation compose(const Relation& r2, const Relation& r1, const Tolerance& tol = {});

// Operator-like sum {(h, h1' + h2')}.
Relation operator_sum(const Relation& r1, const Relation& r2, const Tolerance& tol = {});

// {(f, P f')} with P the projector onto (mul r)^perp.
Relation operator_part(const Relation& r, const Tolerance& tol = {});

// {(f, f') in r : f in l}.
Relation restrict(const Relation& r, const Subspace& l, const Tolerance& tol = {});

// Column relation {(h, (k1, k2)) : (h, k1) in r1, (h, k2) in r2} from C^p to C^q1 (+) C^q2.
Relation column(const Relation& r1, const Relation& r2, const Tolerance& tol = {});

// Row relation {((f1, f2), f1' + f2') : (f_j, f_j') in r_j} from C^p1 (+) C^p2 to C^q.
Relation row(const Relation& r1, const Relation& r2, const Tolerance& tol = {});

// Graph equality and inclusion through the gap metric.
double gap(const Relation& a, const Relation& b);
bool equal(const Relation& a, const Relation& b, const Tolerance& tol = {});
// Largest distance of a graph basis vector of `smaller` from graph(`larger`).
double inclusion_residual(const Relation& smaller, const Relation& larger);
bool includes(const Relation& larger, const Relation& smaller, const Tolerance& tol = {});

// Some f' with (f, f') in r, namely the one orthogonal to mul r; throws PreconditionError
// when f is not in dom r.
Vector apply(const Relation& r, const Vector& f, const Tolerance& tol = {});

// True when mul r = {0}.
bool is_operator(const Relation& r, const Tolerance& tol = {});

// Matrix M (q x p) with M f = apply(r, f) on dom r and M = 0 on (dom r)^perp.
Matrix operator_matrix(const Relation& r, const Tolerance& tol = {});

}  // namespace relab
