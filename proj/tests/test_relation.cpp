#include "doctest.h"
#include "relab/errors.hpp"
#include "relab/random.hpp"
#include "relab/relation.hpp"
#include "support.hpp"

using namespace relab;
using namespace relab::testing;

TEST_CASE("make_relation and from_matrix") {
  const Relation a = fx_a();
  CHECK(a.graph().dim() == 1);
  CHECK(gap(a.graph(), span_of(4, {vec({1.0, 0.0, 0.0, 0.0})})) < 1e-14);
  CHECK(Relation::from_matrix(Matrix::Identity(2, 2)).graph().dim() == 2);

  const Relation c = fx_c();
  CHECK(c.dim_from() == 2);
  CHECK(c.dim_to() == 1);
  CHECK(gap(domain(c), span_of(2, {e(2, 0)})) < 1e-14);
  CHECK(multivalued_part(c).is_full());

  CHECK_THROWS_AS(make_relation(2, 2, {{e(3, 0), e(2, 0)}}), DimensionMismatch);
}

TEST_CASE("parts") {
  const RelationParts pa = parts(fx_a());
  const Subspace e1 = span_of(2, {e(2, 0)});
  CHECK(gap(pa.dom, e1) < 1e-14);
  CHECK(gap(pa.ker, e1) < 1e-14);
  CHECK(pa.ran.is_zero());
  CHECK(pa.mul.is_zero());

  const RelationParts pc = parts(fx_c());
  CHECK(gap(pc.dom, e1) < 1e-14);
  CHECK(gap(pc.ker, e1) < 1e-14);
  CHECK(pc.ran.is_full());
  CHECK(pc.mul.is_full());

  const Matrix m = (Matrix(2, 3) << 1.0, 2.0, 0.0, 2.0, 4.0, 0.0).finished();
  const RelationParts pm = parts(Relation::from_matrix(m));
  CHECK(pm.dom.is_full());
  CHECK(pm.mul.is_zero());
  CHECK(pm.ker.dim() == 2);
  CHECK((m * pm.ker.basis()).norm() < 1e-12);
}

TEST_CASE("adjoint") {
  Random rng(5);
  const Matrix m = rng.matrix(3, 2);
  CHECK(gap(adjoint(Relation::from_matrix(m)), Relation::from_matrix(m.adjoint())) < 1e-12);

  // Adjoint of fx_c: pairs (k, k') in C^1 x C^2 with <k', f> = <k, f'> for both generators.
  const Relation cs = adjoint(fx_c());
  CHECK(cs.dim_from() == 1);
  CHECK(cs.dim_to() == 2);
  CHECK(gap(cs.graph(), span_of(3, {vec({0.0, 0.0, 1.0})})) < 1e-14);
  const Relation c = fx_c();
  double pairing = 0.0;
  for (Index i = 0; i < c.graph().dim(); ++i) {
    for (Index j = 0; j < cs.graph().dim(); ++j) {
      const Vector f = c.domain_block().col(i), fp = c.range_block().col(i);
      const Vector k = cs.domain_block().col(j), kp = cs.range_block().col(j);
      pairing = std::max(pairing, std::abs(kp.dot(f) - k.dot(fp)));
    }
  }
  CHECK(pairing < 1e-14);

  for (int trial = 0; trial < 100; ++trial) {
    const Relation r = rng.relation(rng.uniform_int(1, 5), rng.uniform_int(1, 5));
    CHECK(gap(adjoint(adjoint(r)), r) <= 1e-9);
    CHECK(gap(adjoint(inverse(r)), inverse(adjoint(r))) <= 1e-9);
    CHECK(gap(multivalued_part(adjoint(r)), complement(domain(r))) <= 1e-9);
    CHECK(gap(kernel(adjoint(r)), complement(range(r))) <= 1e-9);
  }
}

TEST_CASE("inverse") {
  const Relation ia = inverse(fx_a());
  CHECK(gap(ia.graph(), span_of(4, {vec({0.0, 0.0, 1.0, 0.0})})) < 1e-14);
  CHECK(gap(inverse(Relation::from_matrix(diag({2.0, 3.0}))), Relation::from_matrix(diag({0.5, 1.0 / 3.0}))) < 1e-12);
  Random rng(8);
  const Relation r = rng.relation(3, 2);
  CHECK(gap(inverse(inverse(r)), r) < 1e-14);
  const RelationParts p = parts(r), q = parts(inverse(r));
  CHECK(gap(p.dom, q.ran) < 1e-12);
  CHECK(gap(p.ker, q.mul) < 1e-12);
}

TEST_CASE("compose") {
  const Relation t = Relation::from_matrix(diag({1.0, 0.0}));
  CHECK(gap(compose(adjoint(t), t), Relation::from_matrix(diag({1.0, 0.0}))) < 1e-12);

  for (double b : {0.0, 0.7, -3.0}) {
    const Relation c = Relation::from_matrix(Matrix::Constant(1, 1, Complex(1.0, b)));
    const Relation s = compose(adjoint(fx_c()), compose(c, fx_c()));
    CHECK(gap(s.graph(), span_of(4, {vec({1.0, 0.0, 0.0, 0.0}), vec({0.0, 0.0, 0.0, 1.0})})) < 1e-12);
  }

  Random rng(13);
  const Relation r = rng.relation(3, 4);
  CHECK(gap(compose(r, Relation::identity(3)), r) < 1e-12);
  CHECK(gap(compose(Relation::identity(4), r), r) < 1e-12);
  CHECK_THROWS_AS(compose(r, rng.relation(2, 2)), DimensionMismatch);

  for (int trial = 0; trial < 50; ++trial) {
    const Index a = rng.uniform_int(1, 4), b = rng.uniform_int(1, 4), c = rng.uniform_int(1, 4), d = rng.uniform_int(1, 4);
    const Relation r1 = rng.relation(a, b), r2 = rng.relation(b, c), r3 = rng.relation(c, d);
    CHECK(gap(compose(r3, compose(r2, r1)), compose(compose(r3, r2), r1)) <= 1e-8);
  }
}

TEST_CASE("operator_sum") {
  Random rng(17);
  const Matrix a = rng.matrix(3, 3), b = rng.matrix(3, 3);
  CHECK(gap(operator_sum(Relation::from_matrix(a), Relation::from_matrix(b)), Relation::from_matrix(a + b)) < 1e-12);
  CHECK(gap(operator_sum(fx_d1(), fx_d2()), Relation::from_matrix(diag({Complex(2.0, 1.0), 2.0}))) < 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.uniform_int(1, 5);
    const Relation r1 = rng.relation(n, n), r2 = rng.relation(n, n);
    const Relation s = operator_sum(r1, r2);
    CHECK(gap(multivalued_part(s), join(multivalued_part(r1), multivalued_part(r2))) <= 1e-9);
    CHECK(gap(domain(s), meet(domain(r1), domain(r2))) <= 1e-9);
  }
  CHECK_THROWS_AS(operator_sum(fx_a(), fx_c()), DimensionMismatch);
}

TEST_CASE("operator_part") {
  // {(e1, e1), (0, e2)}: the e2 component is projected away.
  const Relation h = make_relation(2, 2, {{e(2, 0), e(2, 0)}, {Vector::Zero(2), e(2, 1)}});
  const Relation op = operator_part(h);
  CHECK(is_operator(op));
  CHECK(gap(op, make_relation(2, 2, {{e(2, 0), e(2, 0)}})) < 1e-12);

  Random rng(19);
  const Relation m = rng.operator_relation(3, 2);
  CHECK(gap(operator_part(m), m) < 1e-12);

  const Relation p = pure(2, {e(2, 0)});
  const Relation opp = operator_part(p);
  CHECK(opp.graph().is_zero());
  CHECK(domain(opp).is_zero());
}

TEST_CASE("restrict") {
  const Relation r = restrict(Relation::identity(2), span_of(2, {e(2, 0)}));
  CHECK(gap(r, make_relation(2, 2, {{e(2, 0), e(2, 0)}})) < 1e-12);

  Random rng(23);
  const Relation g = rng.relation(3, 3);
  CHECK(gap(restrict(g, domain(g)), g) < 1e-12);
  const Relation z = restrict(g, Subspace(3));
  CHECK(domain(z).is_zero());
  CHECK(gap(range(z), multivalued_part(g)) < 1e-12);
}

TEST_CASE("closure is the identity") {
  Random rng(29);
  const Relation r = rng.relation(2, 3);
  CHECK(&r.closure() == &r);
  CHECK(gap(adjoint(adjoint(r)), r.closure()) < 1e-9);
}

TEST_CASE("apply and operator_matrix") {
  const Relation h = make_relation(2, 2, {{e(2, 0), vec({2.0, 5.0})}, {Vector::Zero(2), e(2, 1)}});
  CHECK((relab::apply(h, e(2, 0)) - vec({2.0, 0.0})).norm() < 1e-12);
  CHECK_THROWS_AS(relab::apply(h, e(2, 1)), PreconditionError);
  CHECK_THROWS_AS(relab::apply(h, e(3, 1)), DimensionMismatch);
  Random rng(31);
  const Matrix m = rng.matrix(2, 3);
  CHECK((operator_matrix(Relation::from_matrix(m)) - m).norm() < 1e-12);
}
