#include "doctest.h"
#include "relab/errors.hpp"
#include "relab/oracles.hpp"
#include "relab/random.hpp"
#include "support.hpp"

using namespace relab;
using namespace relab::testing;

namespace {

Relation zero_on_e1_in_c3() { return make_relation(3, 3, {{e(3, 0), Vector::Zero(3)}}); }

// Random nonnegative symmetric relation: a nonnegative selfadjoint one restricted to a subspace.
Relation random_nonneg_symmetric(Random& rng, Index n) {
  const Relation a = rng.maximal_sectorial(n, true);
  return restrict(a, rng.subspace_between(n, 0, n));
}

}  // namespace

TEST_CASE("friedrichs_oracle examples") {
  const Relation sf = friedrichs_oracle(fx_a());
  CHECK(gap(sf, make_relation(2, 2, {{e(2, 0), Vector::Zero(2)}, {Vector::Zero(2), e(2, 1)}})) < 1e-12);
  const Relation line = make_relation(2, 2, {{e(2, 0), e(2, 0)}});
  CHECK(gap(friedrichs_oracle(line), make_relation(2, 2, {{e(2, 0), e(2, 0)}, {Vector::Zero(2), e(2, 1)}})) < 1e-12);
  Random rng(1);
  const Relation h = rng.maximal_sectorial(4);
  CHECK(gap(friedrichs_oracle(h), h) <= 1e-9);
  const Relation nil = Relation::from_matrix((Matrix(2, 2) << 0.0, 1.0, 0.0, 0.0).finished());
  CHECK_THROWS_AS(friedrichs_oracle(nil), NotSectorial);
}

TEST_CASE("krein_oracle examples") {
  CHECK(gap(krein_oracle(fx_a()), Relation::from_matrix(Matrix::Zero(2, 2))) < 1e-12);
  Random rng(2);
  const Relation h = rng.maximal_sectorial(4);
  CHECK(gap(krein_oracle(h), h) <= 1e-9);
  const Relation c = fx_c();
  const Relation s = compose(adjoint(c), compose(Relation::from_matrix(Matrix::Constant(1, 1, Complex(1.0, 0.5))), c));
  const Relation expected = make_relation(2, 2, {{e(2, 0), Vector::Zero(2)}, {Vector::Zero(2), e(2, 1)}});
  CHECK(gap(krein_oracle(s), expected) < 1e-12);
  CHECK(gap(krein_oracle(s), s) < 1e-12);
}

TEST_CASE("oracles are idempotent") {
  Random rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.uniform_int(1, 5);
    const Relation s = restrict(rng.maximal_sectorial(n), rng.subspace_between(n, 0, n));
    const Relation sf = friedrichs_oracle(s);
    const Relation sk = krein_oracle(s);
    CHECK(includes(sf, s));
    CHECK(includes(sk, s));
    CHECK(is_maximal_sectorial(sf));
    CHECK(is_maximal_sectorial(sk));
    CHECK(gap(domain(sf), domain(s)) <= 1e-9);
    CHECK(gap(friedrichs_oracle(sf), sf) <= 1e-9);
    CHECK(gap(krein_oracle(sk), sk) <= 1e-9);
  }
}

TEST_CASE("extremal_oracle examples") {
  const ExtensionVerdict v = extremal_oracle(friedrichs_oracle(fx_a()), fx_a());
  CHECK(v.extends);
  CHECK(v.maximal);
  CHECK(v.extremal);
  CHECK(v.witness_gap == 0.0);

  const ExtensionVerdict w = extremal_oracle(relation_of_form(SesquiForm{Subspace::full(2), Matrix::Identity(2, 2)}), fx_a());
  CHECK_FALSE(w.extends);
  CHECK_FALSE(w.extremal);
  CHECK(w.witness_gap > 0.1);

  Random rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.uniform_int(1, 5);
    const Relation s = restrict(rng.maximal_sectorial(n), rng.subspace_between(n, 0, n));
    const ExtensionVerdict k = extremal_oracle(krein_oracle(s), s);
    CHECK(k.extremal);
    CHECK(k.witness_gap <= 1e-9);
  }
}

TEST_CASE("extension_family_general examples") {
  const Relation a = fx_a();
  CHECK(gap(extension_family_general(a, span_of(2, {e(2, 0)})), friedrichs_oracle(a)) < 1e-12);
  CHECK(gap(extension_family_general(a, Subspace::full(2)), krein_oracle(a)) < 1e-12);

  const Relation s = zero_on_e1_in_c3();
  const Relation mid = extension_family_general(s, span_of(3, {e(3, 0), e(3, 1)}));
  const Relation expected = make_relation(3, 3, {{e(3, 0), Vector::Zero(3)}, {e(3, 1), Vector::Zero(3)}, {Vector::Zero(3), e(3, 2)}});
  CHECK(gap(mid, expected) < 1e-12);
  CHECK(gap(mid, friedrichs_oracle(s)) > 0.5);
  CHECK(gap(mid, krein_oracle(s)) > 0.5);
  CHECK(extremal_oracle(mid, s).extremal);

  CHECK_THROWS_AS(extension_family_general(s, span_of(3, {e(3, 1)})), PreconditionError);
}

TEST_CASE("extension_family_general outputs are extremal") {
  Random rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.uniform_int(1, 5);
    const Relation s = restrict(rng.maximal_sectorial(n), rng.subspace_between(n, 0, n));
    const Subspace dom_s = domain(s);
    const Subspace dom_k = form_of(krein_oracle(s)).domain;
    // A random L between dom S and dom t_{S_K}.
    const Subspace extra = meet(dom_k, complement(dom_s));
    const Subspace l = join(dom_s, image(extra.basis(), rng.subspace_between(extra.dim(), 0, extra.dim())));
    const Relation h = extension_family_general(s, l);
    const ExtensionVerdict v = extremal_oracle(h, s);
    CHECK(v.extremal);
    CHECK(v.witness_gap <= 1e-9);
  }
}

TEST_CASE("form order of the two oracles on nonnegative symmetric relations") {
  Random rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = rng.uniform_int(1, 5);
    const Relation s = random_nonneg_symmetric(rng, n);
    const SesquiForm tf = form_of(friedrichs_oracle(s));
    const SesquiForm tk = form_of(krein_oracle(s));
    CHECK(tk.domain.contains(tf.domain));
    if (tf.domain.dim() == 0) continue;
    const Matrix k_on_f = restrict_form(tk, tf.domain).matrix;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(tf.matrix - k_on_f));
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
}
