#include <cmath>

#include "doctest.h"
#include "relab/errors.hpp"
#include "relab/formsum.hpp"
#include "relab/oracles.hpp"
#include "relab/random.hpp"
#include "support.hpp"

using namespace relab;
using namespace relab::testing;

namespace {

// {(c e1, c e1 + d e2)}: dom = span e1, mul = span e2.
Relation line_with_mul() { return make_relation(2, 2, {{e(2, 0), e(2, 0)}, {Vector::Zero(2), e(2, 1)}}); }

Relation zero2() { return Relation::from_matrix(Matrix::Zero(2, 2)); }

}  // namespace

TEST_CASE("assemble diagonal pair") {
  const SumAssembly sa = assemble(fx_d1(), fx_d2());
  CHECK(gap(sa.d1.real_part, fx_d1()) < 1e-12);
  CHECK(sa.d1.b.norm() < 1e-12);
  CHECK(gap(sa.d2.real_part, Relation::from_matrix(diag({1.0, 0.0}))) < 1e-12);
  CHECK((sa.d2.b - diag({1.0, 0.0})).norm() < 1e-12);
  const double r2 = std::sqrt(2.0);
  // E = {((f1, sqrt2 f2), (f1, 0))}, D = {((f1, sqrt2 f2), ((1 + i) f1, 0))}.
  const Subspace e_expected = span_of(4, {vec({1.0, 0.0, 1.0, 0.0}), vec({0.0, r2, 0.0, 0.0})});
  const Subspace d_expected = span_of(4, {vec({1.0, 0.0, Complex(1.0, 1.0), 0.0}), vec({0.0, r2, 0.0, 0.0})});
  CHECK(gap(sa.e, e_expected) < 1e-12);
  CHECK(gap(sa.f, e_expected) < 1e-12);
  CHECK(gap(sa.d, d_expected) < 1e-12);
  CHECK(gap(sa.e, sa.d) > 0.1);
  CHECK(gap(sa.sum, Relation::from_matrix(diag({Complex(2.0, 1.0), 2.0}))) < 1e-12);
}

TEST_CASE("assemble identity pair") {
  const SumAssembly sa = assemble(Relation::identity(2), Relation::identity(2));
  Matrix row(2, 4), col(4, 2);
  row << Matrix::Identity(2, 2), Matrix::Identity(2, 2);
  col << Matrix::Identity(2, 2), Matrix::Identity(2, 2);
  CHECK(gap(sa.phi, Relation::from_matrix(row)) < 1e-12);
  CHECK(gap(sa.psi, Relation::from_matrix(col)) < 1e-12);
  const Subspace diagonal = Subspace::from_columns(col);
  CHECK(gap(sa.e, diagonal) < 1e-12);
  CHECK(gap(sa.f, diagonal) < 1e-12);
  CHECK(gap(sa.d, diagonal) < 1e-12);
}

TEST_CASE("assemble with a multivalued summand") {
  const SumAssembly sa = assemble(Relation::identity(2), line_with_mul());
  CHECK(gap(sa.d2.real_part, line_with_mul()) < 1e-12);
  CHECK(gap(domain(adjoint(sa.phi)), span_of(2, {e(2, 0)})) < 1e-12);
  CHECK_THROWS_AS(assemble(fx_a(), Relation::identity(2)), NotMaximalSectorial);
  CHECK_THROWS_AS(assemble(Relation::identity(3), Relation::identity(2)), DimensionMismatch);
}

TEST_CASE("friedrichs_sum examples") {
  const Relation expected = Relation::from_matrix(diag({Complex(2.0, 1.0), 2.0}));
  CHECK(gap(friedrichs_sum(assemble(fx_d1(), fx_d2())), expected) < 1e-10);
  CHECK(gap(friedrichs_sum(assemble(zero2(), zero2())), zero2()) < 1e-12);
  const Relation m = friedrichs_sum(assemble(line_with_mul(), Relation::identity(2)));
  CHECK(gap(m, make_relation(2, 2, {{e(2, 0), 2.0 * e(2, 0)}, {Vector::Zero(2), e(2, 1)}})) < 1e-12);
}

TEST_CASE("krein_sum examples") {
  const KreinSum d = krein_sum(assemble(fx_d1(), fx_d2()));
  CHECK(gap(d.relation, Relation::from_matrix(diag({Complex(2.0, 1.0), 2.0}))) < 1e-10);
  CHECK_FALSE(d.form.has_value());

  const KreinSum i = krein_sum(assemble(Relation::identity(2), Relation::identity(2)));
  CHECK(gap(i.relation, Relation::from_matrix(2.0 * Matrix::Identity(2, 2))) < 1e-12);
  REQUIRE(i.form.has_value());
  CHECK(forms_equal(*i.form, SesquiForm{Subspace::full(2), 2.0 * Matrix::Identity(2, 2)}));

  const SumAssembly real = assemble(Relation::from_matrix(diag({1.0, 0.0})), Relation::from_matrix(diag({0.0, 1.0})));
  CHECK(gap(real.e, real.d) < 1e-12);
  const KreinSum r = krein_sum(real);
  CHECK(gap(r.relation, Relation::identity(2)) < 1e-12);
  CHECK(r.form.has_value());
}

TEST_CASE("formsum_extension examples") {
  CHECK(gap(formsum_extension(assemble(fx_d1(), fx_d2())), Relation::from_matrix(diag({Complex(2.0, 1.0), 2.0}))) < 1e-10);
  const Relation zl = relation_of_form(SesquiForm{span_of(2, {e(2, 0)}), Matrix::Zero(1, 1)});
  const Relation fs = formsum_extension(assemble(zl, zl));
  CHECK(gap(fs, make_relation(2, 2, {{e(2, 0), Vector::Zero(2)}, {Vector::Zero(2), e(2, 1)}})) < 1e-12);
  CHECK(gap(formsum_extension(assemble(Relation::identity(2), Relation::identity(2))),
            Relation::from_matrix(2.0 * Matrix::Identity(2, 2))) < 1e-12);
}

TEST_CASE("extremal_sum_family") {
  const SumAssembly sa = assemble(Relation::identity(2), Relation::identity(2));
  CHECK(gap(extremal_sum_family(sa, Subspace::full(2)), Relation::from_matrix(2.0 * Matrix::Identity(2, 2))) < 1e-12);
  CHECK_THROWS_AS(extremal_sum_family(sa, span_of(2, {e(2, 0)})), PreconditionError);
  CHECK_THROWS_AS(extremal_sum_family(assemble(fx_d1(), fx_d2()), Subspace::full(2)), AssumptionNotMet);

  const Relation zl = relation_of_form(SesquiForm{span_of(2, {e(2, 0)}), Matrix::Zero(1, 1)});
  const SumAssembly z = assemble(zl, zl);
  const Subspace lo = domain(z.sum);
  const Subspace hi = domain(adjoint(z.ksum));
  CHECK(gap(extremal_sum_family(z, lo), friedrichs_sum(z)) < 1e-12);
  CHECK(gap(extremal_sum_family(z, hi), krein_sum(z).relation) < 1e-12);
}

TEST_CASE("extremality_report examples") {
  const ExtremalityReport d = extremality_report(assemble(fx_d1(), fx_d2()));
  CHECK(d.e_eq_f);
  CHECK_FALSE(d.e_eq_d);
  CHECK(d.formsum_extremal);
  CHECK(d.equivalence_holds);
  CHECK(d.e_eq_f_forced);

  const ExtremalityReport i = extremality_report(assemble(Relation::identity(2), Relation::identity(2)));
  CHECK(i.e_eq_f);
  CHECK(i.e_eq_d);
  CHECK(i.formsum_extremal);
  CHECK(i.equivalence_holds);
}

TEST_CASE("random maximal pairs") {
  Random rng(11);
  int with_form = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = rng.uniform_int(1, 4);
    const bool real = trial % 3 == 0;
    const SumAssembly sa = assemble(rng.maximal_sectorial(n, real), rng.maximal_sectorial(n, real));
    const Relation f = friedrichs_sum(sa);
    const KreinSum k = krein_sum(sa);
    const Relation fs = formsum_extension(sa);
    CHECK(gap(f, sa.sum) <= 1e-8);
    CHECK(gap(k.relation, sa.sum) <= 1e-8);
    CHECK(gap(fs, sa.sum) <= 1e-8);
    CHECK(k.form.has_value() == (gap(sa.e, sa.d) <= 1e-9));
    if (k.form) ++with_form;
    CHECK(extremality_report(sa).equivalence_holds);
  }
  CHECK(with_form > 0);
}
