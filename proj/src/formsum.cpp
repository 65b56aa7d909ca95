#include "relab/formsum.hpp"

#include <string>

#include "relab/errors.hpp"
#include "relab/oracles.hpp"

namespace relab {

namespace {

void ensure(bool ok, const std::string& what) {
  if (!ok) throw InternalInconsistency(what);
}

void ensure_equal(const Subspace& a, const Subspace& b, const Tolerance& tol, const std::string& what) {
  if (a.ambient_dim() != b.ambient_dim() || gap(a, b) > tol.gap_eq) throw InternalInconsistency(what);
}

void ensure_equal(const Relation& a, const Relation& b, const Tolerance& tol, const std::string& what) {
  const double g = gap(a, b);
  if (g > tol.gap_eq) throw InternalInconsistency(what + " (gap " + std::to_string(g) + ")");
}

void ensure_includes(const Relation& larger, const Relation& smaller, const Tolerance& tol, const std::string& what) {
  if (!includes(larger, smaller, tol)) throw InternalInconsistency(what + " fails");
}

Relation plus_i_b(const SumAssembly& sa) { return Relation::from_matrix(one_plus_i(sa.b_oplus)); }

Subspace root_domains(const SumAssembly& sa, const Tolerance& tol) {
  return meet(domain(sa.d1.sqrt_real, tol), domain(sa.d2.sqrt_real, tol), tol);
}

}  // namespace

SumAssembly assemble(const Relation& h1, const Relation& h2, const Tolerance& tol) {
  if (!h1.is_endo() || !h2.is_endo() || h1.dim_from() != h2.dim_from()) {
    throw DimensionMismatch("assemble: H1 and H2 must act in the same space");
  }
  if (!is_maximal_sectorial(h1, tol)) throw NotMaximalSectorial("assemble: H1 is not maximal sectorial");
  if (!is_maximal_sectorial(h2, tol)) throw NotMaximalSectorial("assemble: H2 is not maximal sectorial");
  const Index n = h1.dim_from();

  MaxSectorialDecomposition d1 = decompose_maximal(h1, tol);
  MaxSectorialDecomposition d2 = decompose_maximal(h2, tol);
  Matrix b_oplus = Matrix::Zero(2 * n, 2 * n);
  b_oplus.topLeftCorner(n, n) = d1.b;
  b_oplus.bottomRightCorner(n, n) = d2.b;

  const Relation& r1 = d1.sqrt_real;
  const Relation& r2 = d2.sqrt_real;
  Relation phi = row(r1, r2, tol);
  const Relation op1 = operator_part(r1, tol);
  const Relation op2 = operator_part(r2, tol);
  const Subspace dom12 = meet(domain(h1, tol), domain(h2, tol), tol);
  Relation psi = restrict(column(op1, op2, tol), dom12, tol);
  const Relation phi_adj = adjoint(phi);

  Subspace e = range(psi, tol);
  Subspace f = range(operator_part(phi_adj, tol), tol);
  Subspace d = image(one_plus_i(b_oplus), e, tol);
  Relation ksum = restrict(phi, d, tol);
  Relation sum = operator_sum(h1, h2, tol);

  ensure_equal(domain(h1, tol), domain(r1, tol), tol, "dom H1 != dom A1^{1/2}");
  ensure_equal(domain(h2, tol), domain(r2, tol), tol, "dom H2 != dom A2^{1/2}");
  ensure_equal(domain(phi, tol), direct_sum(domain(r1, tol), domain(r2, tol)), tol, "dom phi != dom A1^{1/2} x dom A2^{1/2}");
  const Subspace mul_sum = join(multivalued_part(h1, tol), multivalued_part(h2, tol), tol);
  ensure_equal(multivalued_part(phi, tol), mul_sum, tol, "mul phi != mul H1 + mul H2");
  ensure_equal(phi_adj, column(r1, r2, tol), tol, "phi* differs from the column of the square roots");
  ensure_equal(domain(phi_adj, tol), meet(domain(r1, tol), domain(r2, tol), tol), tol, "dom phi* != dom A1^{1/2} meet dom A2^{1/2}");
  ensure_equal(multivalued_part(phi_adj, tol), direct_sum(multivalued_part(h1, tol), multivalued_part(h2, tol)), tol,
               "mul phi* != mul H1 x mul H2");
  ensure(is_operator(psi, tol), "psi is not an operator");
  ensure_includes(operator_part(phi_adj, tol), psi, tol, "psi <= (phi*)_s");
  ensure_includes(phi, ksum, tol, "K <= phi");
  ensure_includes(adjoint(psi), phi, tol, "phi <= psi*");
  ensure_includes(phi_adj, psi, tol, "psi <= phi*");
  ensure_includes(adjoint(ksum), phi_adj, tol, "phi* <= K*");
  ensure_equal(domain(ksum, tol), d, tol, "dom K != D");
  ensure_equal(multivalued_part(ksum, tol), multivalued_part(sum, tol), tol, "mul K != mul (H1 + H2)");
  ensure_equal(multivalued_part(sum, tol), mul_sum, tol, "mul (H1 + H2) != mul H1 + mul H2");
  ensure_equal(e, f, tol, "E != F");
  // mul H_j = (dom H_j)^perp makes the sum maximal: its graph has dimension n.
  ensure(sum.graph().dim() == n, "dim graph(H1 + H2) != n");

  return {h1, h2, std::move(d1), std::move(d2), std::move(b_oplus), std::move(phi), std::move(psi),
          std::move(ksum), std::move(e), std::move(f), std::move(d), std::move(sum)};
}

Relation friedrichs_sum(const SumAssembly& sa, const Tolerance& tol) {
  Relation out = compose(adjoint(sa.psi), compose(plus_i_b(sa), sa.psi.closure(), tol), tol);
  ensure_equal(out, friedrichs_oracle(sa.sum, tol), tol, "psi*(I+iB)psi** differs from (H1+H2)_F");
  const Subspace dom12 = meet(domain(sa.h1, tol), domain(sa.h2, tol), tol);
  ensure_equal(multivalued_part(out, tol), complement(dom12), tol, "mul (H1+H2)_F != (dom H1 meet dom H2)^perp");
  return out;
}

KreinSum krein_sum(const SumAssembly& sa, const Tolerance& tol) {
  const Relation k_adj = adjoint(sa.ksum);
  Relation out = compose(sa.ksum.closure(), compose(plus_i_b(sa), k_adj, tol), tol);
  ensure_equal(out, krein_oracle(sa.sum, tol), tol, "K**(I+iB)K* differs from (H1+H2)_K");
  ensure_equal(multivalued_part(out, tol), multivalued_part(sa.ksum, tol), tol, "mul (H1+H2)_K != mul K**");

  KreinSum result{std::move(out), std::nullopt};
  if (gap(sa.e, sa.d) <= tol.gap_eq) {
    const Relation ks = operator_part(k_adj, tol);
    Subspace dom = domain(k_adj, tol);
    Matrix w(ks.dim_to(), dom.dim());
    for (Index j = 0; j < dom.dim(); ++j) w.col(j) = apply(ks, dom.basis().col(j), tol);
    Matrix m = w.adjoint() * one_plus_i(sa.b_oplus) * w;
    SesquiForm t{std::move(dom), std::move(m)};
    ensure(forms_equal(t, form_of(result.relation, tol), tol), "(K*)_s form differs from the form of (H1+H2)_K");
    result.form = std::move(t);
  }
  return result;
}

SesquiForm form_sum(const SesquiForm& t1, const SesquiForm& t2, const Tolerance& tol) {
  if (t1.ambient_dim() != t2.ambient_dim()) throw DimensionMismatch("form_sum: forms live in different spaces");
  const Subspace dom = meet(t1.domain, t2.domain, tol);
  const SesquiForm a = restrict_form(t1, dom);
  const SesquiForm b = restrict_form(t2, dom);
  return {dom, a.matrix + b.matrix};
}

Relation formsum_extension(const SumAssembly& sa, const Tolerance& tol) {
  Relation out = compose(sa.phi.closure(), compose(plus_i_b(sa), adjoint(sa.phi), tol), tol);
  ensure_includes(out, sa.sum, tol, "H1 + H2 <= phi**(I+iB)phi*");
  const SesquiForm t = form_sum(form_of(sa.h1, tol), form_of(sa.h2, tol), tol);
  ensure_equal(out, relation_of_form(t, tol), tol, "phi**(I+iB)phi* differs from the relation of t1 + t2");
  ensure_equal(multivalued_part(out, tol), complement(root_domains(sa, tol)), tol,
               "mul of the form sum extension != (dom A1^{1/2} meet dom A2^{1/2})^perp");
  return out;
}

Relation extremal_sum_family(const SumAssembly& sa, const Subspace& l, const Tolerance& tol) {
  if (gap(sa.e, sa.d) > tol.gap_eq) throw AssumptionNotMet("extremal_sum_family: requires E = D");
  const Index n = sa.h1.dim_from();
  if (l.ambient_dim() != n) throw DimensionMismatch("extremal_sum_family: L is not a subspace of C^" + std::to_string(n));
  const Relation k_adj = adjoint(sa.ksum);
  if (!l.contains(domain(sa.sum, tol), tol)) throw PreconditionError("extremal_sum_family: dom(H1 + H2) is not contained in L");
  if (!domain(k_adj, tol).contains(l, tol)) throw PreconditionError("extremal_sum_family: L is not contained in dom K*");
  const Relation t_l = restrict(operator_part(k_adj, tol), l, tol);
  Relation out = compose(adjoint(t_l), compose(plus_i_b(sa), t_l.closure(), tol), tol);
  ensure_includes(out, sa.sum, tol, "H1 + H2 <= T_L*(I+iB)T_L**");
  ensure(is_maximal_sectorial(out, tol), "T_L*(I+iB)T_L** is not maximal sectorial");
  ensure(extremal_oracle(out, sa.sum, tol).extremal, "T_L*(I+iB)T_L** is not extremal");
  return out;
}

ExtremalityReport extremality_report(const SumAssembly& sa, const Tolerance& tol) {
  ExtremalityReport rep;
  rep.e_eq_f = gap(sa.e, sa.f) <= tol.gap_eq;
  rep.e_eq_d = gap(sa.e, sa.d) <= tol.gap_eq;
  rep.formsum_extremal = extremal_oracle(formsum_extension(sa, tol), sa.sum, tol).extremal;
  rep.equivalence_holds = !rep.e_eq_d || (rep.formsum_extremal == rep.e_eq_f);
  rep.e_eq_f_forced = true;
  return rep;
}

}  // namespace relab
