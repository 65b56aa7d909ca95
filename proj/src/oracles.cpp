#include "relab/oracles.hpp"

#include <algorithm>
#include <string>

#include "relab/errors.hpp"

namespace relab {

namespace {

void require_sectorial(const Relation& s, const Tolerance& tol, const char* op) {
  if (!is_sectorial(s, tol)) throw NotSectorial(std::string(op) + ": relation is not sectorial");
}

}  // namespace

Relation friedrichs_oracle(const Relation& s, const Tolerance& tol) {
  require_sectorial(s, tol, "friedrichs_oracle");
  return relation_of_form(form_of(s, tol), tol);
}

Relation krein_oracle(const Relation& s, const Tolerance& tol) {
  require_sectorial(s, tol, "krein_oracle");
  return inverse(friedrichs_oracle(inverse(s), tol));
}

ExtensionVerdict extremal_oracle(const Relation& h, const Relation& s, const Tolerance& tol) {
  ExtensionVerdict v;
  const double inclusion = inclusion_residual(s, h);
  v.extends = inclusion <= tol.gap_eq;
  if (!v.extends) v.witness_gap = std::max(v.witness_gap, inclusion);
  v.maximal = is_maximal_sectorial(h, tol);
  if (!v.maximal) {
    v.witness_gap = std::max(v.witness_gap, 1.0);
    return v;
  }
  const SesquiForm th = form_of(h, tol);
  const SesquiForm tk = form_of(krein_oracle(s, tol), tol);
  // Express the basis of dom t_H in the coordinates of dom t_K by least squares.
  const double dom_residual = tk.domain.residual(th.domain.basis());
  bool restricts = dom_residual <= tol.gap_eq;
  if (!restricts) {
    v.witness_gap = std::max(v.witness_gap, dom_residual);
  } else if (th.domain.dim() > 0) {
    const Matrix c = tk.domain.basis().adjoint() * th.domain.basis();
    const double diff = (c.adjoint() * tk.matrix * c - th.matrix).cwiseAbs().maxCoeff();
    if (diff > tol.gap_eq) {
      restricts = false;
      v.witness_gap = std::max(v.witness_gap, diff);
    }
  }
  v.extremal = v.extends && v.maximal && restricts;
  return v;
}

Relation extension_family_general(const Relation& s, const Subspace& l, const Tolerance& tol) {
  require_sectorial(s, tol, "extension_family_general");
  if (l.ambient_dim() != s.dim_from()) throw DimensionMismatch("extension_family_general: L is not in the space");
  const Subspace dom_s = domain(s, tol);
  if (!l.contains(dom_s, tol)) throw PreconditionError("extension_family_general: dom S is not contained in L");
  const SesquiForm tk = form_of(krein_oracle(s, tol), tol);
  if (!tk.domain.contains(l, tol)) {
    throw PreconditionError("extension_family_general: L is not contained in dom t_{S_K}");
  }
  return relation_of_form(restrict_form(tk, l, tol.gap_eq), tol);
}

Subspace meet_by_nullspace(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("meet_by_nullspace: ambient dimensions differ");
  const Index n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(n);
  // A x = B y  <=>  [A, -B] (x; y) = 0; the meet is spanned by A x.
  Matrix stacked(n, a.dim() + b.dim());
  stacked << a.basis(), -b.basis();
  const Matrix ns = null_space(stacked, tol);
  return Subspace::from_columns(a.basis() * ns.topRows(a.dim()), tol);
}

}  // namespace relab
