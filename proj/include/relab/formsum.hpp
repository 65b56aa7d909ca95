#pragma once

#include <optional>

#include "relab/sectorial.hpp"

namespace relab {

// Data attached to a pair of maximal sectorial relations H1, H2 on C^n.
//   phi:  {((f1, f2), f1' + f2') : (f_j, f_j') in A_j^{1/2}},              C^2n -> C^n
//   psi:  {(h, (A_1s^{1/2} h, A_2s^{1/2} h)) : h in dom H1 meet dom H2},   C^n -> C^2n
//   ksum: phi restricted to d,                                             C^2n -> C^n
//   e = ran psi, f = ran (phi*)_s, d = (I + iB_oplus) e.
struct SumAssembly {
  Relation h1;
  Relation h2;
  MaxSectorialDecomposition d1;
  MaxSectorialDecomposition d2;
  Matrix b_oplus;
  Relation phi;
  Relation psi;
  Relation ksum;
  Subspace e;
  Subspace f;
  Subspace d;
  Relation sum;
};

SumAssembly assemble(const Relation& h1, const Relation& h2, const Tolerance& tol = {});

// psi*(I + iB_oplus)psi**.
Relation friedrichs_sum(const SumAssembly& sa, const Tolerance& tol = {});

struct KreinSum {
  Relation relation;
  // ((I + iB_oplus)(K*)_s f, (K*)_s g) on dom K*, only when e = d.
  std::optional<SesquiForm> form;
};

// K**(I + iB_oplus)K*.
KreinSum krein_sum(const SumAssembly& sa, const Tolerance& tol = {});

// phi**(I + iB_oplus)phi*.
Relation formsum_extension(const SumAssembly& sa, const Tolerance& tol = {});

// Sum of two forms on the intersection of their domains.
SesquiForm form_sum(const SesquiForm& t1, const SesquiForm& t2, const Tolerance& tol = {});

// T_L*(I + iB_oplus)T_L** with T_L = (K*)_s restricted to l, for dom(H1 + H2) <= l <= dom K*.
Relation extremal_sum_family(const SumAssembly& sa, const Subspace& l, const Tolerance& tol = {});

struct ExtremalityReport {
  bool e_eq_f = false;
  bool e_eq_d = false;
  bool formsum_extremal = false;
  bool equivalence_holds = false;
  // e = f holds for every finite-dimensional pair, so the equivalence is only confirmed, never
  // discriminated.
  bool e_eq_f_forced = true;
};

ExtremalityReport extremality_report(const SumAssembly& sa, const Tolerance& tol = {});

}  // namespace relab
