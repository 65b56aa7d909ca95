#pragma once

#include "relab/sectorial.hpp"

namespace relab {

// Definitional constructions used as ground truth for the factorized ones.

// Result of testing whether H is an extremal maximal sectorial extension of S.
struct ExtensionVerdict {
  bool extends = false;
  bool maximal = false;
  bool extremal = false;
  // Largest violated residual among the checks; 0 when all pass.
  double witness_gap = 0.0;
};

// Relation associated with the closure of the form t_S[phi, psi] = (phi', psi) on dom S.
Relation friedrichs_oracle(const Relation& s, const Tolerance& tol = {});

// ((S^{-1})_F)^{-1}.
Relation krein_oracle(const Relation& s, const Tolerance& tol = {});

// H extends S, H is maximal sectorial, and t_H is a restriction of t_{S_K}.
ExtensionVerdict extremal_oracle(const Relation& h, const Relation& s, const Tolerance& tol = {});

// Relation of the Krein form restricted to l, for dom S <= l <= dom t_{S_K}.
Relation extension_family_general(const Relation& s, const Subspace& l, const Tolerance& tol = {});

// Intersection computed by stacking bases and taking a null space, independent of the
// complement-of-join route of subspace.hpp.
Subspace meet_by_nullspace(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

}  // namespace relab
