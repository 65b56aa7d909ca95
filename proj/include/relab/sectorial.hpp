#pragma once

#include <limits>

#include "relab/relation.hpp"

namespace relab {

// Sesquilinear form t[h, k] = <M c_h, c_k> = c_k^H M c_h, where c_h are the coordinates of h
// in the orthonormal basis of `domain`.
struct SesquiForm {
  Subspace domain;
  Matrix matrix;

  Index ambient_dim() const { return domain.ambient_dim(); }
  // Evaluates t[h, k] for ambient vectors h, k in the domain.
  Complex operator()(const Vector& h, const Vector& k) const;
  // Real part (form), i.e. the form with matrix (M + M^H)/2.
  SesquiForm real_part() const;
};

// Coordinates of `target` in the basis of `source`: returns C with source.basis() * C equal to
// target.basis(); throws PreconditionError when the residual exceeds `max_residual`.
Matrix basis_change(const Subspace& source, const Subspace& target, double max_residual);

// Form t restricted to a subspace l of its domain.
SesquiForm restrict_form(const SesquiForm& t, const Subspace& l, double max_residual = 1e-9);

// Two forms are equal when their domains coincide and the matrices agree after basis alignment.
double form_distance(const SesquiForm& a, const SesquiForm& b);
bool forms_equal(const SesquiForm& a, const SesquiForm& b, const Tolerance& tol = {});

struct SectorReport {
  bool is_sectorial = false;
  // Minimal tan(alpha) with |Im(h', h)| <= tan(alpha) Re(h', h); +inf when not sectorial.
  double tan_min = std::numeric_limits<double>::infinity();
  bool is_maximal = false;
};

// Sectoriality of the d x d matrix M as a form on C^d.
SectorReport matrix_sectoriality(const Matrix& m, const Tolerance& tol = {});

// Sectoriality of an endorelation via M = X^H Y on an orthonormal graph basis [X; Y]:
// sectorial iff Re M >= 0 and ran Im M is inside ran Re M; maximal iff additionally dim graph = n.
SectorReport sectoriality(const Relation& r, const Tolerance& tol = {});

bool is_sectorial(const Relation& r, const Tolerance& tol = {});
bool is_maximal_sectorial(const Relation& r, const Tolerance& tol = {});
SesquiForm form_of(const Relation& r, const Tolerance& tol = {});

// First representation theorem: {(h, h') : h in dom t, (h', k) = t[h, k] for k in dom t}.
Relation relation_of_form(const SesquiForm& t, const Tolerance& tol = {});

// Nonnegative selfadjoint relation check: sectorial with tan_min = 0 and A = A*.
bool is_nonneg_selfadjoint(const Relation& a, const Tolerance& tol = {});

// Principal square root A^{1/2} = A_s^{1/2} (+) ({0} x mul A).
Relation sqrt_nonneg(const Relation& a, const Tolerance& tol = {});

// H = (H_r)^{1/2} (I + iB) (H_r)^{1/2}, B Hermitian and zero on ker H_r (+) mul H_r.
struct MaxSectorialDecomposition {
  Relation real_part;
  Relation sqrt_real;
  Matrix b;
  // Operator part (H_r)_s^{1/2} as an n x n matrix (zero on mul H_r).
  Matrix sqrt_real_operator;
};

MaxSectorialDecomposition decompose_maximal(const Relation& h, const Tolerance& tol = {});

// (H_r)^{1/2} (I + iB) (H_r)^{1/2} from a decomposition.
Relation recompose(const MaxSectorialDecomposition& d, const Tolerance& tol = {});

}  // namespace relab
