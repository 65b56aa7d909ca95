#pragma once

#include <string>

#include "relab/sectorial.hpp"

namespace relab {

enum class Side { left, right };

const char* to_string(Side side);

// S = T*(I + iB)T (left, T: H -> K) or S = T(I + iB)T* (right, T: K -> H).
struct FactorizedSectorial {
  Relation t;
  Matrix b;
  Side side;
  Relation s;
};

// Composes the product and asserts the structural identities that hold for it: sectorial with
// tan_min <= ||B||, the kernel/multivalued-part identities of the side, maximality, and
// S* = T*(I - iB)T (resp. T(I - iB)T*). Failures raise InternalInconsistency.
FactorizedSectorial factorize_product(const Relation& t, const Matrix& b, Side side, const Tolerance& tol = {});

// The middle-space data of a left factorization.
//   m:    the subspace M0 = {alpha in ran T : (I + iB) alpha in dom T*} of K
//   b_m:  compression of B to M0, in the coordinates of m.basis()
//   q:    {(phi, alpha) in T : alpha in M0}, H -> C^dim(M0)
//   j:    {((I + iB_m) alpha, phi') : alpha in M0, ((I + iB) alpha, phi') in T*}, C^dim(M0) -> H
struct QJData {
  Subspace m;
  Matrix b_m;
  Relation q;
  Relation j;
};

QJData qj_construction(const FactorizedSectorial& f, const Tolerance& tol = {});

// Q*(I + iB_m)Q**, asserted equal to the definitional Friedrichs extension.
Relation friedrichs_factorized(const FactorizedSectorial& f, const Tolerance& tol = {});
// J**(I + iB_m)J*, asserted equal to the definitional Krein extension.
Relation krein_factorized(const FactorizedSectorial& f, const Tolerance& tol = {});
// K*(I + iB_m)K** with K = J* restricted to l, for dom Q <= l <= dom J*.
Relation extremal_factorized(const FactorizedSectorial& f, const Subspace& l, const Tolerance& tol = {});

enum class RecoveryMode { friedrichs, krein };

// Left factorization with S_F = T*(I + iB)T** (friedrichs) or right factorization with
// S_K = T**(I + iB)T* (krein), following the explicit constructions of T.
FactorizedSectorial recover_factorization(const Relation& s, RecoveryMode mode, const Tolerance& tol = {});

// Quotient picture of ran S under <phi', psi'>_S = ((phi', psi) + (phi, psi'))/2.
struct AbstractModel {
  Subspace ran_s;
  // Gram matrix of the S-inner product on ran_s.basis(): gram(j, k) = <rho_k, rho_j>_S.
  Matrix gram_s;
  Subspace r0;
  // Euclidean-orthonormal basis of ran S (-) R0 representing the quotient ran S / R0.
  Subspace quotient;
  // B_S in an S-orthonormal basis of the quotient (Hermitian).
  Matrix b_s;
  // Isometry M0 -> ran S / R0, alpha -> [phi'], in the same bases.
  Matrix iota;
  // ||iota^H iota - I|| and ||B_m - iota^H B_S iota||.
  double isometry_residual = 0.0;
  double compression_residual = 0.0;
};

AbstractModel abstract_model(const FactorizedSectorial& f, const Tolerance& tol = {});

// The unique alpha with (phi, alpha) in T and ((I + iB) alpha, phi') in T*, for (phi, phi') in S.
Vector lemma_alpha(const FactorizedSectorial& f, const Vector& phi, const Vector& phi_prime, const Tolerance& tol = {});

// Dimension of {alpha in ran T : (I + iB) alpha in ker T*}, which is zero for every left factorization.
Index alpha_nullity(const FactorizedSectorial& f, const Tolerance& tol = {});

}  // namespace relab
