#include "relab/factorized.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

#include "relab/errors.hpp"
#include "relab/oracles.hpp"

namespace relab {

namespace {

// Slack allowed on the semi-angle bound tan_min(S) <= ||B||.
constexpr double kAngleSlack = 1e-8;

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

void require_left(const FactorizedSectorial& f, const char* op) {
  if (f.side != Side::left) throw UnsupportedSide(std::string(op) + ": only left factorizations T*(I+iB)T are supported");
}

Matrix inverse_one_plus_i(const Matrix& b) { return one_plus_i(b).inverse(); }

// T*(I + iB)T for T: H -> K.
Relation left_product(const Relation& t, const Matrix& b, const Tolerance& tol) {
  const Relation c = Relation::from_matrix(one_plus_i(b));
  return compose(adjoint(t), compose(c, t, tol), tol);
}

}  // namespace

const char* to_string(Side side) { return side == Side::left ? "left" : "right"; }

FactorizedSectorial factorize_product(const Relation& t, const Matrix& b, Side side, const Tolerance& tol) {
  const Index middle = side == Side::left ? t.dim_to() : t.dim_from();
  if (b.rows() != middle || b.cols() != middle) {
    throw DimensionMismatch("factorize_product: B is " + std::to_string(b.rows()) + " x " + std::to_string(b.cols()) +
                            ", middle space has dimension " + std::to_string(middle));
  }
  if (!is_hermitian(b, 1e-12)) throw PreconditionError("factorize_product: B is not Hermitian");

  // The right-sided product T(I + iB)T* is the left-sided product of T*, since T** = T.
  Relation s = side == Side::left ? left_product(t, b, tol) : left_product(adjoint(t), b, tol);
  if (side == Side::right) ensure_equal(adjoint(adjoint(t)), t, tol, "adjoint is not an involution on T");

  const SectorReport report = sectoriality(s, tol);
  ensure(report.is_sectorial, "T*(I+iB)T is not sectorial");
  const double norm_b = spectral_norm(b);
  ensure(report.tan_min <= norm_b + kAngleSlack,
         "semi-angle bound violated: tan_min " + std::to_string(report.tan_min) + " > ||B|| " + std::to_string(norm_b));
  ensure(report.is_maximal, "product of a closed factor is not maximal sectorial");

  const Relation t_adj = adjoint(t);
  if (side == Side::left) {
    ensure_equal(multivalued_part(s, tol), multivalued_part(t_adj, tol), tol, "mul S != mul T*");
    ensure_equal(kernel(s, tol), kernel(t, tol), tol, "ker S != ker T");
    ensure_equal(adjoint(s), left_product(t, -b, tol), tol, "S* != T*(I-iB)T");
  } else {
    ensure_equal(kernel(s, tol), kernel(t_adj, tol), tol, "ker S != ker T*");
    ensure_equal(multivalued_part(s, tol), multivalued_part(t, tol), tol, "mul S != mul T");
    ensure_equal(adjoint(s), left_product(t_adj, -b, tol), tol, "S* != T(I-iB)T*");
  }
  return {t, b, side, std::move(s)};
}

QJData qj_construction(const FactorizedSectorial& f, const Tolerance& tol) {
  require_left(f, "qj_construction");
  const Relation& t = f.t;
  const Index p = t.dim_from();
  const Index k = t.dim_to();
  const Relation t_adj = adjoint(t);

  // M0 = ran T  meet  (I + iB)^{-1} dom T*.
  const Subspace pre = image(inverse_one_plus_i(f.b), domain(t_adj, tol), tol);
  Subspace m = meet(range(t, tol), pre, tol);
  const Matrix& v = m.basis();
  const Index d = m.dim();
  Matrix b_m = hermitian_part(v.adjoint() * f.b * v);

  // Q = {(phi, alpha) in T : alpha in M0}, with alpha in the coordinates of M0.
  const Subspace q_graph = meet(t.graph(), direct_sum(Subspace::full(p), m), tol);
  Matrix qg(p + d, q_graph.dim());
  qg << q_graph.basis().topRows(p), v.adjoint() * q_graph.basis().bottomRows(k);
  Relation q(p, d, Subspace::from_columns(qg, tol));

  // J = {((I + iB_m) alpha, phi') : alpha in M0, ((I + iB) alpha, phi') in T*}.
  const Relation pairs = restrict(compose(t_adj, Relation::from_matrix(one_plus_i(f.b)), tol), m, tol);
  Matrix jg(d + p, pairs.graph().dim());
  jg << one_plus_i(b_m) * (v.adjoint() * pairs.domain_block()), pairs.range_block();
  Relation j(d, p, Subspace::from_columns(jg, tol));

  ensure(includes(adjoint(j), q, tol), "Q is not contained in J*");
  ensure(is_operator(q, tol), "Q is not an operator");
  ensure(range(q, tol).dim() == d, "ran Q is not dense in M");
  ensure_equal(multivalued_part(j, tol), multivalued_part(t_adj, tol), tol, "mul J != mul T*");
  const Relation rebuilt = compose(j, compose(Relation::from_matrix(one_plus_i(b_m)), q, tol), tol);
  ensure_equal(rebuilt, f.s, tol, "J(I+iB_m)Q != T*(I+iB)T");
  return {std::move(m), std::move(b_m), std::move(q), std::move(j)};
}

Relation friedrichs_factorized(const FactorizedSectorial& f, const Tolerance& tol) {
  require_left(f, "friedrichs_factorized");
  const QJData qj = qj_construction(f, tol);
  const Relation c = Relation::from_matrix(one_plus_i(qj.b_m));
  Relation sf = compose(adjoint(qj.q), compose(c, qj.q.closure(), tol), tol);
  ensure(includes(sf, f.s, tol), "S_F does not extend S");
  ensure(is_maximal_sectorial(sf, tol), "S_F is not maximal sectorial");
  ensure_equal(sf, friedrichs_oracle(f.s, tol), tol, "Q*(I+iB_m)Q** differs from the form-closure Friedrichs extension");
  return sf;
}

Relation krein_factorized(const FactorizedSectorial& f, const Tolerance& tol) {
  require_left(f, "krein_factorized");
  const QJData qj = qj_construction(f, tol);
  const Relation c = Relation::from_matrix(one_plus_i(qj.b_m));
  Relation sk = compose(qj.j.closure(), compose(c, adjoint(qj.j), tol), tol);
  ensure(includes(sk, f.s, tol), "S_K does not extend S");
  ensure(is_maximal_sectorial(sk, tol), "S_K is not maximal sectorial");
  ensure_equal(sk, krein_oracle(f.s, tol), tol, "J**(I+iB_m)J* differs from ((S^-1)_F)^-1");
  ensure(is_operator(sk, tol) == domain(f.t, tol).is_full(), "S_K is an operator but T is not densely defined, or conversely");
  return sk;
}

Relation extremal_factorized(const FactorizedSectorial& f, const Subspace& l, const Tolerance& tol) {
  require_left(f, "extremal_factorized");
  if (l.ambient_dim() != f.t.dim_from()) throw DimensionMismatch("extremal_factorized: L is not in the source space");
  const QJData qj = qj_construction(f, tol);
  const Relation j_adj = adjoint(qj.j);
  if (!l.contains(domain(qj.q, tol), tol)) throw PreconditionError("extremal_factorized: dom Q is not contained in L");
  if (!domain(j_adj, tol).contains(l, tol)) throw PreconditionError("extremal_factorized: L is not contained in dom J*");
  const Relation k = restrict(j_adj, l, tol);
  const Relation c = Relation::from_matrix(one_plus_i(qj.b_m));
  Relation h = compose(adjoint(k), compose(c, k.closure(), tol), tol);
  ensure(includes(h, f.s, tol), "K*(I+iB_m)K** does not extend S");
  ensure(is_maximal_sectorial(h, tol), "K*(I+iB_m)K** is not maximal sectorial");
  ensure(extremal_oracle(h, f.s, tol).extremal, "K*(I+iB_m)K** is not extremal");
  return h;
}

FactorizedSectorial recover_factorization(const Relation& s, RecoveryMode mode, const Tolerance& tol) {
  if (!s.is_endo()) throw DimensionMismatch("recover_factorization: relation is not square");
  if (!is_sectorial(s, tol)) throw NotSectorial("recover_factorization: relation is not sectorial");
  const Relation s_adj = adjoint(s);

  if (mode == RecoveryMode::friedrichs) {
    const Subspace mul_s = multivalued_part(s, tol);
    const Subspace mul_adj = multivalued_part(s_adj, tol);
    if (gap(mul_s, mul_adj) > tol.gap_eq) {
      throw NotFactorizable("mul S = mul S* fails (dim mul S = " + std::to_string(mul_s.dim()) +
                            ", dim mul S* = " + std::to_string(mul_adj.dim()) + ")");
    }
    const Relation sf = friedrichs_oracle(s, tol);
    const MaxSectorialDecomposition d = decompose_maximal(sf, tol);
    const Relation t = restrict(operator_part(d.sqrt_real, tol), domain(s, tol), tol);
    FactorizedSectorial f = factorize_product(t, d.b, Side::left, tol);
    ensure_equal(f.s, s, tol, "T*(I+iB)T != S");
    ensure_equal(f.s, sf, tol, "T*(I+iB)T** != S_F");
    return f;
  }

  const Subspace ker_s = kernel(s, tol);
  const Subspace ker_adj = kernel(s_adj, tol);
  if (gap(ker_s, ker_adj) > tol.gap_eq) {
    throw NotFactorizable("ker S = ker S* fails (dim ker S = " + std::to_string(ker_s.dim()) +
                          ", dim ker S* = " + std::to_string(ker_adj.dim()) + ")");
  }
  // Friedrichs factorization of S^{-1}, then inverted: T = T~^{-1} (I + B~^2)^{-1/2}, B = -B~.
  const FactorizedSectorial inv = recover_factorization(inverse(s), RecoveryMode::friedrichs, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(inv.b));
  const Eigen::VectorXd w = (1.0 + eig.eigenvalues().array().square()).rsqrt().matrix();
  const Matrix damp = eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  const Relation t = compose(inverse(inv.t), Relation::from_matrix(damp), tol);
  FactorizedSectorial f = factorize_product(t, -inv.b, Side::right, tol);
  ensure_equal(f.s, s, tol, "T(I+iB)T* != S");
  ensure_equal(f.s, krein_oracle(s, tol), tol, "T**(I+iB)T* != S_K");
  return f;
}

Vector lemma_alpha(const FactorizedSectorial& f, const Vector& phi, const Vector& phi_prime, const Tolerance& tol) {
  require_left(f, "lemma_alpha");
  const Relation& t = f.t;
  const Relation t_adj = adjoint(t);
  const Index p = t.dim_from();
  const Index k = t.dim_to();
  const Index g1 = t.graph().dim();
  const Index g2 = t_adj.graph().dim();
  if (phi.size() != p || phi_prime.size() != p) throw DimensionMismatch("lemma_alpha: vectors are not in H");
  // (phi, alpha) = T-graph * c1,  ((I + iB) alpha, phi') = T*-graph * c2.
  Matrix sys = Matrix::Zero(p + k + p, g1 + g2);
  sys.block(0, 0, p, g1) = t.domain_block();
  sys.block(p, 0, k, g1) = one_plus_i(f.b) * t.range_block();
  sys.block(p, g1, k, g2) = -t_adj.domain_block();
  sys.block(p + k, g1, p, g2) = t_adj.range_block();
  Vector rhs = Vector::Zero(p + k + p);
  rhs.head(p) = phi;
  rhs.tail(p) = phi_prime;
  if (sys.cols() == 0) {
    if (rhs.norm() > tol.gap_eq) throw PreconditionError("lemma_alpha: pair is not in S");
    return Vector::Zero(k);
  }
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys);
  const Vector c = cod.solve(rhs);
  const double res = (sys * c - rhs).norm();
  if (res > tol.gap_eq * std::max(1.0, rhs.norm())) {
    throw PreconditionError("lemma_alpha: pair is not in S (residual " + std::to_string(res) + ")");
  }
  return t.range_block() * c.head(g1);
}

Index alpha_nullity(const FactorizedSectorial& f, const Tolerance& tol) {
  require_left(f, "alpha_nullity");
  const Subspace pre = image(inverse_one_plus_i(f.b), kernel(adjoint(f.t), tol), tol);
  return meet(range(f.t, tol), pre, tol).dim();
}

AbstractModel abstract_model(const FactorizedSectorial& f, const Tolerance& tol) {
  require_left(f, "abstract_model");
  const Relation& s = f.s;
  const Relation s_inv = inverse(s);
  AbstractModel out{range(s, tol), Matrix(), Subspace(s.dim_to()), Subspace(s.dim_to()), Matrix(), Matrix()};

  // First entries phi_j with (phi_j, rho_j) in S for each basis vector rho_j of ran S.
  const auto first_entries = [&](const Matrix& vectors) {
    Matrix phi(s.dim_from(), vectors.cols());
    for (Index j = 0; j < vectors.cols(); ++j) phi.col(j) = apply(s_inv, vectors.col(j), tol);
    return phi;
  };
  const auto s_gram = [](const Matrix& rho, const Matrix& phi) {
    return Matrix(0.5 * (phi.adjoint() * rho + rho.adjoint() * phi));
  };

  const Matrix& rho = out.ran_s.basis();
  out.gram_s = s_gram(rho, first_entries(rho));
  out.r0 = meet(out.ran_s, multivalued_part(adjoint(s), tol), tol);
  ensure_equal(out.r0, multivalued_part(s, tol), tol, "isotropic part of ran S differs from mul S");
  out.quotient = meet(out.ran_s, complement(out.r0), tol);

  const Matrix& qb = out.quotient.basis();
  const Index sdim = out.quotient.dim();
  const Matrix phi_q = first_entries(qb);
  const Matrix gram_q = s_gram(qb, phi_q);
  const Matrix form_b = (kI / 2.0) * (qb.adjoint() * phi_q - phi_q.adjoint() * qb);

  Matrix half = Matrix(0, 0);
  Matrix half_inv = Matrix(0, 0);
  if (sdim > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(gram_q));
    ensure(eig.eigenvalues().minCoeff() > tol.rank_rel, "S-inner product is degenerate on ran S / R0");
    const Eigen::VectorXd r = eig.eigenvalues().cwiseSqrt();
    half = eig.eigenvectors() * r.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
    half_inv = eig.eigenvectors() * r.cwiseInverse().cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  }
  out.b_s = sdim > 0 ? Matrix(hermitian_part(half_inv * form_b * half_inv)) : Matrix(0, 0);

  // iota: alpha in M0 -> [phi'] with ((I + iB) alpha, phi') in T*.
  const QJData qj = qj_construction(f, tol);
  const Relation t_adj = adjoint(f.t);
  const Matrix c = one_plus_i(f.b);
  const Index d = qj.m.dim();
  ensure(d == sdim, "dim M0 differs from dim ran S / R0");
  out.iota = Matrix::Zero(sdim, d);
  for (Index a = 0; a < d; ++a) {
    const Vector phi_prime = apply(t_adj, c * qj.m.basis().col(a), tol);
    out.iota.col(a) = half * (qb.adjoint() * phi_prime);
  }
  if (d > 0) {
    out.isometry_residual = (out.iota.adjoint() * out.iota - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    out.compression_residual = (qj.b_m - out.iota.adjoint() * out.b_s * out.iota).cwiseAbs().maxCoeff();
  }
  return out;
}

}  // namespace relab
