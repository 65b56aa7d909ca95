#include "relab/sectorial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relab/errors.hpp"

namespace relab {

namespace {

// Eigenvalues below this count as zero for a Hermitian PSD candidate of unit scale.
double psd_threshold(const Eigen::VectorXd& eigenvalues, const Tolerance& tol) {
  const double scale = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return tol.rank_rel * std::max(1.0, scale);
}

struct PsdSplit {
  Matrix range_vectors;  // eigenvectors with eigenvalue above threshold
  Eigen::VectorXd range_values;
  Matrix kernel_vectors;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;
};

PsdSplit split_psd(const Matrix& hermitian, const Tolerance& tol) {
  PsdSplit out;
  const Index d = hermitian.rows();
  if (d == 0) {
    out.range_vectors = Matrix(0, 0);
    out.kernel_vectors = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(hermitian));
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  out.threshold = psd_threshold(lambda, tol);
  out.min_eigenvalue = lambda.minCoeff();
  // Eigenvalues are ascending: kernel first, range last.
  Index k = 0;
  while (k < d && lambda(k) <= out.threshold) ++k;
  out.kernel_vectors = eig.eigenvectors().leftCols(k);
  out.range_vectors = eig.eigenvectors().rightCols(d - k);
  out.range_values = lambda.tail(d - k);
  return out;
}

Matrix sqrt_psd(const PsdSplit& s) {
  const Eigen::VectorXd root = s.range_values.cwiseSqrt();
  return s.range_vectors * root.cast<Complex>().asDiagonal() * s.range_vectors.adjoint();
}

Matrix pinv_sqrt_psd(const PsdSplit& s) {
  const Eigen::VectorXd root = s.range_values.cwiseSqrt().cwiseInverse();
  return s.range_vectors * root.cast<Complex>().asDiagonal() * s.range_vectors.adjoint();
}

}  // namespace

Complex SesquiForm::operator()(const Vector& h, const Vector& k) const {
  const Vector ch = domain.basis().adjoint() * h;
  const Vector ck = domain.basis().adjoint() * k;
  return ck.dot(matrix * ch);
}

SesquiForm SesquiForm::real_part() const { return {domain, hermitian_part(matrix)}; }

Matrix basis_change(const Subspace& source, const Subspace& target, double max_residual) {
  if (source.ambient_dim() != target.ambient_dim()) throw DimensionMismatch("basis_change: ambient dimensions differ");
  const Matrix c = source.basis().adjoint() * target.basis();
  const double res = source.residual(target.basis());
  if (res > max_residual) {
    throw PreconditionError("subspace is not contained in the form domain (residual " + std::to_string(res) + ")");
  }
  return c;
}

SesquiForm restrict_form(const SesquiForm& t, const Subspace& l, double max_residual) {
  const Matrix c = basis_change(t.domain, l, max_residual);
  return {l, c.adjoint() * t.matrix * c};
}

double form_distance(const SesquiForm& a, const SesquiForm& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("form_distance: ambient dimensions differ");
  if (a.domain.dim() != b.domain.dim()) return std::numeric_limits<double>::infinity();
  const double g = gap(a.domain, b.domain);
  if (a.domain.dim() == 0) return g;
  const Matrix c = a.domain.basis().adjoint() * b.domain.basis();
  const double diff = (c.adjoint() * a.matrix * c - b.matrix).cwiseAbs().maxCoeff();
  return std::max(g, diff);
}

bool forms_equal(const SesquiForm& a, const SesquiForm& b, const Tolerance& tol) {
  return form_distance(a, b) <= tol.gap_eq;
}

SectorReport matrix_sectoriality(const Matrix& m, const Tolerance& tol) {
  SectorReport report;
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix_sectoriality: matrix is not square");
  if (m.rows() == 0) {
    report.is_sectorial = true;
    report.tan_min = 0.0;
    return report;
  }
  const PsdSplit real = split_psd(hermitian_part(m), tol);
  if (real.min_eigenvalue < -real.threshold) return report;
  const Matrix imag = skew_part(m);
  if (real.kernel_vectors.cols() > 0 && spectral_norm(imag * real.kernel_vectors) > real.threshold) return report;
  report.is_sectorial = true;
  if (real.range_vectors.cols() == 0) {
    report.tan_min = 0.0;
    return report;
  }
  // Generalized eigenvalues of (Im M, Re M) on ran Re M.
  const Eigen::VectorXd scale = real.range_values.cwiseSqrt().cwiseInverse();
  const Matrix c = scale.cast<Complex>().asDiagonal() * (real.range_vectors.adjoint() * imag * real.range_vectors) *
                   scale.cast<Complex>().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(c), Eigen::EigenvaluesOnly);
  report.tan_min = eig.eigenvalues().cwiseAbs().maxCoeff();
  return report;
}

SectorReport sectoriality(const Relation& r, const Tolerance& tol) {
  if (!r.is_endo()) {
    throw DimensionMismatch("sectoriality: relation " + std::to_string(r.dim_from()) + " -> " +
                            std::to_string(r.dim_to()) + " is not square");
  }
  const Matrix m = r.domain_block().adjoint() * r.range_block();
  SectorReport report = matrix_sectoriality(m, tol);
  report.is_maximal = report.is_sectorial && r.graph().dim() == r.dim_from();
  return report;
}

bool is_sectorial(const Relation& r, const Tolerance& tol) { return sectoriality(r, tol).is_sectorial; }

bool is_maximal_sectorial(const Relation& r, const Tolerance& tol) { return sectoriality(r, tol).is_maximal; }

SesquiForm form_of(const Relation& r, const Tolerance& tol) {
  if (!r.is_endo()) throw DimensionMismatch("form_of: relation is not square");
  const Subspace dom = domain(r, tol);
  const Subspace mul = multivalued_part(r, tol);
  if (dom.dim() > 0 && mul.dim() > 0) {
    const double overlap = spectral_norm(dom.basis().adjoint() * mul.basis());
    if (overlap > tol.gap_eq) {
      throw IllDefinedForm("form_of: mul R is not orthogonal to dom R (overlap " + std::to_string(overlap) + ")");
    }
  }
  if (dom.dim() == 0) return {dom, Matrix(0, 0)};
  // For each domain basis vector phi choose some phi' with (phi, phi') in R by least squares.
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(r.domain_block());
  const Matrix coeffs = cod.solve(dom.basis());
  const Matrix images = r.range_block() * coeffs;
  return {dom, dom.basis().adjoint() * images};
}

Relation relation_of_form(const SesquiForm& t, const Tolerance& tol) {
  if (t.matrix.rows() != t.domain.dim() || t.matrix.cols() != t.domain.dim()) {
    throw DimensionMismatch("relation_of_form: matrix size does not match the domain dimension");
  }
  if (!matrix_sectoriality(t.matrix, tol).is_sectorial) throw NotSectorial("relation_of_form: form is not sectorial");
  const Index n = t.ambient_dim();
  const Index d = t.domain.dim();
  const Subspace perp = complement(t.domain);
  Matrix g = Matrix::Zero(2 * n, n);
  g.topLeftCorner(n, d) = t.domain.basis();
  g.bottomLeftCorner(n, d) = t.domain.basis() * t.matrix;
  g.bottomRightCorner(n, n - d) = perp.basis();
  return Relation(n, n, Subspace::from_columns(g, tol));
}

bool is_nonneg_selfadjoint(const Relation& a, const Tolerance& tol) {
  if (!a.is_endo()) return false;
  if (!is_sectorial(a, tol)) return false;
  return equal(a, adjoint(a), tol);
}

Relation sqrt_nonneg(const Relation& a, const Tolerance& tol) {
  if (!is_nonneg_selfadjoint(a, tol)) throw PreconditionError("sqrt_nonneg: relation is not nonnegative selfadjoint");
  // A = A_s (+) ({0} x mul A) with dom A = (mul A)^perp; the form of A is the matrix of A_s.
  const SesquiForm t = form_of(a, tol);
  const Matrix root = t.domain.dim() ? sqrt_psd(split_psd(t.matrix, tol)) : Matrix(0, 0);
  return relation_of_form({t.domain, root}, tol);
}

MaxSectorialDecomposition decompose_maximal(const Relation& h, const Tolerance& tol) {
  if (!is_maximal_sectorial(h, tol)) throw NotMaximalSectorial("decompose_maximal: relation is not maximal sectorial");
  const SesquiForm t = form_of(h, tol);
  const Index n = h.dim_from();
  const Matrix& d = t.domain.basis();
  const Matrix m_real = hermitian_part(t.matrix);
  const Matrix m_imag = skew_part(t.matrix);

  Relation real_part = relation_of_form({t.domain, m_real}, tol);
  Relation sqrt_real = sqrt_nonneg(real_part, tol);

  Matrix b = Matrix::Zero(n, n);
  Matrix root_op = Matrix::Zero(n, n);
  if (t.domain.dim() > 0) {
    const PsdSplit split = split_psd(m_real, tol);
    const Matrix root = sqrt_psd(split);
    const Matrix root_pinv = pinv_sqrt_psd(split);
    // t = S (I + i B_hat) S with S = sqrt(Re t): minimal-norm Hermitian solution on ran S.
    const Matrix b_hat = hermitian_part(root_pinv * m_imag * root_pinv);
    b = d * b_hat * d.adjoint();
    root_op = d * root * d.adjoint();
    // Zero B on ker H_r (+) mul H_r = (D * ran S)^perp.
    const Matrix keep = d * split.range_vectors;
    const Matrix p = keep * keep.adjoint();
    b = hermitian_part(p * b * p);
  }
  return {std::move(real_part), std::move(sqrt_real), std::move(b), std::move(root_op)};
}

Relation recompose(const MaxSectorialDecomposition& d, const Tolerance& tol) {
  const Relation c = Relation::from_matrix(one_plus_i(d.b));
  return compose(d.sqrt_real, compose(c, d.sqrt_real, tol), tol);
}

}  // namespace relab
