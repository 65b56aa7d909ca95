#include "relab/types.hpp"

#include "relab/errors.hpp"

namespace relab {

void Tolerance::validate() const {
  if (!(rank_rel > 0.0) || !(gap_eq > 0.0)) {
    throw PreconditionError("tolerances must be strictly positive");
  }
}

Matrix one_plus_i(const Matrix& b) {
  return Matrix::Identity(b.rows(), b.cols()) + kI * b;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix skew_part(const Matrix& m) { return (m - m.adjoint()) / (2.0 * kI); }

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace relab
