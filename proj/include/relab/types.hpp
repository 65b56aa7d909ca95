#pragma once

#include <complex>
#include <Eigen/Dense>

namespace relab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Numerical policy shared by every rank decision and every equality test.
//   rank_rel: singular values below rank_rel * max(1, sigma_max) count as zero.
//   gap_eq:   two subspaces are equal when their gap does not exceed gap_eq.
struct Tolerance {
  double rank_rel = 1e-10;
  double gap_eq = 1e-9;

  // Throws PreconditionError unless both values are strictly positive.
  void validate() const;
};

inline const Complex kI{0.0, 1.0};

// I + iB for a Hermitian B.
Matrix one_plus_i(const Matrix& b);

// Hermitian part (M + M^H)/2 and "imaginary" part (M - M^H)/(2i).
Matrix hermitian_part(const Matrix& m);
Matrix skew_part(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol);

// Spectral norm (largest singular value); 0 for empty matrices.
double spectral_norm(const Matrix& m);

}  // namespace relab
