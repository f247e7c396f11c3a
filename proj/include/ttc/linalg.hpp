#pragma once

// SVD, singular value thresholding, nuclear norm and pseudoinverse.
//
// The SVD is a one-sided (Hestenes) Jacobi iteration run on the thinner side
// of the matrix. Tall inputs are first reduced to their square R factor with a
// Householder QR, so the rotations always act on a min(m,n)-square block.

#include <cstddef>

#include <Eigen/Core>

#include "ttc/tensor.hpp"

namespace ttc {

using Vector = Eigen::VectorXd;

// Singular values below this fraction of sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-12;

struct SvdFactors {
  Matrix u;      // m x r, orthonormal columns
  Vector sigma;  // r, descending, nonnegative
  Matrix v;      // n x r, orthonormal columns
};

// Thin SVD with r = min(m, n). Throws NumericError on non-finite input.
SvdFactors svd(const Matrix& m);
// Singular values only; skips accumulating the rotations.
Vector singular_values(const Matrix& m);

struct Shrinkage {
  Matrix value;
  double nuclear_norm = 0.0;  // sum of the shrunk singular values
  std::size_t rank = 0;       // number of singular values above gamma
};

// Proximal map of gamma * ||.||_*: U diag(max(sigma - gamma, 0)) V^T.
Matrix svt(const Matrix& m, double gamma);
Shrinkage svt_detailed(const Matrix& m, double gamma);

double nuclear_norm(const Matrix& m);

// Moore-Penrose pseudoinverse; singular values below tol * sigma_max are dropped.
Matrix pinv(const Matrix& m, double tol = kRankTolerance);

// Number of singular values above tol * sigma_max (0 for the zero matrix).
std::size_t numerical_rank(const Matrix& m, double tol = kRankTolerance);
std::size_t numerical_rank(const Vector& sigma, double tol);

}  // namespace ttc
