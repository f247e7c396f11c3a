#include "ttc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/QR>

namespace ttc {
namespace {

constexpr int kMaxSweeps = 80;

// Orthogonalize the columns of `w` in place by plane rotations. When `v` is
// non-null the same rotations are accumulated into it.
void jacobi_sweeps(Matrix& w, Matrix* v) {
  const Eigen::Index n = w.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        if (v != nullptr) {
          for (Eigen::Index i = 0; i < v->rows(); ++i) {
            const double vp = (*v)(i, p);
            const double vq = (*v)(i, q);
            (*v)(i, p) = c * vp - s * vq;
            (*v)(i, q) = s * vp + c * vq;
          }
        }
      }
    }
    if (!rotated) return;
  }
}

// Extend the orthonormal columns of `u` flagged in `valid` to a full
// orthonormal set, filling the unflagged columns.
void complete_basis(Matrix& u, const std::vector<bool>& valid) {
  const Eigen::Index m = u.rows();
  Eigen::Index candidate = 0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (valid[static_cast<std::size_t>(j)]) continue;
    while (candidate < m) {
      Vector e = Vector::Unit(m, candidate++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < u.cols(); ++i) {
          if (i == j || (!valid[static_cast<std::size_t>(i)] && i > j)) continue;
          e -= u.col(i).dot(e) * u.col(i);
        }
      }
      const double norm = e.norm();
      if (norm > 1e-8) {
        u.col(j) = e / norm;
        break;
      }
    }
  }
}

// SVD of a matrix with rows >= cols.
SvdFactors svd_tall(const Matrix& a, bool want_vectors) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Matrix q;
  Matrix w;
  if (m > n) {
    Eigen::HouseholderQR<Matrix> qr(a);
    w = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    if (want_vectors) q = qr.householderQ() * Matrix::Identity(m, n);
  } else {
    w = a;
  }
  Matrix v;
  if (want_vectors) v = Matrix::Identity(n, n);
  jacobi_sweeps(w, want_vectors ? &v : nullptr);

  Vector norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms(j) = w.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  SvdFactors out;
  out.sigma.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) out.sigma(j) = norms(order[static_cast<std::size_t>(j)]);
  if (!want_vectors) return out;

  Matrix uw(w.rows(), n);
  out.v.resize(n, n);
  std::vector<bool> valid(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.v.col(j) = v.col(src);
    if (out.sigma(j) > 0.0 && std::isfinite(1.0 / out.sigma(j))) {
      uw.col(j) = w.col(src) / out.sigma(j);
      valid[static_cast<std::size_t>(j)] = true;
    } else {
      uw.col(j).setZero();
    }
  }
  complete_basis(uw, valid);
  out.u = m > n ? Matrix(q * uw) : uw;
  return out;
}

void require_finite(const Matrix& m) {
  if (!m.allFinite()) throw NumericError("matrix has non-finite entries");
}

}  // namespace

SvdFactors svd(const Matrix& m) {
  require_finite(m);
  if (m.rows() >= m.cols()) return svd_tall(m, true);
  SvdFactors t = svd_tall(m.transpose(), true);
  std::swap(t.u, t.v);
  return t;
}

Vector singular_values(const Matrix& m) {
  require_finite(m);
  if (m.rows() >= m.cols()) return svd_tall(m, false).sigma;
  return svd_tall(m.transpose(), false).sigma;
}

Shrinkage svt_detailed(const Matrix& m, double gamma) {
  if (!(gamma >= 0.0)) throw ParameterError("svt: threshold must be nonnegative");
  const SvdFactors f = svd(m);
  Shrinkage out;
  Eigen::Index keep = 0;
  while (keep < f.sigma.size() && f.sigma(keep) > gamma) ++keep;
  out.rank = static_cast<std::size_t>(keep);
  const Vector shrunk = f.sigma.head(keep).array() - gamma;
  out.nuclear_norm = shrunk.sum();
  out.value = f.u.leftCols(keep) * shrunk.asDiagonal() * f.v.leftCols(keep).transpose();
  return out;
}

Matrix svt(const Matrix& m, double gamma) { return svt_detailed(m, gamma).value; }

double nuclear_norm(const Matrix& m) { return singular_values(m).sum(); }

Matrix pinv(const Matrix& m, double tol) {
  if (!(tol >= 0.0)) throw ParameterError("pinv: tolerance must be nonnegative");
  const SvdFactors f = svd(m);
  const double cutoff = f.sigma.size() > 0 ? tol * f.sigma(0) : 0.0;
  Vector inv = Vector::Zero(f.sigma.size());
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > cutoff && f.sigma(i) > 0.0) inv(i) = 1.0 / f.sigma(i);
  }
  return f.v * inv.asDiagonal() * f.u.transpose();
}

std::size_t numerical_rank(const Vector& sigma, double tol) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = tol * sigma.maxCoeff();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++r;
  }
  return r;
}

std::size_t numerical_rank(const Matrix& m, double tol) { return numerical_rank(singular_values(m), tol); }

}  // namespace ttc
