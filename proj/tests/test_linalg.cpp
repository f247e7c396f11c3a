#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "ttc/linalg.hpp"

using namespace ttc;

namespace {

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

double orthonormality_error(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

Matrix low_rank(Eigen::Index m, Eigen::Index n, Eigen::Index r, std::mt19937_64& gen) {
  return oracle::random_matrix(m, r, gen) * oracle::random_matrix(r, n, gen);
}

}  // namespace

TEST_CASE("svd small cases") {
  Matrix d(2, 2);
  d << 3, 0, 0, 1;
  const SvdFactors f = svd(d);
  CHECK(f.sigma(0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(f.sigma(1) == doctest::Approx(1.0).epsilon(1e-15));

  const SvdFactors z = svd(Matrix::Zero(4, 3));
  CHECK(z.sigma.size() == 3);
  CHECK(z.sigma.cwiseAbs().maxCoeff() == 0.0);
  CHECK(orthonormality_error(z.u) < 1e-12);
  CHECK(orthonormality_error(z.v) < 1e-12);

  Matrix bad = Matrix::Ones(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(bad), NumericError);
}

TEST_CASE("svd matches the Gram-matrix eigenvalue oracle") {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 20; ++t) {
    const Matrix m = oracle::random_matrix(5, 3, gen);
    const Vector s = svd(m).sigma;
    const Vector ref = oracle::gram_singular_values(m);
    CHECK((s - ref).norm() <= 1e-10 * ref(0));
  }
}

TEST_CASE("property: svd reconstructs with orthonormal factors and sorted sigma") {
  std::mt19937_64 gen(32);
  const Eigen::Index shapes[][2] = {{1, 1}, {1, 7}, {7, 1}, {6, 6}, {40, 9}, {9, 40}, {120, 30}, {30, 200}};
  for (const auto& s : shapes) {
    for (int rank_deficient = 0; rank_deficient < 2; ++rank_deficient) {
      const Matrix m = rank_deficient && std::min(s[0], s[1]) > 2 ? low_rank(s[0], s[1], 2, gen)
                                                                   : oracle::random_matrix(s[0], s[1], gen);
      const SvdFactors f = svd(m);
      const Eigen::Index r = std::min(s[0], s[1]);
      REQUIRE(f.sigma.size() == r);
      REQUIRE(f.u.rows() == s[0]);
      REQUIRE(f.v.rows() == s[1]);
      CHECK(rel_err(f.u * f.sigma.asDiagonal() * f.v.transpose(), m) <= 1e-10);
      CHECK(orthonormality_error(f.u) <= 1e-10);
      CHECK(orthonormality_error(f.v) <= 1e-10);
      for (Eigen::Index i = 1; i < r; ++i) CHECK(f.sigma(i) <= f.sigma(i - 1));
      CHECK(f.sigma.minCoeff() >= 0.0);
      CHECK((singular_values(m) - f.sigma).norm() <= 1e-12 * f.sigma(0));
    }
  }
}

TEST_CASE("svt examples") {
  std::mt19937_64 gen(33);
  const Matrix m = oracle::random_matrix(5, 4, gen);
  CHECK(rel_err(svt(m, 0.0), m) <= 1e-10);

  Matrix d(2, 2);
  d << 3, 0, 0, 1;
  const Matrix s = svt(d, 2.0);
  CHECK(s(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s(0, 1)) < 1e-15);
  CHECK(std::abs(s(1, 0)) < 1e-15);
  CHECK(std::abs(s(1, 1)) < 1e-15);

  CHECK_THROWS_AS(svt(m, -1.0), ParameterError);
}

TEST_CASE("svt beats random perturbations of its output") {
  std::mt19937_64 gen(34);
  std::normal_distribution<double> n(0.0, 1.0);
  const Matrix m = oracle::random_matrix(4, 4, gen);
  const double gamma = 0.5;
  const Matrix x = svt(m, gamma);
  const double best = oracle::prox_objective(x, m, gamma);
  for (int p = 0; p < 1000; ++p) {
    const double scale = std::pow(10.0, -3.0 + 3.0 * (p % 4) / 3.0);
    const Matrix y = x + scale * oracle::random_matrix(4, 4, gen);
    CHECK(best <= oracle::prox_objective(y, m, gamma) + 1e-12);
  }
}

TEST_CASE("property: svt shrinkage, rank and nonexpansiveness") {
  std::mt19937_64 gen(35);
  std::uniform_real_distribution<double> g(0.0, 3.0);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(gen() % 9);
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(gen() % 9);
    const Matrix a = oracle::random_matrix(rows, cols, gen);
    const Matrix b = a + 0.3 * oracle::random_matrix(rows, cols, gen);
    const double gamma = g(gen);

    const Vector sigma = singular_values(a);
    double expect = 0.0;
    std::size_t above = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      expect += std::max(sigma(i) - gamma, 0.0);
      above += sigma(i) > gamma;
    }
    const Shrinkage s = svt_detailed(a, gamma);
    CHECK(std::abs(nuclear_norm(s.value) - expect) <= 1e-10 * std::max(1.0, expect));
    CHECK(std::abs(s.nuclear_norm - expect) <= 1e-10 * std::max(1.0, expect));
    CHECK(s.rank == above);
    CHECK(numerical_rank(s.value) == above);
    CHECK((svt(a, gamma) - svt(b, gamma)).norm() <= (a - b).norm() * (1 + 1e-12));
  }
}

TEST_CASE("nuclear norm") {
  CHECK(nuclear_norm(Matrix::Identity(3, 3)) == doctest::Approx(3.0).epsilon(1e-14));
  std::mt19937_64 gen(36);
  Vector u = oracle::random_matrix(5, 1, gen);
  Vector v = oracle::random_matrix(4, 1, gen);
  u.normalize();
  v.normalize();
  CHECK(nuclear_norm(u * v.transpose()) == doctest::Approx(1.0).epsilon(1e-13));
  const Matrix m = oracle::random_matrix(6, 4, gen);
  CHECK(nuclear_norm(m) == doctest::Approx(oracle::gram_singular_values(m).sum()).epsilon(1e-12));
}

TEST_CASE("pinv") {
  Matrix a(2, 2);
  a << 4, 7, 2, 6;
  CHECK(rel_err(pinv(a), a.inverse()) <= 1e-12);

  const Matrix z = pinv(Matrix::Zero(3, 2));
  CHECK(z.rows() == 2);
  CHECK(z.cols() == 3);
  CHECK(z.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 gen(37);
  for (int t = 0; t < 10; ++t) {
    // Rank 2 with 4 x 3 shape: Penrose identities.
    const Matrix m = low_rank(4, 3, 2, gen);
    const Matrix p = pinv(m);
    CHECK(rel_err(m * p * m, m) <= 1e-10);
    CHECK(rel_err(p * m * p, p) <= 1e-10);
    CHECK(rel_err((m * p).transpose(), m * p) <= 1e-10);
    CHECK(rel_err((p * m).transpose(), p * m) <= 1e-10);
  }
}

TEST_CASE("property: pinv(pinv(M)) == M for full-rank M") {
  std::mt19937_64 gen(38);
  for (int t = 0; t < 40; ++t) {
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(gen() % 8);
    const Eigen::Index cols = 1 + static_cast<Eigen::Index>(gen() % 8);
    const Matrix m = oracle::random_matrix(rows, cols, gen);
    CHECK(rel_err(pinv(pinv(m)), m) <= 1e-8);
  }
}

TEST_CASE("numerical rank agrees with an independent SVD") {
  std::mt19937_64 gen(39);
  for (Eigen::Index r = 0; r <= 5; ++r) {
    const Matrix m = r == 0 ? Matrix::Zero(12, 9) : low_rank(12, 9, r, gen);
    CHECK(numerical_rank(m) == static_cast<std::size_t>(r));
    CHECK(numerical_rank(m, 1e-9) == oracle::svd_rank(m, 1e-9));
  }
}
