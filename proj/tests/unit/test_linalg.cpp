#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "lipdisc/error.hpp"
#include "lipdisc/linalg.hpp"

namespace lipdisc {
namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

double max_abs_diff(const Matrix& a, const Eigen::MatrixXd& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

TEST(SingularValue, Examples) {
  EXPECT_NEAR(max_singular_value(Matrix::identity(2)), 1.0, 1e-15);
  EXPECT_NEAR(max_singular_value(Matrix{{2, 0}, {0, 3}}), 3.0, 1e-14);
  EXPECT_NEAR(max_singular_value(Matrix{{0, 1}, {0, -0.5}}), 1.118033988749895, 1e-14);
  EXPECT_EQ(max_singular_value(Matrix(3, 3)), 0.0);
}

TEST(SingularValue, MatchesEigenSvd) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 6;
    const std::size_t c = 1 + rng() % 6;
    const Matrix a = random_matrix(rng, r, c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
    const double want = svd.singularValues()(0);
    EXPECT_NEAR(max_singular_value(a), want, 1e-9 * want) << r << "x" << c;
  }
}

TEST(SingularValue, TransposeInvariant) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6);
    const double s = max_singular_value(a);
    EXPECT_NEAR(max_singular_value(a.transpose()), s, 1e-9 * s);
  }
}

TEST(SingularValue, AbsoluteHomogeneity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> alpha(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6);
    const double k = alpha(rng);
    const double want = std::abs(k) * max_singular_value(a);
    EXPECT_NEAR(max_singular_value(k * a), want, 1e-9 * want + 1e-300);
  }
}

TEST(SingularValue, RepeatedTopSingularValue) {
  // Rotation: both singular values are 2; power iteration must still settle.
  const double c = std::cos(0.7) * 2, s = std::sin(0.7) * 2;
  EXPECT_NEAR(max_singular_value(Matrix{{c, -s}, {s, c}}), 2.0, 1e-12);
}

TEST(Expm, ZeroIsIdentity) {
  for (double t : {0.0, 0.5, 10.0}) EXPECT_EQ(expm(Matrix(3, 3), t), Matrix::identity(3));
}

TEST(Expm, RotationGenerator) {
  for (double t : {0.1, 1.0, 3.0, 10.0}) {
    const Matrix e = expm(Matrix{{0, 1}, {-1, 0}}, t);
    EXPECT_NEAR(e(0, 0), std::cos(t), 1e-13);
    EXPECT_NEAR(e(0, 1), std::sin(t), 1e-13);
    EXPECT_NEAR(e(1, 0), -std::sin(t), 1e-13);
    EXPECT_NEAR(e(1, 1), std::cos(t), 1e-13);
  }
}

TEST(Expm, Diagonal) {
  const Matrix e = expm(Matrix{{0.5, 0}, {0, -2}}, 1.0);
  EXPECT_NEAR(e(0, 0), std::exp(0.5), 1e-14);
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
  EXPECT_EQ(e(0, 1), 0.0);
  EXPECT_EQ(e(1, 0), 0.0);
}

TEST(Expm, MatchesEigen) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const Matrix a = random_matrix(rng, n, n, 2.0);
    const Eigen::MatrixXd want = (to_eigen(a) * 0.7).exp();
    EXPECT_LE(max_abs_diff(expm(a, 0.7), want), 1e-10 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  }
}

TEST(Expm, Semigroup) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> tdist(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const Matrix a = random_matrix(rng, n, n);
    const double t1 = tdist(rng), t2 = tdist(rng);
    const Matrix lhs = expm(a, t1) * expm(a, t2);
    const Matrix rhs = expm(a, t1 + t2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(lhs(i, j), rhs(i, j), 1e-9);
  }
}

TEST(Expm, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(expm(Matrix(2, 3), 1.0), ArgumentError);
  EXPECT_THROW(expm(Matrix::identity(2), std::nan("")), ArgumentError);
}

TEST(TruncatedExponential, Orders) {
  const Matrix a{{0, 1}, {-2, -3}};
  const double t = 0.1;
  const Matrix a2 = a * a;
  const Matrix a3 = a2 * a;
  const Matrix i = Matrix::identity(2);
  const Matrix o1 = i + t * a;
  const Matrix o2 = o1 + (t * t / 2) * a2;
  const Matrix o3 = o2 + (t * t * t / 6) * a3;
  const Matrix want[] = {o1, o2, o3};
  for (int k = 1; k <= 3; ++k) {
    const Matrix got = truncated_exponential(a, t, k);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(got(r, c), want[k - 1](r, c), 1e-15);
  }
}

TEST(Tensor, NormSurrogateExamples) {
  EXPECT_EQ(tensor3_norm_surrogate(Tensor3(2, 2, 2)), 0.0);
  Tensor3 single(2, 3, 2);
  single(1, 2, 0) = 5.0;
  EXPECT_NEAR(tensor3_norm_surrogate(single), 5.0, 1e-14);
  Tensor3 scalar(1, 1, 1);
  scalar(0, 0, 0) = 12.0;
  EXPECT_NEAR(tensor3_norm_surrogate(scalar), 12.0, 1e-14);
}

TEST(Tensor, ContractionConvention) {
  Tensor3 t(2, 2, 2);
  double v = 1.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) t(i, j, k) = v++;
  const Vector p{1.0, -2.0}, q{0.5, 3.0};
  const Vector got = t.contract(p, q);
  for (std::size_t i = 0; i < 2; ++i) {
    double want = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) want += t(i, j, k) * p[j] * q[k];
    EXPECT_DOUBLE_EQ(got[i], want);
  }
  const Matrix m = t.contract_last(q);
  const Vector via_matrix = m * p;
  EXPECT_DOUBLE_EQ(via_matrix[0], got[0]);
  EXPECT_DOUBLE_EQ(via_matrix[1], got[1]);
}

TEST(Tensor, SurrogateBoundsBilinearNorm) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    Tensor3 t(n, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) t(i, j, k) = dist(rng);
    const double surrogate = tensor3_norm_surrogate(t);
    double sup = 0.0;
    for (int s = 0; s < 1000; ++s) {
      Vector y(n), z(n);
      for (auto& e : y) e = dist(rng);
      for (auto& e : z) e = dist(rng);
      const double ny = norm2(y), nz = norm2(z);
      for (auto& e : y) e /= ny;
      for (auto& e : z) e /= nz;
      sup = std::max(sup, norm2(t.contract(y, z)));
    }
    EXPECT_GE(surrogate, sup * (1 - 1e-12));
  }
}

TEST(Vectors, Norm2AvoidsOverflow) {
  const Vector big{3e200, 4e200};
  EXPECT_NEAR(norm2(big) / 5e200, 1.0, 1e-15);
  EXPECT_EQ(norm2(Vector{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(dot(Vector{1, 2, 3}, Vector{4, 5, 6}), 32.0);
}

}  // namespace
}  // namespace lipdisc
