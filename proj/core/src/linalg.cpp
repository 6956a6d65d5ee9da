#include "lipdisc/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "lipdisc/error.hpp"

namespace lipdisc {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled to avoid overflow for large entries.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : a) {
    const double r = v / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

Vector operator+(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(double s, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  assert(data_.size() == rows_ * cols_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    assert(r.size() == cols_);
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> v) {
  assert(a.cols() == v.size());
  Vector r(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) r[i] = dot(a.row(i), v);
  return r;
}

// ---------------------------------------------------------------------------
// Tensor3

Tensor3::Tensor3(std::size_t d1, std::size_t d2, std::size_t d3, double fill)
    : d1_(d1), d2_(d2), d3_(d3), data_(d1 * d2 * d3, fill) {}

Matrix Tensor3::contract_last(std::span<const double> v) const {
  assert(v.size() == d3_);
  Matrix m(d1_, d2_);
  for (std::size_t i = 0; i < d1_; ++i)
    for (std::size_t j = 0; j < d2_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d3_; ++k) s += (*this)(i, j, k) * v[k];
      m(i, j) = s;
    }
  return m;
}

Vector Tensor3::contract(std::span<const double> v, std::span<const double> w) const {
  assert(v.size() == d2_ && w.size() == d3_);
  Vector r(d1_, 0.0);
  for (std::size_t i = 0; i < d1_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d2_; ++j) {
      if (v[j] == 0.0) continue;
      double inner = 0.0;
      for (std::size_t k = 0; k < d3_; ++k) inner += (*this)(i, j, k) * w[k];
      s += v[j] * inner;
    }
    r[i] = s;
  }
  return r;
}

Matrix Tensor3::unfold_mode1() const { return Matrix(d1_, d2_ * d3_, data_); }

// ---------------------------------------------------------------------------
// Norms

namespace {

constexpr int kPowerIterationCap = 10'000;
constexpr double kRayleighTol = 1e-14;

// Largest eigenvalue of a symmetric positive semidefinite matrix.
double dominant_psd_eigenvalue(const Matrix& g) {
  const std::size_t n = g.rows();
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1.0 / static_cast<double>(i + 1);
  double nv = norm2(v);
  for (double& e : v) e /= nv;

  double lambda = dot(v, g * v);
  for (int iter = 0; iter < kPowerIterationCap; ++iter) {
    Vector w = g * v;
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    const double next = dot(v, g * v);
    if (std::fabs(next - lambda) <= kRayleighTol * std::max(1.0, std::fabs(next))) {
      return next;
    }
    lambda = next;
  }
  throw NumericalError("max_singular_value: power iteration did not converge after " +
                       std::to_string(kPowerIterationCap) + " iterations");
}

}  // namespace

double max_singular_value(const Matrix& a) {
  if (a.empty()) throw ArgumentError("max_singular_value: empty matrix");
  if (!a.all_finite()) throw ArgumentError("max_singular_value: non-finite entry");

  // Scale to unit max-abs entry so the relative stopping rule is meaningful.
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return 0.0;
  const Matrix s = (1.0 / scale) * a;
  const Matrix st = s.transpose();
  const Matrix gram = s.rows() < s.cols() ? s * st : st * s;
  return scale * std::sqrt(std::max(0.0, dominant_psd_eigenvalue(gram)));
}

Matrix truncated_exponential(const Matrix& a, double t, int order) {
  assert(a.square());
  const std::size_t n = a.rows();
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= order; ++k) {
    term = (t / static_cast<double>(k)) * (term * a);
    result += term;
  }
  return result;
}

Matrix expm(const Matrix& a, double t) {
  if (!a.square()) throw ArgumentError("expm: matrix must be square");
  const std::size_t n = a.rows();
  Matrix at = t * a;
  if (!at.all_finite()) throw ArgumentError("expm: non-finite entry in A t");

  // Infinity norm drives the scaling; scale until it is at most 1/2.
  double norm_inf = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (double v : at.row(i)) row += std::fabs(v);
    norm_inf = std::max(norm_inf, row);
  }
  int squarings = 0;
  if (norm_inf > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm_inf / 0.5)));
  at *= std::ldexp(1.0, -squarings);

  // Taylor series; with |At| <= 1/2, 20 terms reach far below 1e-16.
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 20; ++k) {
    term = (1.0 / static_cast<double>(k)) * (term * at);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

double tensor3_norm_surrogate(const Tensor3& t) {
  if (t.data().empty()) return 0.0;
  return max_singular_value(t.unfold_mode1());
}

}  // namespace lipdisc
