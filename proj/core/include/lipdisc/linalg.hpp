#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lipdisc {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);

// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  Matrix transpose() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> v);
inline Vector operator*(const Matrix& a, const Vector& v) {
  return a * std::span<const double>(v);
}

// Dense d1 x d2 x d3 array. For a vector field f, the second-derivative
// tensor has entry (i, j, k) = d^2 f_i / dx_j dx_k.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t d1, std::size_t d2, std::size_t d3, double fill = 0.0);

  std::size_t dim1() const noexcept { return d1_; }
  std::size_t dim2() const noexcept { return d2_; }
  std::size_t dim3() const noexcept { return d3_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * d2_ + j) * d3_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * d2_ + j) * d3_ + k];
  }
  std::span<const double> data() const noexcept { return data_; }

  // [sum_k T(i,j,k) v_k]_(i,j): contracts the last slot.
  Matrix contract_last(std::span<const double> v) const;
  // [sum_jk T(i,j,k) v_j w_k]_i.
  Vector contract(std::span<const double> v, std::span<const double> w) const;
  // d1 x (d2*d3) matrix with column index j*d3 + k.
  Matrix unfold_mode1() const;

 private:
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::size_t d3_ = 0;
  std::vector<double> data_;
};

// Induced 2-norm (largest singular value). Power iteration on the smaller
// Gram matrix, deterministic start vector, stops when the Rayleigh quotient
// moves by less than 1e-14 (relative). Throws NumericalError after 10000
// iterations without convergence.
double max_singular_value(const Matrix& a);

// exp(A t) by scaling and squaring around a truncated Taylor series.
Matrix expm(const Matrix& a, double t);

// I + (At) + (At)^2/2! + ... + (At)^order/order!
Matrix truncated_exponential(const Matrix& a, double t, int order);

// Induced 2-norm of the mode-1 unfolding. This upper-bounds
// sup_{|y|=|z|=1} |T(., y, z)|, so bounds built on it stay valid.
double tensor3_norm_surrogate(const Tensor3& t);

}  // namespace lipdisc
