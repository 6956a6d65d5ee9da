#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lipdisc/expr.hpp"
#include "lipdisc/linalg.hpp"

namespace lipdisc {

// Axis-aligned box {x : lower <= x <= upper}. An empty box (dimension 0) is
// the input box of a system without inputs.
struct BoxRegion {
  Vector lower;
  Vector upper;

  std::size_t dim() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x, double slack = 0.0) const;
  Vector center() const;
  double width(std::size_t i) const { return upper[i] - lower[i]; }

  // Throws SpecError naming `path` when bounds are inconsistent.
  void validate(const std::string& path) const;
};

// Continuous plant  x' = A x + f(x, u),  y = C x  with a region of
// interest D, an input box U and a sampling time T.
//
// Immutable after create(). Symbolic Jacobian and second-derivative
// expressions are built once at construction.
class SystemSpec {
 public:
  // Validates dimensions, finiteness, box consistency and variable indices.
  // Throws SpecError with a path such as "$.A" or "$.f[1]".
  static SystemSpec create(std::string name, Matrix a, Matrix c, std::vector<Expression> f,
                           BoxRegion region, BoxRegion input_region, double sampling_time);

  const std::string& name() const noexcept { return name_; }
  std::size_t state_dim() const noexcept { return a_.rows(); }
  std::size_t input_dim() const noexcept { return input_region_.dim(); }
  std::size_t output_dim() const noexcept { return c_.rows(); }

  const Matrix& a() const noexcept { return a_; }
  const Matrix& c() const noexcept { return c_; }
  const std::vector<Expression>& f() const noexcept { return f_; }
  const BoxRegion& region() const noexcept { return region_; }
  const BoxRegion& input_region() const noexcept { return input_region_; }
  double sampling_time() const noexcept { return t_; }

  // True when every component of f is the constant 0.
  bool linear() const noexcept { return linear_; }

  // Non-fatal findings from create(), e.g. a region that excludes the origin.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  // Same system with a different sampling time.
  SystemSpec with_sampling_time(double t) const;
  // Same system on a different region (used for nested-region studies).
  SystemSpec with_region(BoxRegion region) const;

  Vector eval_f(std::span<const double> x, std::span<const double> u) const;
  // (i, j) = d f_i / d x_j
  Matrix jacobian(std::span<const double> x, std::span<const double> u) const;
  // (i, j, k) = d^2 f_i / d x_j d x_k
  Tensor3 second_derivative(std::span<const double> x, std::span<const double> u) const;

  const Expression& jacobian_expr(std::size_t i, std::size_t j) const {
    return jacobian_[i * state_dim() + j];
  }
  const Expression& second_derivative_expr(std::size_t i, std::size_t j, std::size_t k) const {
    const std::size_t n = state_dim();
    return hessian_[(i * n + j) * n + k];
  }

 private:
  SystemSpec() = default;
  void check_dims(std::span<const double> x, std::span<const double> u) const;

  std::string name_;
  Matrix a_;
  Matrix c_;
  std::vector<Expression> f_;
  BoxRegion region_;
  BoxRegion input_region_;
  double t_ = 0.0;
  bool linear_ = true;
  std::vector<Expression> jacobian_;
  std::vector<Expression> hessian_;
  std::vector<std::string> warnings_;
};

}  // namespace lipdisc
