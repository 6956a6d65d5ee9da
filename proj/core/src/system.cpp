#include "lipdisc/system.hpp"

#include <cmath>

#include "lipdisc/error.hpp"

namespace lipdisc {

bool BoxRegion::contains(std::span<const double> x, double slack) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  }
  return true;
}

Vector BoxRegion::center() const {
  Vector c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
  return c;
}

void BoxRegion::validate(const std::string& path) const {
  if (lower.size() != upper.size()) {
    throw SpecError(path, "lower has " + std::to_string(lower.size()) + " entries but upper has " +
                              std::to_string(upper.size()));
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i])) {
      throw SpecError(path + ".lower[" + std::to_string(i) + "]", "bound must be finite");
    }
    if (!std::isfinite(upper[i])) {
      throw SpecError(path + ".upper[" + std::to_string(i) + "]", "bound must be finite");
    }
    if (lower[i] > upper[i]) {
      throw SpecError(path + ".lower[" + std::to_string(i) + "]",
                      "lower bound exceeds upper bound");
    }
  }
}

SystemSpec SystemSpec::create(std::string name, Matrix a, Matrix c, std::vector<Expression> f,
                              BoxRegion region, BoxRegion input_region, double sampling_time) {
  if (a.empty() || !a.square()) throw SpecError("$.A", "must be a non-empty square matrix");
  if (!a.all_finite()) throw SpecError("$.A", "entries must be finite");
  const std::size_t n = a.rows();
  if (c.empty() || c.cols() != n) {
    throw SpecError("$.C", "must have " + std::to_string(n) + " columns");
  }
  if (!c.all_finite()) throw SpecError("$.C", "entries must be finite");
  if (f.size() != n) {
    throw SpecError("$.f", "expected " + std::to_string(n) + " expressions, got " +
                               std::to_string(f.size()));
  }
  region.validate("$.region");
  if (region.dim() != n) {
    throw SpecError("$.region", "dimension " + std::to_string(region.dim()) +
                                    " does not match state dimension " + std::to_string(n));
  }
  input_region.validate("$.input_region");
  if (!(sampling_time > 0.0) || !std::isfinite(sampling_time)) {
    throw SpecError("$.T", "sampling time must be positive and finite");
  }
  const int m = static_cast<int>(input_region.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string path = "$.f[" + std::to_string(i) + "]";
    if (f[i].max_state_index() > static_cast<int>(n)) {
      throw SpecError(path, "uses x" + std::to_string(f[i].max_state_index()) +
                                " but the state dimension is " + std::to_string(n));
    }
    if (f[i].max_input_index() > m) {
      throw SpecError(path, "uses u" + std::to_string(f[i].max_input_index()) +
                                " but the input dimension is " + std::to_string(m));
    }
  }

  SystemSpec s;
  s.name_ = std::move(name);
  s.a_ = std::move(a);
  s.c_ = std::move(c);
  s.f_ = std::move(f);
  s.region_ = std::move(region);
  s.input_region_ = std::move(input_region);
  s.t_ = sampling_time;

  s.linear_ = true;
  for (const auto& e : s.f_) s.linear_ = s.linear_ && e.is_constant(0.0);

  s.jacobian_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s.jacobian_.push_back(differentiate(s.f_[i], Variable::state(static_cast<int>(j))));
  s.hessian_.reserve(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        s.hessian_.push_back(
            differentiate(s.jacobian_[i * n + j], Variable::state(static_cast<int>(k))));

  const Vector origin(n, 0.0);
  if (!s.region_.contains(origin)) {
    s.warnings_.push_back("region does not contain the origin");
  }
  return s;
}

SystemSpec SystemSpec::with_sampling_time(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ArgumentError("sampling time must be positive and finite");
  }
  SystemSpec copy = *this;
  copy.t_ = t;
  return copy;
}

SystemSpec SystemSpec::with_region(BoxRegion region) const {
  region.validate("$.region");
  if (region.dim() != state_dim()) throw SpecError("$.region", "dimension mismatch");
  SystemSpec copy = *this;
  copy.region_ = std::move(region);
  copy.warnings_.clear();
  if (!copy.region_.contains(Vector(state_dim(), 0.0))) {
    copy.warnings_.push_back("region does not contain the origin");
  }
  return copy;
}

void SystemSpec::check_dims(std::span<const double> x, std::span<const double> u) const {
  if (x.size() != state_dim() || u.size() != input_dim()) {
    throw ArgumentError("dimension mismatch: expected x in R^" + std::to_string(state_dim()) +
                        " and u in R^" + std::to_string(input_dim()) + ", got " +
                        std::to_string(x.size()) + " and " + std::to_string(u.size()));
  }
}

Vector SystemSpec::eval_f(std::span<const double> x, std::span<const double> u) const {
  check_dims(x, u);
  Vector out(f_.size());
  for (std::size_t i = 0; i < f_.size(); ++i) out[i] = evaluate(f_[i], x, u);
  return out;
}

Matrix SystemSpec::jacobian(std::span<const double> x, std::span<const double> u) const {
  check_dims(x, u);
  const std::size_t n = state_dim();
  Matrix j(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) j(r, c) = evaluate(jacobian_[r * n + c], x, u);
  return j;
}

Tensor3 SystemSpec::second_derivative(std::span<const double> x,
                                      std::span<const double> u) const {
  check_dims(x, u);
  const std::size_t n = state_dim();
  Tensor3 h(n, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) h(i, j, k) = evaluate(hessian_[(i * n + j) * n + k], x, u);
  return h;
}

}  // namespace lipdisc
