#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lipdisc/linalg.hpp"
#include "lipdisc/system.hpp"

namespace lipdisc {

// How the order-3 nonlinear term is assembled.
//
// kTaylorLie: the third Lie derivative of x' = Ax + f with u held constant,
//   x''' - A^3 x = A (A f + J v) + J w + H[v, v],
//   v = A x + f, w = (A + J) v, H[p, q]_i = sum_jk H_ijk p_j q_k.
//
// kDisplay: the published closed-form display, term by term,
//   2 A^2 J x + 2 A H[x, x] + A H[f, f] + 2 A J f + 2 H[f, f] + J^2 f,
//   reading "H v" as H[v, v]. Kept for auditing; it is not a third-order
//   accurate truncation in general.
enum class Order3Form { kTaylorLie, kDisplay };

std::string_view to_string(Order3Form form);
std::optional<Order3Form> order3_form_from_string(std::string_view text);

struct TaylorOptions {
  std::optional<double> sampling_time;  // defaults to the spec's T
  Order3Form order3_form = Order3Form::kTaylorLie;
};

// Zero-order-hold Taylor map  x+ = A_d x + F_T(x, u)  of order 1, 2 or 3.
//
//   A_d = I + AT + ... + (AT)^k / k!
//   F_T = T f                                                   (k >= 1)
//       + T^2/2 (A f + J A x + J f)                             (k >= 2)
//       + T^3/6 (order-3 term, see Order3Form)                  (k == 3)
//
// J = df/dx(x, u) and H = d2f/dx2(x, u). Immutable; step() is pure.
class DiscreteModel {
 public:
  int order() const noexcept { return order_; }
  double sampling_time() const noexcept { return t_; }
  Order3Form order3_form() const noexcept { return form_; }
  const Matrix& a_d() const noexcept { return a_d_; }
  const SystemSpec& spec() const noexcept { return *spec_; }

  // F_T(x, u), the nonlinear part only.
  Vector nonlinear(std::span<const double> x, std::span<const double> u) const;
  // A_d x + F_T(x, u).
  Vector step(std::span<const double> x, std::span<const double> u) const;

 private:
  friend DiscreteModel build_taylor_model(const SystemSpec&, int, const TaylorOptions&);
  DiscreteModel() = default;

  std::shared_ptr<const SystemSpec> spec_;
  int order_ = 1;
  double t_ = 0.0;
  Order3Form form_ = Order3Form::kTaylorLie;
  Matrix a_d_;
};

// Throws ArgumentError for orders other than 1, 2, 3.
DiscreteModel build_taylor_model(const SystemSpec& spec, int order,
                                 const TaylorOptions& options = {});

// x(T) for x' = Ax + f(x, u) with u held, by adaptive Dormand-Prince 5(4).
// tol must lie in [1e-13, 1e-6]. Throws NumericalError on step underflow.
Vector exact_step(const SystemSpec& spec, std::span<const double> x, std::span<const double> u,
                  double tol, std::optional<double> sampling_time = std::nullopt);

using Stepper = std::function<Vector(std::span<const double> x, std::span<const double> u)>;

struct Trajectory {
  std::vector<Vector> states;   // x_0 .. x_N
  std::vector<Vector> outputs;  // y_k = C x_k
  // First k with x_k outside D, if any. Bound constants are only valid
  // inside D, so this is reported rather than treated as an error.
  std::optional<std::size_t> first_exit;
};

// Iterates `step` over the input sequence (N = inputs.size() steps).
Trajectory simulate(const Stepper& step, const SystemSpec& spec, std::span<const double> x0,
                    std::span<const Vector> inputs);

}  // namespace lipdisc
