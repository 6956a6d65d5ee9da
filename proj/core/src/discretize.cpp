#include "lipdisc/discretize.hpp"

#include <cmath>
#include <string>

#include "lipdisc/error.hpp"
#include "lipdisc/ode.hpp"

namespace lipdisc {

std::string_view to_string(Order3Form form) {
  return form == Order3Form::kTaylorLie ? "taylor-lie" : "display";
}

std::optional<Order3Form> order3_form_from_string(std::string_view text) {
  if (text == "taylor-lie") return Order3Form::kTaylorLie;
  if (text == "display") return Order3Form::kDisplay;
  return std::nullopt;
}

DiscreteModel build_taylor_model(const SystemSpec& spec, int order, const TaylorOptions& options) {
  if (order < 1 || order > 3) {
    throw ArgumentError("unsupported order " + std::to_string(order) + " (expected 1, 2 or 3)");
  }
  const double t = options.sampling_time.value_or(spec.sampling_time());
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ArgumentError("sampling time must be positive and finite");
  }
  DiscreteModel m;
  m.spec_ = std::make_shared<const SystemSpec>(spec);
  m.order_ = order;
  m.t_ = t;
  m.form_ = options.order3_form;
  m.a_d_ = truncated_exponential(spec.a(), t, order);
  return m;
}

Vector DiscreteModel::nonlinear(std::span<const double> x, std::span<const double> u) const {
  const SystemSpec& s = *spec_;
  const std::size_t n = s.state_dim();
  if (x.size() != n || u.size() != s.input_dim()) {
    throw ArgumentError("dimension mismatch: expected x in R^" + std::to_string(n) +
                        " and u in R^" + std::to_string(s.input_dim()));
  }
  if (s.linear()) return Vector(n, 0.0);

  const Matrix& a = s.a();
  const Vector f = s.eval_f(x, u);
  const double t = t_;
  Vector out = t * f;
  if (order_ == 1) return out;

  const Matrix j = s.jacobian(x, u);
  const Vector ax = a * x;
  const Vector af = a * f;
  const Vector v = ax + f;
  const Vector jv = j * v;  // J A x + J f
  const double c2 = t * t / 2.0;
  for (std::size_t i = 0; i < n; ++i) out[i] += c2 * (af[i] + jv[i]);
  if (order_ == 2) return out;

  const Tensor3 h = s.second_derivative(x, u);
  Vector third;
  if (form_ == Order3Form::kTaylorLie) {
    const Vector w = (a * v) + jv;
    third = (a * (af + jv)) + (j * w) + h.contract(v, v);
  } else {
    const Vector jx = j * x;
    const Vector jf = j * f;
    const Vector hxx = h.contract(x, x);
    const Vector hff = h.contract(f, f);
    third = (2.0 * (a * (a * jx))) + (2.0 * (a * hxx)) + (a * hff) + (2.0 * (a * jf)) +
            (2.0 * hff) + (j * jf);
  }
  const double c3 = t * t * t / 6.0;
  for (std::size_t i = 0; i < n; ++i) out[i] += c3 * third[i];
  return out;
}

Vector DiscreteModel::step(std::span<const double> x, std::span<const double> u) const {
  if (x.size() != spec_->state_dim()) {
    throw ArgumentError("state dimension mismatch: expected " +
                        std::to_string(spec_->state_dim()) + ", got " + std::to_string(x.size()));
  }
  return (a_d_ * x) + nonlinear(x, u);
}

Vector exact_step(const SystemSpec& spec, std::span<const double> x, std::span<const double> u,
                  double tol, std::optional<double> sampling_time) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw ArgumentError("integrator tolerance must lie in [1e-13, 1e-6]");
  }
  if (x.size() != spec.state_dim() || u.size() != spec.input_dim()) {
    throw ArgumentError("dimension mismatch in exact_step");
  }
  const double t = sampling_time.value_or(spec.sampling_time());
  const Vector held(u.begin(), u.end());
  const Matrix& a = spec.a();
  const std::size_t n = spec.state_dim();
  OdeRhs rhs = [&](std::span<const double> y, std::span<double> dy) {
    const Vector ay = a * y;
    if (spec.linear()) {
      for (std::size_t i = 0; i < n; ++i) dy[i] = ay[i];
      return;
    }
    const Vector f = spec.eval_f(y, held);
    for (std::size_t i = 0; i < n; ++i) dy[i] = ay[i] + f[i];
  };
  return integrate_dopri5(rhs, Vector(x.begin(), x.end()), t, tol).state;
}

Trajectory simulate(const Stepper& step, const SystemSpec& spec, std::span<const double> x0,
                    std::span<const Vector> inputs) {
  if (x0.size() != spec.state_dim()) throw ArgumentError("x0 dimension mismatch");
  Trajectory traj;
  traj.states.reserve(inputs.size() + 1);
  traj.states.emplace_back(x0.begin(), x0.end());
  for (const Vector& u : inputs) {
    if (u.size() != spec.input_dim()) throw ArgumentError("input dimension mismatch");
    traj.states.push_back(step(traj.states.back(), u));
  }
  traj.outputs.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    traj.outputs.push_back(spec.c() * traj.states[k]);
    if (!traj.first_exit && !spec.region().contains(traj.states[k])) traj.first_exit = k;
  }
  return traj;
}

}  // namespace lipdisc
