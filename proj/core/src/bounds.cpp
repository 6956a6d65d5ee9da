#include "lipdisc/bounds.hpp"

#include <cmath>
#include <string>

#include "lipdisc/error.hpp"

namespace lipdisc {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ArgumentError("sampling time must be finite and non-negative");
  }
}

}  // namespace

double gamma_d(int order, double t, const ContinuousConstants& c) {
  check_time(t);
  const double g = c.gamma_c;
  const double s = c.sigma_bar_a;
  switch (order) {
    case 1:
      return t * g;
    case 2:
      return t * g + t * t * (s * g + g * g / 2.0);
    case 3: {
      if (!c.beta || !c.big_m) {
        throw ArgumentError("order-3 gamma_d needs beta and big_m");
      }
      const double b = *c.beta;
      const double m = *c.big_m;
      const double cubic =
          2.0 * b * s + (b * s + 2.0 * b * m + 2.0 * s * s) * g + 2.0 * s * g * g + 2.0 * g * g * g;
      return t * g + t * t * (s * g + g * g / 2.0) + (t * t * t / 6.0) * cubic;
    }
    default:
      throw ArgumentError("unsupported order " + std::to_string(order) + " (expected 1, 2 or 3)");
  }
}

double rho_d(int order, double t, const ContinuousConstants& c) {
  check_time(t);
  if (order == 3) throw ArgumentError("no one-sided formula exists for order 3");
  if (order != 1 && order != 2) {
    throw ArgumentError("unsupported order " + std::to_string(order) + " (expected 1 or 2)");
  }
  if (!c.rho_c) throw ArgumentError("rho_d needs rho_c");
  const double r = *c.rho_c;
  if (order == 1) return t * r;
  const double g = c.gamma_c;
  const double s = c.sigma_bar_a;
  return t * r + (t * t / 2.0) * s * (r + g + r * g);
}

BoundResult evaluate_bounds(int order, double t, const ContinuousConstants& c) {
  BoundResult b;
  b.order = order;
  b.t = t;
  b.inputs = c;
  b.gamma_d = gamma_d(order, t, c);
  if (order != 3 && c.rho_c) b.rho_d = rho_d(order, t, c);
  return b;
}

}  // namespace lipdisc
