#pragma once

#include <optional>

#include "lipdisc/constants.hpp"

namespace lipdisc {

// Discrete Lipschitz constant of the order-k nonlinear map F_T:
//   k = 1: T g
//   k = 2: T g + T^2 (s g + g^2 / 2)
//   k = 3: the k = 2 value + T^3/6 [2 b s + (b s + 2 b M + 2 s^2) g + 2 s g^2 + 2 g^3]
// with g = gamma_c, s = sigma_bar(A), b = beta, M = big_m.
// Throws ArgumentError for other orders, negative T, or missing beta/M at
// order 3.
double gamma_d(int order, double t, const ContinuousConstants& c);

// Discrete one-sided constant:
//   k = 1: T r
//   k = 2: T r + (T^2 / 2) s (r + g + r g)
// There is no order-3 formula; order 3 throws ArgumentError.
double rho_d(int order, double t, const ContinuousConstants& c);

struct BoundResult {
  int order = 1;
  double t = 0.0;
  double gamma_d = 0.0;
  std::optional<double> rho_d;  // absent at order 3 or when rho_c is missing
  ContinuousConstants inputs;
};

BoundResult evaluate_bounds(int order, double t, const ContinuousConstants& c);

}  // namespace lipdisc
