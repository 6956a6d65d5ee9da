#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "lipdisc/linalg.hpp"

namespace lipdisc {

// dy = rhs(y) for an autonomous system.
using OdeRhs = std::function<void(std::span<const double> y, std::span<double> dy)>;

struct OdeResult {
  Vector state;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

// Adaptive Dormand-Prince 5(4) from t = 0 to t_end with mixed
// absolute/relative tolerance `tol` (RMS error norm), safety factor 0.9 and
// step sizes in [h_min, t_end]. Throws NumericalError on step underflow.
OdeResult integrate_dopri5(const OdeRhs& rhs, Vector y0, double t_end, double tol,
                           double h_min = 1e-12);

}  // namespace lipdisc
