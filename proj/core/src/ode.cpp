#include "lipdisc/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lipdisc/error.hpp"

namespace lipdisc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

OdeResult integrate_dopri5(const OdeRhs& rhs, Vector y0, double t_end, double tol,
                           double h_min) {
  const std::size_t n = y0.size();
  OdeResult out;
  out.state = std::move(y0);
  if (t_end <= 0.0 || n == 0) return out;

  Vector& y = out.state;
  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  rhs(y, k1);

  double t = 0.0;
  double h = t_end;
  while (t < t_end) {
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(ynew, k7);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = tol + tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double r = e / scale;
      err += r * r;
      finite = finite && std::isfinite(ynew[i]);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!finite || !std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      t = last ? t_end : t + h;
      y = ynew;
      k1 = k7;  // first-same-as-last
      ++out.accepted_steps;
      const double factor =
          err == 0.0 ? kMaxFactor
                     : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      h = std::min(h * factor, t_end);
    } else {
      ++out.rejected_steps;
      h *= std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, 1.0);
      if (h < h_min) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "step size underflow (h < " << h_min << ") at t = " << t << ", state = [";
        for (std::size_t i = 0; i < n; ++i) msg << (i ? ", " : "") << y[i];
        msg << "]";
        throw NumericalError(msg.str());
      }
    }
  }
  return out;
}

}  // namespace lipdisc
