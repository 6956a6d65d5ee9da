#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lipdisc/expr.hpp"
#include "lipdisc/io.hpp"
#include "lipdisc/system.hpp"

namespace lipdisc::test {

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"linear-2d", "pendulum", "cubic-scalar",
                                                 "van-der-pol"};
  return names;
}

inline std::string benchmark_path(const std::string& name) {
  return std::string(LIPDISC_TEST_DATA_DIR) + "/benchmarks/" + name + ".json";
}

inline SystemSpec load_benchmark(const std::string& name) {
  return load_system_spec(benchmark_path(name));
}

// Scalar or small system built from expression strings; default box [-1,1]^n.
inline SystemSpec make_spec(Matrix a, std::vector<std::string> f, double lo = -1.0,
                            double hi = 1.0, double t = 0.1, std::size_t inputs = 0) {
  const std::size_t n = a.rows();
  std::vector<Expression> exprs;
  for (const auto& s : f) exprs.push_back(parse_expression(s));
  BoxRegion d{Vector(n, lo), Vector(n, hi)};
  BoxRegion u{Vector(inputs, -1.0), Vector(inputs, 1.0)};
  return SystemSpec::create("test", std::move(a), Matrix::identity(n), std::move(exprs),
                            std::move(d), std::move(u), t);
}

inline Vector uniform_point(std::mt19937_64& rng, const BoxRegion& box) {
  Vector x(box.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uniform_real_distribution<double> dist(box.lower[i], box.upper[i]);
    x[i] = dist(rng);
  }
  return x;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace lipdisc::test
