#include "lipdisc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "lipdisc/error.hpp"

namespace lipdisc {

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* env = std::getenv("LIPDISC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

namespace {

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();
  bool found = false;
};

// Larger value wins; ties go to the lower index so the reduction does not
// depend on how work was split.
bool better(const Candidate& a, const Candidate& b) {
  if (!a.found) return false;
  if (!b.found) return true;
  if (a.value != b.value) return a.value > b.value;
  return a.index < b.index;
}

struct ReduceResult {
  Candidate best;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::string first_error;
};

// Evaluates eval(i) for i in [0, count) on `threads` workers and reduces to
// the argmax. EvalError counts as skipped; any other exception is rethrown
// (the one from the lowest index).
template <typename Eval>
ReduceResult parallel_argmax(std::size_t count, unsigned threads, const Eval& eval) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  struct Local {
    ReduceResult r;
    std::size_t first_error_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr fatal;
    std::size_t fatal_index = std::numeric_limits<std::size_t>::max();
  };
  std::vector<Local> locals(threads);

  auto worker = [&](unsigned w) {
    Local& local = locals[w];
    const std::size_t begin = count * w / threads;
    const std::size_t end = count * (w + 1) / threads;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const std::optional<double> v = eval(i);
        if (!v) continue;
        if (std::isnan(*v)) {
          ++local.r.skipped;
          continue;
        }
        ++local.r.evaluated;
        const Candidate c{*v, i, true};
        if (better(c, local.r.best)) local.r.best = c;
      } catch (const EvalError& e) {
        ++local.r.skipped;
        if (i < local.first_error_index) {
          local.first_error_index = i;
          local.r.first_error = e.what();
        }
      } catch (...) {
        local.fatal = std::current_exception();
        local.fatal_index = i;
        return;
      }
    }
  };

  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  ReduceResult total;
  std::size_t first_error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr fatal;
  std::size_t fatal_index = std::numeric_limits<std::size_t>::max();
  for (auto& local : locals) {
    if (local.fatal && local.fatal_index < fatal_index) {
      fatal = local.fatal;
      fatal_index = local.fatal_index;
    }
    total.evaluated += local.r.evaluated;
    total.skipped += local.r.skipped;
    if (better(local.r.best, total.best)) total.best = local.r.best;
    if (local.first_error_index < first_error_index) {
      first_error_index = local.first_error_index;
      total.first_error = local.r.first_error;
    }
  }
  if (fatal) std::rethrow_exception(fatal);
  return total;
}

void check_failure_rate(const ReduceResult& r, const char* what) {
  const std::size_t total = r.evaluated + r.skipped;
  if (r.skipped * 10 > total) {
    throw NumericalError(std::string(what) + ": " + std::to_string(r.skipped) + " of " +
                         std::to_string(total) + " samples failed to evaluate (first: " +
                         r.first_error + ")");
  }
  if (!r.best.found) {
    throw NumericalError(std::string(what) + ": no sample could be evaluated");
  }
}

double mesh_node(double lo, double hi, std::size_t k, std::size_t nodes) {
  if (nodes <= 1) return lo;
  if (k + 1 == nodes) return hi;
  return lo + ((hi - lo) * static_cast<double>(k)) / static_cast<double>(nodes - 1);
}

}  // namespace

std::vector<std::size_t> grid_shape(const SystemSpec& spec, const SamplingConfig& cfg) {
  if (cfg.grid_per_axis < 2) throw ArgumentError("grid_per_axis must be at least 2");
  const std::size_t n = spec.state_dim();
  const std::size_t m = spec.input_dim();
  std::vector<double> widths;
  for (std::size_t i = 0; i < n; ++i) widths.push_back(spec.region().width(i));
  for (std::size_t i = 0; i < m; ++i) widths.push_back(spec.input_region().width(i));

  std::size_t live_axes = 0;
  for (double w : widths) live_axes += w > 0.0 ? 1 : 0;

  std::size_t per_axis = cfg.grid_per_axis;
  auto total_for = [&](std::size_t g) {
    double total = 1.0;
    for (std::size_t i = 0; i < live_axes; ++i) total *= static_cast<double>(g);
    return total;
  };
  while (per_axis > 2 && total_for(per_axis) > static_cast<double>(cfg.max_grid_points)) {
    --per_axis;
  }

  std::vector<std::size_t> shape;
  for (double w : widths) shape.push_back(w > 0.0 ? per_axis : 1);
  return shape;
}

SupEstimate grid_sup(const SystemSpec& spec, const SamplingConfig& cfg,
                     const PointObjective& objective) {
  const std::size_t n = spec.state_dim();
  const std::size_t m = spec.input_dim();
  const std::vector<std::size_t> shape = grid_shape(spec, cfg);
  const std::size_t axes = n + m;

  std::vector<double> lo(axes);
  std::vector<double> hi(axes);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = spec.region().lower[i];
    hi[i] = spec.region().upper[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    lo[n + i] = spec.input_region().lower[i];
    hi[n + i] = spec.input_region().upper[i];
  }

  std::size_t count = 1;
  for (std::size_t s : shape) count *= s;

  auto point_at = [&](std::size_t index) {
    Vector z(axes);
    for (std::size_t a = axes; a-- > 0;) {
      const std::size_t k = index % shape[a];
      index /= shape[a];
      z[a] = mesh_node(lo[a], hi[a], k, shape[a]);
    }
    return z;
  };
  auto eval_z = [&](const Vector& z) {
    const std::span<const double> zs(z);
    return objective(zs.first(n), zs.subspan(n, m));
  };

  const ReduceResult r = parallel_argmax(count, resolve_threads(cfg.threads),
                                         [&](std::size_t i) { return eval_z(point_at(i)); });
  check_failure_rate(r, "grid sampling");

  Vector best = point_at(r.best.index);
  double best_value = r.best.value;

  // Coordinate ascent polish, sequential so it stays deterministic.
  std::vector<double> step(axes);
  for (std::size_t a = 0; a < axes; ++a) {
    step[a] = shape[a] > 1 ? (hi[a] - lo[a]) / static_cast<double>(shape[a] - 1) : 0.0;
  }
  for (int iter = 0; iter < cfg.polish_iters; ++iter) {
    bool improved = false;
    for (std::size_t a = 0; a < axes; ++a) {
      if (step[a] == 0.0) continue;
      for (double sign : {1.0, -1.0}) {
        Vector cand = best;
        cand[a] = std::clamp(best[a] + sign * step[a], lo[a], hi[a]);
        if (cand[a] == best[a]) continue;
        std::optional<double> v;
        try {
          v = eval_z(cand);
        } catch (const EvalError&) {
          continue;
        }
        if (v && !std::isnan(*v) && *v > best_value) {
          best_value = *v;
          best = std::move(cand);
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      for (double& s : step) s *= 0.5;
    }
  }

  SupEstimate out;
  out.value = best_value;
  out.witness.x1.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(n));
  out.witness.u.assign(best.begin() + static_cast<std::ptrdiff_t>(n), best.end());
  out.evaluated = r.evaluated;
  out.skipped = r.skipped;
  return out;
}

std::vector<SamplePair> generate_pairs(const SystemSpec& spec, const SamplingConfig& cfg) {
  if (cfg.pair_budget < 1000) throw ArgumentError("pair_budget must be at least 1000");
  const BoxRegion& d = spec.region();
  const BoxRegion& u_box = spec.input_region();
  const std::size_t n = d.dim();

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto draw_box = [&](const BoxRegion& box) {
    Vector p(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      p[i] = box.lower[i] + box.width(i) * unit(rng);
    }
    return p;
  };

  const std::size_t wide = cfg.pair_budget / 2;
  const std::size_t near = cfg.pair_budget - wide;
  std::vector<SamplePair> pairs;
  pairs.reserve(cfg.pair_budget);

  for (std::size_t k = 0; k < wide; ++k) {
    SamplePair p;
    p.x1 = draw_box(d);
    p.x2 = draw_box(d);
    p.u = draw_box(u_box);
    pairs.push_back(std::move(p));
  }

  for (std::size_t k = 0; k < near; ++k) {
    SamplePair p;
    p.x1 = draw_box(d);
    Vector v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double g = gauss(rng);
      v[i] = d.width(i) > 0.0 ? g : 0.0;
    }
    p.u = draw_box(u_box);
    const double nv = norm2(v);
    p.x2 = p.x1;
    if (nv > 0.0) {
      Vector fwd(n);
      Vector back(n);
      for (std::size_t i = 0; i < n; ++i) {
        fwd[i] = p.x1[i] + cfg.near_epsilon * v[i] / nv;
        back[i] = p.x1[i] - cfg.near_epsilon * v[i] / nv;
      }
      if (d.contains(fwd)) {
        p.x2 = std::move(fwd);
      } else if (d.contains(back)) {
        p.x2 = std::move(back);
      } else {
        for (std::size_t i = 0; i < n; ++i) p.x2[i] = std::clamp(fwd[i], d.lower[i], d.upper[i]);
      }
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

SupEstimate pair_sup(std::span<const SamplePair> pairs, const SamplingConfig& cfg,
                     const PairObjective& objective) {
  const ReduceResult r = parallel_argmax(pairs.size(), resolve_threads(cfg.threads),
                                         [&](std::size_t i) { return objective(pairs[i]); });
  check_failure_rate(r, "pair sampling");
  SupEstimate out;
  out.value = r.best.value;
  const SamplePair& p = pairs[r.best.index];
  out.witness = Witness{p.x1, p.x2, p.u};
  out.evaluated = r.evaluated;
  out.skipped = r.skipped;
  return out;
}

}  // namespace lipdisc
