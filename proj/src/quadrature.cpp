#include "starstar/quadrature.hpp"

#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace starstar {

namespace {

constexpr int kMaxDims = 8;
constexpr std::int64_t kChunk = 8192;  // nodes per reduction chunk
constexpr std::int64_t kPairwiseLeaf = 64;

void validate_spec(const QuadratureSpec& spec) {
  if (spec.dims < 1 || spec.dims > kMaxDims)
    throw ConfigError("QuadratureSpec: dims must be in [1, 8]");
  if (spec.points_per_dim < 8)
    throw ConfigError("QuadratureSpec: points_per_dim must be >= 8");
  if (spec.max_points_per_dim < spec.points_per_dim)
    throw ConfigError("QuadratureSpec: max_points_per_dim < points_per_dim");
  if (2 * spec.points_per_dim > spec.max_points_per_dim)
    throw ConfigError(
        "QuadratureSpec: max_points_per_dim must allow at least one doubling "
        "(use a fixed-grid entry point for single-resolution evaluation)");
  if (!(spec.target_rel_tol > 0.0))
    throw ConfigError("QuadratureSpec: target_rel_tol must be positive");
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

template <typename Eval>
Complex pairwise_sum(std::int64_t lo, std::int64_t hi, const Eval& eval) {
  if (hi - lo <= kPairwiseLeaf) {
    Complex sum = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) sum += eval(i);
    return sum;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, eval) + pairwise_sum(mid, hi, eval);
}

}  // namespace

Complex grid_sum(int dims, int n_points,
                 const std::function<Complex(std::span<const int>)>& node,
                 int n_threads_requested) {
  if (dims < 1 || dims > kMaxDims)
    throw ConfigError("grid_sum: dims must be in [1, 8]");
  if (n_points < 1) throw ConfigError("grid_sum: n_points must be positive");
  if (n_threads_requested < 0)
    throw ConfigError("grid_sum: n_threads must be >= 0");
  const std::int64_t total = ipow(n_points, dims);

  const auto eval = [&](std::int64_t flat) {
    int idx[kMaxDims];
    std::int64_t rest = flat;
    for (int d = dims - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(rest % n_points);
      rest /= n_points;
    }
    return node(std::span<const int>(idx, static_cast<std::size_t>(dims)));
  };

  const std::int64_t n_chunks = (total + kChunk - 1) / kChunk;
  if (n_chunks <= 1) return pairwise_sum(0, total, eval);

  std::vector<Complex> partials(static_cast<std::size_t>(n_chunks));
  const auto run_chunk = [&](std::int64_t c) {
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(total, lo + kChunk);
    partials[static_cast<std::size_t>(c)] = pairwise_sum(lo, hi, eval);
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const std::int64_t wanted =
      n_threads_requested > 0 ? n_threads_requested : (hw == 0 ? 1 : hw);
  const std::int64_t n_threads = std::min<std::int64_t>(wanted, n_chunks);
  if (n_threads <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    // Chunks are assigned by stride; each partial lands in its own slot, so
    // the final combination below is independent of the thread count.
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (std::int64_t w = 0; w < n_threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::int64_t c = w; c < n_chunks; c += n_threads) run_chunk(c);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  const auto fetch = [&](std::int64_t c) {
    return partials[static_cast<std::size_t>(c)];
  };
  return pairwise_sum(0, n_chunks, fetch);
}

QuadratureReport integrate_doubling(const QuadratureSpec& spec,
                                    const GridPass& pass) {
  validate_spec(spec);
  int n = spec.points_per_dim;
  Complex value = pass(n);
  for (;;) {
    if (2 * n > spec.max_points_per_dim)
      throw ConvergenceError(
          "integrate_doubling: tolerance not met before max_points_per_dim");
    const Complex refined = pass(2 * n);
    n *= 2;
    const double diff = std::abs(refined - value);
    const double scale = std::abs(refined);
    double est;
    if (scale > 0.0)
      est = diff / scale;
    else
      est = (diff > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    value = refined;
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw EvaluationError("integrate_doubling: non-finite pass value");
    if (est < spec.target_rel_tol)
      return {value, n, est, ipow(n, spec.dims)};
  }
}

namespace {

GridPass torus_pass(const TorusIntegrand& f, int dims) {
  return [&f, dims](int n) {
    const double step = kPi / n;
    double scale = 1.0;
    for (int d = 0; d < dims; ++d) scale *= step;
    const Complex sum = grid_sum(dims, n, [&](std::span<const int> idx) {
      double x[kMaxDims];
      for (int d = 0; d < dims; ++d) x[d] = (idx[d] + 0.5) * step;
      return f(std::span<const double>(x, static_cast<std::size_t>(dims)));
    });
    return scale * sum;
  };
}

GridPass circle_pass(const CircleIntegrand& f, int dims) {
  return [&f, dims](int n) {
    const double step = 2.0 * kPi / n;
    double scale = 1.0;
    for (int d = 0; d < dims; ++d) scale /= n;
    const Complex sum = grid_sum(dims, n, [&](std::span<const int> idx) {
      Complex z[kMaxDims];
      for (int d = 0; d < dims; ++d) {
        const double theta = (idx[d] + 0.5) * step;
        z[d] = std::exp(Complex(0.0, theta));
      }
      return f(std::span<const Complex>(z, static_cast<std::size_t>(dims)));
    });
    return scale * sum;
  };
}

}  // namespace

QuadratureReport integrate_torus(const TorusIntegrand& f,
                                 const QuadratureSpec& spec) {
  return integrate_doubling(spec, torus_pass(f, spec.dims));
}

QuadratureReport integrate_torus_fixed(const TorusIntegrand& f, int dims,
                                       int n_points) {
  const Complex value = torus_pass(f, dims)(n_points);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw EvaluationError("integrate_torus_fixed: non-finite value");
  return {value, n_points, 0.0, ipow(n_points, dims)};
}

QuadratureReport integrate_unit_torus_product(const CircleIntegrand& f,
                                              const QuadratureSpec& spec) {
  return integrate_doubling(spec, circle_pass(f, spec.dims));
}

QuadratureReport integrate_unit_torus_product_fixed(const CircleIntegrand& f,
                                                    int dims, int n_points) {
  const Complex value = circle_pass(f, dims)(n_points);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw EvaluationError("integrate_unit_torus_product_fixed: non-finite value");
  return {value, n_points, 0.0, ipow(n_points, dims)};
}

}  // namespace starstar
