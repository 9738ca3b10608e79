#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "starstar/common.hpp"
#include "starstar/errors.hpp"

namespace starstar {

// Controls for the adaptive trapezoid quadrature. points_per_dim is the
// first full-resolution pass; the driver doubles it until the relative
// change between consecutive passes drops below target_rel_tol or the cap
// max_points_per_dim would be exceeded (ConvergenceError). All integrands
// here are smooth and periodic, so the trapezoid rule converges
// geometrically and the pass-to-pass change is a sound error proxy.
struct QuadratureSpec {
  int dims = 1;
  int points_per_dim = 16;
  double target_rel_tol = 1e-10;
  int max_points_per_dim = 1024;
};

struct QuadratureReport {
  Complex value{};
  int points_per_dim_used = 0;
  double est_rel_err = 0.0;
  std::int64_t evaluations = 0;  // node count of the final pass
};

using TorusIntegrand = std::function<Complex(std::span<const double>)>;
using CircleIntegrand = std::function<Complex(std::span<const Complex>)>;

// Scaled value of the integral on the N-points-per-dimension grid. Integrands
// that precompute per-grid tables implement this directly and go through
// integrate_doubling.
using GridPass = std::function<Complex(int n_points)>;

// integral over [0, pi)^dims of f(x) dx_1..dx_dims, nodes offset by half a
// step: x_i = (m_i + 1/2) * pi / N.
QuadratureReport integrate_torus(const TorusIntegrand& f,
                                 const QuadratureSpec& spec);

// Single fixed-resolution pass of the same rule. No error estimate is
// attempted; est_rel_err is reported as 0.
QuadratureReport integrate_torus_fixed(const TorusIntegrand& f, int dims,
                                       int n_points);

// Mean over the product of unit circles:
// (2 pi i)^{-dims} * contour integral of f(z) dz_1/z_1 .. dz_dims/z_dims,
// nodes z_i = exp(i (m_i + 1/2) 2 pi / N).
QuadratureReport integrate_unit_torus_product(const CircleIntegrand& f,
                                              const QuadratureSpec& spec);

QuadratureReport integrate_unit_torus_product_fixed(const CircleIntegrand& f,
                                                    int dims, int n_points);

// The doubling driver itself. pass(N) must return the fully scaled value of
// the integral at resolution N.
QuadratureReport integrate_doubling(const QuadratureSpec& spec,
                                    const GridPass& pass);

// Deterministic sum of node(multi_index) over the full dims-dimensional grid
// {0..n_points-1}^dims in lexicographic order. Nodes are accumulated by
// pairwise reduction over fixed-size chunks, so the result is bit-identical
// for a given (dims, n_points) regardless of how many worker threads run.
// n_threads == 0 picks the hardware concurrency; any positive value forces
// that worker count (the bit-identity across counts is tested).
Complex grid_sum(int dims, int n_points,
                 const std::function<Complex(std::span<const int>)>& node,
                 int n_threads = 0);

}  // namespace starstar
