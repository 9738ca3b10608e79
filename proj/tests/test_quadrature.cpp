#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "checks.hpp"
#include "starstar/nomes.hpp"
#include "starstar/quadrature.hpp"
#include "starstar/special_functions.hpp"

using namespace starstar;
using checks::rel;

namespace {

bool bit_equal(Complex a, Complex b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("quadrature spec validation") {
  const GridPass unit = [](int) { return Complex(1.0, 0.0); };
  CHECK_THROWS_AS(integrate_doubling({0, 16, 1e-8, 64}, unit), ConfigError);
  CHECK_THROWS_AS(integrate_doubling({9, 16, 1e-8, 64}, unit), ConfigError);
  CHECK_THROWS_AS(integrate_doubling({1, 7, 1e-8, 64}, unit), ConfigError);
  CHECK_THROWS_AS(integrate_doubling({1, 16, 1e-8, 8}, unit), ConfigError);
  // No room for even one doubling: fixed-grid entry points exist for that.
  CHECK_THROWS_AS(integrate_doubling({1, 16, 1e-8, 16}, unit), ConfigError);
  CHECK_THROWS_AS(integrate_doubling({1, 16, 0.0, 64}, unit), ConfigError);
  CHECK_THROWS_AS(grid_sum(0, 8, [](std::span<const int>) {
                    return Complex(0.0);
                  }),
                  ConfigError);
  CHECK_THROWS_AS(grid_sum(1, 0, [](std::span<const int>) {
                    return Complex(0.0);
                  }),
                  ConfigError);
  CHECK_THROWS_AS(grid_sum(1, 8, [](std::span<const int>) {
                    return Complex(0.0);
                  },
                           -1),
                  ConfigError);
}

TEST_CASE("constant integrands integrate to powers of pi") {
  const TorusIntegrand one = [](std::span<const double>) {
    return Complex(1.0, 0.0);
  };
  const QuadratureReport r1 = integrate_torus_fixed(one, 1, 48);
  CHECK(rel(r1.value, Complex(kPi, 0.0)) < 1e-15);
  CHECK(r1.points_per_dim_used == 48);
  CHECK(r1.est_rel_err == 0.0);
  CHECK(r1.evaluations == 48);
  const QuadratureReport r2 = integrate_torus_fixed(one, 2, 32);
  CHECK(rel(r2.value, Complex(kPi * kPi, 0.0)) < 1e-15);
  CHECK(r2.evaluations == 32 * 32);
}

TEST_CASE("zero integrands converge immediately with zero estimate") {
  const TorusIntegrand zero = [](std::span<const double>) {
    return Complex(0.0, 0.0);
  };
  const QuadratureReport r = integrate_torus(zero, {1, 16, 1e-12, 256});
  CHECK(r.value == Complex(0.0, 0.0));
  CHECK(r.est_rel_err == 0.0);
  CHECK(r.points_per_dim_used == 32);  // one mandatory refinement
}

TEST_CASE("fixed-grid integration is linear") {
  const TorusIntegrand f = [](std::span<const double> x) {
    return Complex(std::sin(2.0 * x[0]), std::cos(4.0 * x[0]));
  };
  const TorusIntegrand g = [](std::span<const double> x) {
    return Complex(1.0 / (2.0 + std::cos(2.0 * x[0])), 0.0);
  };
  const TorusIntegrand fg = [&](std::span<const double> x) {
    return f(x) + 3.0 * g(x);
  };
  const Complex vf = integrate_torus_fixed(f, 1, 64).value;
  const Complex vg = integrate_torus_fixed(g, 1, 64).value;
  const Complex vfg = integrate_torus_fixed(fg, 1, 64).value;
  CHECK(rel(vfg, vf + 3.0 * vg) < 1e-14);
}

TEST_CASE("grid sums are bit-identical across worker thread counts") {
  const auto node = [](std::span<const int> idx) {
    const double x = (idx[0] + 0.5) * 0.001;
    const double y = (idx[1] + 0.5) * 0.003;
    return Complex(std::sin(3.0 * x) * std::cos(y), std::cos(7.0 * x * y));
  };
  const Complex s1 = grid_sum(2, 160, node, 1);  // 25600 nodes, several chunks
  const Complex s3 = grid_sum(2, 160, node, 3);
  const Complex s4 = grid_sum(2, 160, node, 4);
  const Complex s_auto = grid_sum(2, 160, node);
  CHECK(bit_equal(s1, s3));
  CHECK(bit_equal(s1, s4));
  CHECK(bit_equal(s1, s_auto));
}

TEST_CASE("doubling driver reaches spectral accuracy on a smooth integrand") {
  // integral over [0, pi) of dx / (2 + cos 2x) = pi / sqrt(3).
  const TorusIntegrand f = [](std::span<const double> x) {
    return Complex(1.0 / (2.0 + std::cos(2.0 * x[0])), 0.0);
  };
  const double exact = kPi / std::sqrt(3.0);
  const QuadratureReport r = integrate_torus(f, {1, 8, 1e-12, 128});
  CHECK(r.points_per_dim_used <= 64);
  CHECK(rel(r.value, Complex(exact, 0.0)) < 1e-13);
  // The pass-to-pass estimate bounds the true error of the final pass.
  CHECK(std::abs(r.value.real() - exact) / exact <= r.est_rel_err + 1e-15);

  const TorusIntegrand f2 = [](std::span<const double> x) {
    return Complex(1.0 / ((2.0 + std::cos(2.0 * x[0])) *
                          (2.0 + std::cos(2.0 * x[1]))),
                   0.0);
  };
  const QuadratureReport r2 = integrate_torus_fixed(f2, 2, 32);
  CHECK(rel(r2.value, Complex(exact * exact, 0.0)) < 1e-12);
}

TEST_CASE("doubling driver raises when the cap is reached") {
  const TorusIntegrand peaked = [](std::span<const double> x) {
    return Complex(1.0 / (1.01 - std::cos(2.0 * x[0])), 0.0);
  };
  CHECK_THROWS_AS(integrate_torus(peaked, {1, 16, 1e-10, 64}),
                  ConvergenceError);
  // With enough headroom the same integrand converges to the exact value
  // pi / sqrt(1.01^2 - 1).
  const QuadratureReport r = integrate_torus(peaked, {1, 16, 1e-10, 4096});
  CHECK(r.points_per_dim_used <= 1024);
  CHECK(rel(r.value, Complex(kPi / std::sqrt(1.01 * 1.01 - 1.0), 0.0)) < 1e-12);
}

TEST_CASE("unit-circle rule reproduces Fourier coefficients") {
  const CircleIntegrand one = [](std::span<const Complex>) {
    return Complex(1.0, 0.0);
  };
  CHECK(rel(integrate_unit_torus_product_fixed(one, 1, 32).value,
            Complex(1.0, 0.0)) < 1e-15);
  const CircleIntegrand cube = [](std::span<const Complex> z) {
    return z[0] * z[0] * z[0];
  };
  CHECK(std::abs(integrate_unit_torus_product_fixed(cube, 1, 32).value) <
        1e-15);
  // Geometric series: the mean of 1 / (1 - z/2) over the circle is 1.
  const CircleIntegrand geo = [](std::span<const Complex> z) {
    return 1.0 / (1.0 - 0.5 * z[0]);
  };
  CHECK(rel(integrate_unit_torus_product_fixed(geo, 1, 64).value,
            Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("unit-circle rule matches frozen gamma-product references") {
  const EllipticNomes nm(0.2, 0.2);
  const CircleIntegrand f = [&](std::span<const Complex> z) {
    return elliptic_gamma(0.4 * z[0], nm) * elliptic_gamma(0.4 / z[0], nm);
  };
  CHECK(rel(integrate_unit_torus_product_fixed(f, 1, 64).value,
            Complex(1.2200842478906611, 0.0)) < 1e-12);
  const QuadratureReport r = integrate_unit_torus_product(f, {1, 64, 1e-12, 512});
  CHECK(rel(r.value, Complex(1.2200842478906599, 0.0)) < 1e-12);
}

TEST_CASE("torus rule matches a frozen phi-product reference") {
  const EllipticNomes nm(0.2, 0.2);
  const TorusIntegrand f = [&](std::span<const double> x) {
    return phi(Complex(x[0] - 0.3, 0.0) + kI * (nm.eta() - 0.4), nm) *
           phi(Complex(0.9 - x[0], 0.0) + kI * 0.35, nm);
  };
  CHECK(rel(integrate_torus_fixed(f, 1, 128).value,
            Complex(3.1744525239786681, -0.12730534177604677)) < 1e-12);
  const QuadratureReport r = integrate_torus(f, {1, 64, 1e-12, 1024});
  CHECK(rel(r.value, Complex(3.1744525239786672, -0.12730534177604577)) <
        1e-12);
}
