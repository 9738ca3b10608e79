#pragma once

#include <functional>
#include <vector>

#include "starstar/nomes.hpp"
#include "starstar/quadrature.hpp"
#include "starstar/special_functions.hpp"
#include "starstar/spin.hpp"

namespace starstar {

// Pluggable edge normalization kappa_n(alpha). An empty function means
// kappa_n == 1. The star-star relation holds for any choice because the
// kappa factors cancel between its two sides; tests exercise that.
using KappaFn = std::function<Complex(double alpha)>;

// The two rapidity pairs (u, u') and (v, v') carried by the oriented medial
// lines through a star. Edge weights depend only on the differences below.
struct RapidityData {
  double u = 0.0;
  double u_prime = 0.0;
  double v = 0.0;
  double v_prime = 0.0;

  double alpha1() const { return u - v; }
  double alpha2() const { return u_prime - v_prime; }
  double alpha3() const { return u_prime - v; }
  double alpha4() const { return u - v_prime; }

  // Verification regime: all four differences strictly inside (0, Re eta).
  // Raises RegimeError otherwise.
  void require_regime(const EllipticNomes& nomes) const;
};

// A four-edge star: rapidities, the surrounding spins
//
//        a (top-left)    b (top-right)
//        c (bottom-left) d (bottom-right)
//
// and the nomes everything is evaluated with.
struct StarConfig {
  RapidityData rap;
  Spin a, b, c, d;
  EllipticNomes nomes;

  int n() const { return a.n(); }
  void require_consistent() const;  // all corners share the same n
};

// Unnormalized edge weight prod_{j,k} Phi(x_j - y_k + i alpha); alpha may be
// complex (the conjugated weight shifts it by eta).
Complex weight_w_product(Complex alpha, std::span<const double> x,
                         std::span<const double> y,
                         const EllipticNomes& nomes);

// W_alpha(x, y) = kappa_n(alpha)^{-1} prod_{j,k} Phi(x_j - y_k + i alpha).
// Requires -Re eta < alpha < Re eta.
Complex weight_w(double alpha, const Spin& x, const Spin& y,
                 const EllipticNomes& nomes, const KappaFn& kappa = {});

// Conjugated weight Wbar_alpha(x, y) = sqrt(S(x) S(y)) W_{eta-alpha}(x, y).
// Requires 0 < alpha < Re eta and the real-nome regime (the square roots
// raise BranchError when S is not numerically real non-negative).
Complex weight_wbar(double alpha, const Spin& x, const Spin& y,
                    const EllipticNomes& nomes, const KappaFn& kappa = {});

// The two four-edge star integrals over the center spin (n-1 free angles):
//
//   V1 = integral dx Wbar_{u-v}(c,x) Wbar_{u'-v'}(b,x) W_{u'-v}(x,a) W_{u-v'}(x,d)
//   V2 = integral dy Wbar_{u-v}(y,b) Wbar_{u'-v'}(y,c) W_{u'-v}(d,y) W_{u-v'}(a,y)
//
// spec.dims must equal n-1.
QuadratureReport star_v1(const StarConfig& cfg, const QuadratureSpec& spec,
                         const KappaFn& kappa = {});
QuadratureReport star_v2(const StarConfig& cfg, const QuadratureSpec& spec,
                         const KappaFn& kappa = {});

// Relative mismatch of the star-star relation,
//
//   W_{v'-v}(d,c) W_{u'-u}(d,b) V1 = W_{v'-v}(b,a) W_{u'-u}(c,a) V2,
//
// as |lhs - rhs| / max(|lhs|, |rhs|).
double star_star_residual(const StarConfig& cfg, const QuadratureSpec& spec,
                          const KappaFn& kappa = {});

// Which sublattice the first internal site of a patch belongs to. A white
// site carries the V1 edge pattern, a black site the V2 pattern; along the
// staircase chain the colors alternate.
enum class PatchColor { white_first, black_first };

// Partition function of a staircase chain of width*height internal sites
// (min(width, height) must be 1; at most 3 sites; n * sites <= 6). Site k+1
// sits on the top-right corner of site k, so consecutive sites share one
// conjugated edge. Boundary spins are listed site by site: top-left, then
// bottom-left (first site only), then bottom-right, and finally top-right
// (last site only) — 2*sites + 2 spins in total. For a single site this is
// [a, c, d, b] in the StarConfig corner naming, and the result reproduces
// star_v1 / star_v2 (white / black) exactly, bit for bit.
QuadratureReport partition_function(int width, int height,
                                    const std::vector<Spin>& boundary,
                                    const RapidityData& rap,
                                    const EllipticNomes& nomes,
                                    const QuadratureSpec& spec,
                                    const KappaFn& kappa = {},
                                    PatchColor color = PatchColor::white_first);

}  // namespace starstar
