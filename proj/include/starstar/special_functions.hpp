#pragma once

#include <span>

#include "starstar/common.hpp"
#include "starstar/nomes.hpp"
#include "starstar/spin.hpp"

namespace starstar {

// G(z) = prod_{k>=1} (1 - z^{2k}) for |z| < 1. The product is truncated once
// |z|^{2k} < trunc_eps * (1 - |z|^2), which bounds the dropped log-tail by
// trunc_eps.
Complex g_euler(Complex z, double trunc_eps = kDefaultTruncEps);

// Same, additionally reporting how many factors were multiplied.
Complex g_euler_counted(Complex z, double trunc_eps, int& factors_used);

// The additively-normalized elliptic gamma function
//
//   Phi(z) = prod_{j,k>=0} (1 - e^{2iz} q^{2j+1} p^{2k+1})
//                        / (1 - e^{-2iz} q^{2j+1} p^{2k+1}),
//
// evaluated from the tabulated shell-ordered factors. Valid for every z off
// the pole lattice (Im z = Re eta mod the lattice of quasi-periods); a
// vanishing denominator factor raises PoleError. Phi(0) == 1 exactly.
Complex phi(Complex z, const EllipticNomes& nomes);

// Exponential-sum form of Phi,
//
//   Phi(z) = exp{ sum_{k != 0} e^{-2izk} / (k (q^k - q^{-k})(p^k - p^{-k})) },
//
// valid only strictly inside the strip |Im z| < Re eta. The +-k terms are
// paired so every intermediate power has magnitude < 1; the sum stops when a
// pair's magnitude drops below trunc_eps. Raises StripError outside the strip.
Complex phi_series(Complex z, const EllipticNomes& nomes);

// The standard elliptic gamma function with bases (p^2, q^2):
//
//   Gamma(z) = prod_{j,k>=0} (1 - p^{2j+2} q^{2k+2} / z) / (1 - p^{2j} q^{2k} z).
//
// Shell-ordered accumulation; terms are dropped once both deviations
// |p^{2j} q^{2k} z| and |p^{2j+2} q^{2k+2} / z| fall below trunc_eps. Raises
// PoleError on the pole lattice z = p^{-2j} q^{-2k} and DomainError at z = 0.
Complex elliptic_gamma(Complex z, const EllipticNomes& nomes);

// 1 / Gamma(z), computed directly (roles of the two products exchanged) so
// that the zeros inherited from Gamma's poles are exact; in particular the
// value at z == 1 is exactly 0. Raises PoleError on the zero lattice of
// Gamma, where the reciprocal has poles.
Complex elliptic_gamma_reciprocal(Complex z, const EllipticNomes& nomes);

// kappa_s = n! * (pi / (G(q) G(p)))^{n-1}, the normalization of the
// single-spin weight. Requires n >= 2.
Complex kappa_s(int n, const EllipticNomes& nomes);

// prod_{j != k} Phi(x_j - x_k - i eta), the unnormalized single-spin weight.
// Returns exactly 0 when two components coincide (the only way two angles in
// [0, pi) can coincide mod pi is bitwise equality).
Complex spin_pair_product(std::span<const double> x, const EllipticNomes& nomes);

// The single-spin weight S(x) = spin_pair_product(x) / kappa_s. Real and
// non-negative for real nomes; exactly 0 at coincident components.
Complex single_spin_s(const Spin& x, const EllipticNomes& nomes);

// S(x) on a raw component span (no Spin validation); the form used by the
// star integrands on quadrature nodes.
Complex single_spin_s_components(std::span<const double> x,
                                 const EllipticNomes& nomes);

}  // namespace starstar
