#pragma once

#include <vector>

#include "starstar/lattice.hpp"

namespace starstar {

// Parameters of the A_{n-1} elliptic hypergeometric integral
//
//   I(t, s) = (n!)^{-1} (G(p) G(q) / (2 pi i))^{n-1}
//             * contour integral over |z_k| = 1, z_1..z_n = 1, of
//               prod_k prod_j Gamma(t_j z_k) Gamma(s_j / z_k)
//               / prod_{k != l} Gamma(z_k / z_l)  dz_1/z_1 .. dz_{n-1}/z_{n-1}
//
// with 2n parameters in each of t and s, all strictly inside the unit disk.
struct RainsParams {
  std::vector<Complex> t, s;
  int n = 2;
  EllipticNomes nomes;

  // Validates sizes (2n each) and |t_j|, |s_j| < 1.
  RainsParams(std::vector<Complex> t_in, std::vector<Complex> s_in, int n_in,
              EllipticNomes nomes_in);
};

// Result of the parameter map t -> T^{1/n}/t, s -> U^{1/n}/s with
// T = prod t_j, U = prod s_j (principal n-th roots, optionally twisted by
// roots of unity).
struct TildeParams {
  std::vector<Complex> t_tilde, s_tilde;
  Complex t_product{};           // T
  Complex s_product{};           // U
  bool in_unit_polydisk = false; // all |t~_j|, |s~_j| < 1
};

// Evaluates I(t, s) by the same half-offset trapezoid rule as the star
// integrals (z_k = e^{i theta_k}). All gamma evaluations of a pass live on
// the 2N-point set e^{i pi M / N}, so the pass precomputes per-parameter
// tables and each node is a table-lookup product. spec.dims must be n-1.
QuadratureReport rains_integral(const RainsParams& params,
                                const QuadratureSpec& spec);

// t~_i = w^{t_root_twist} T^{1/n} / t_i and s~_i = w^{s_root_twist} U^{1/n} / s_i
// with w = e^{2 pi i / n}. Raises DomainError if T or U vanishes (some t_i or
// s_i is 0). The twisted pair (k, -k) corresponds to the substitution
// z_k -> w^k z_k, which preserves the z_1..z_n = 1 constraint.
TildeParams tilde_transform(const RainsParams& params, int t_root_twist = 0,
                            int s_root_twist = 0);

// RainsParams built from a TildeParams result (validates the polydisk).
RainsParams tilde_to_params(const RainsParams& base, const TildeParams& tp);

// prod_{j,k=1..2n} Gamma(t_j s_k).
Complex gamma_cross_product(const RainsParams& params);

// Relative mismatch of the transformation formula
//
//   I(t, s) = prod_{j,k} Gamma(t_j s_k) * I(t~, s~)
//
// as |lhs - rhs| / max(|lhs|, |rhs|). root_twist applies the paired twist
// (root_twist, -root_twist) to the principal n-th roots; the residual is
// invariant under it.
double rains_residual(const RainsParams& params, const QuadratureSpec& spec,
                      int root_twist = 0);

// The substitution taking a star configuration to integral parameters:
//
//   t_j     = e^{-2(u-v)   - 2i c_j}      t_{n+j} = e^{-2(u'-v') - 2i b_j}
//   s_j     = e^{2(u'-v-eta) + 2i a_j}    s_{n+j} = e^{2(u-v'-eta) + 2i d_j}
//
// Under it, V1 = rho * I(t, s) and V2 = rho * I(t~, s~) with rho below.
RainsParams rapidity_to_params(const StarConfig& cfg);

// rho = sqrt(S(c) S(b)) / (kappa_n(eta-u+v) kappa_n(eta-u'+v')
//                          kappa_n(u'-v) kappa_n(u-v')).
Complex prefactor_rho(const StarConfig& cfg, const KappaFn& kappa = {});

// |V1 - rho I(t,s)| / |V1| and |V2 - rho I(t~,s~)| / |V2| at matched grids.
double check_equivalence_v1(const StarConfig& cfg, const QuadratureSpec& spec,
                            const KappaFn& kappa = {});
double check_equivalence_v2(const StarConfig& cfg, const QuadratureSpec& spec,
                            const KappaFn& kappa = {});

}  // namespace starstar
