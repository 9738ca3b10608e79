#pragma once

#include <vector>

#include "starstar/common.hpp"
#include "starstar/errors.hpp"

namespace starstar {

inline constexpr double kDefaultTruncEps = 1e-17;

// The nome pair (p, q) together with the derived crossing parameter
//
//   eta = -Log(p q) / 2   (principal branch)
//
// and the truncation threshold shared by every infinite-product evaluation.
// The constructor also tabulates the factors q^(2j+1) p^(2k+1) used by the
// double-product form of Phi, ordered by shell j+k and cut once a factor's
// magnitude drops below trunc_eps. Instances are immutable after
// construction and safe to share between threads.
class EllipticNomes {
 public:
  EllipticNomes(Complex p, Complex q, double trunc_eps = kDefaultTruncEps);

  Complex p() const { return p_; }
  Complex q() const { return q_; }
  Complex pq() const { return pq_; }
  Complex eta() const { return eta_; }
  double eta_re() const { return eta_.real(); }
  double trunc_eps() const { return trunc_eps_; }

  // A denominator factor with magnitude below this threshold counts as a
  // vanishing factor (a pole hit) rather than harmless roundoff.
  double pole_tol() const { return pole_tol_; }

  // q^(2j+1) p^(2k+1) for j,k >= 0 in (j+k)-shell order, |factor| >= trunc_eps.
  const std::vector<Complex>& phi_factors() const { return phi_factors_; }

  // Same truncation policy with the nomes exchanged.
  EllipticNomes swapped() const { return EllipticNomes(q_, p_, trunc_eps_); }

 private:
  Complex p_, q_, pq_, eta_;
  double trunc_eps_, pole_tol_;
  std::vector<Complex> phi_factors_;
};

}  // namespace starstar
