#pragma once

#include "starstar/lattice.hpp"
#include "starstar/rng.hpp"

namespace starstar {

// Attempt cap for the rejection step in sample_rapidities.
inline constexpr int kRegimeRejectionCap = 10000;

// Uniform spin: n-1 free components uniform on [0, pi), dependent last one.
Spin sample_spin(Xoshiro256pp& rng, int n);

// Rapidity differences alpha_1, alpha_2, alpha_3 uniform on
// (0.1, 0.9) * Re eta; alpha_4 = alpha_1 + alpha_2 - alpha_3 must land in the
// same window or the triple is rejected and redrawn (RegimeError after
// kRegimeRejectionCap attempts). Gauge v = 0, so u = alpha_1, u' = alpha_3,
// v' = alpha_3 - alpha_2.
RapidityData sample_rapidities(Xoshiro256pp& rng, const EllipticNomes& nomes);

// A full star draw: rapidities first, then the corner spins a, b, c, d, in
// that fixed order of stream consumption.
StarConfig sample_regime(Xoshiro256pp& rng, int n, const EllipticNomes& nomes);

}  // namespace starstar
