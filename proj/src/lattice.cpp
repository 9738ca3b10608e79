#include "starstar/lattice.hpp"

#include <cmath>

namespace starstar {

namespace {

constexpr int kMaxSites = 3;
constexpr int kMaxComponents = 6;

// sqrt of a single-spin weight. Only defined in the real-nome regime, where
// S is real and >= 0 up to roundoff; anything grossly complex is a branch
// ambiguity and raises.
double sqrt_single_spin(Complex s) {
  const double scale = std::abs(s);
  if (std::abs(s.imag()) > 1e-10 * scale)
    throw BranchError(
        "weight_wbar: single-spin weight is not numerically real; the square "
        "root branch is only fixed in the real-nome regime");
  return std::sqrt(std::max(s.real(), 0.0));
}

}  // namespace

void RapidityData::require_regime(const EllipticNomes& nomes) const {
  const double band = nomes.eta_re();
  const double alphas[4] = {alpha1(), alpha2(), alpha3(), alpha4()};
  for (const double a : alphas)
    if (!(a > 0.0) || !(a < band))
      throw RegimeError(
          "RapidityData: all rapidity differences must lie strictly inside "
          "(0, Re eta)");
}

void StarConfig::require_consistent() const {
  const int nn = a.n();
  if (b.n() != nn || c.n() != nn || d.n() != nn)
    throw ConfigError("StarConfig: corner spins must share the same n");
}

Complex weight_w_product(Complex alpha, std::span<const double> x,
                         std::span<const double> y,
                         const EllipticNomes& nomes) {
  if (x.size() != y.size())
    throw ConfigError("weight_w_product: spin dimension mismatch");
  const Complex shift = kI * alpha;
  Complex prod = 1.0;
  for (const double xj : x)
    for (const double yk : y) prod *= phi(Complex(xj - yk, 0.0) + shift, nomes);
  return prod;
}

Complex weight_w(double alpha, const Spin& x, const Spin& y,
                 const EllipticNomes& nomes, const KappaFn& kappa) {
  if (x.n() != y.n()) throw ConfigError("weight_w: spin dimension mismatch");
  if (!(alpha > -nomes.eta_re()) || !(alpha < nomes.eta_re()))
    throw RegimeError("weight_w: alpha must lie in (-Re eta, Re eta)");
  Complex val =
      weight_w_product(Complex(alpha, 0.0), x.components(), y.components(), nomes);
  if (kappa) val *= 1.0 / kappa(alpha);
  return val;
}

Complex weight_wbar(double alpha, const Spin& x, const Spin& y,
                    const EllipticNomes& nomes, const KappaFn& kappa) {
  if (x.n() != y.n()) throw ConfigError("weight_wbar: spin dimension mismatch");
  if (!(alpha > 0.0) || !(alpha < nomes.eta_re()))
    throw RegimeError("weight_wbar: alpha must lie in (0, Re eta)");
  const double sx = sqrt_single_spin(single_spin_s(x, nomes));
  const double sy = sqrt_single_spin(single_spin_s(y, nomes));
  Complex val = weight_w_product(nomes.eta() - alpha, x.components(),
                                 y.components(), nomes);
  val *= sx * sy;
  if (kappa) val *= 1.0 / kappa(nomes.eta_re() - alpha);
  return val;
}

namespace {

// A spin slot in a patch: either one of the fixed boundary spins or the
// integrated spin of internal site `idx`.
struct SpinRef {
  bool internal = false;
  int idx = 0;
};

struct Edge {
  bool conjugated = false;  // Wbar edge (carries the sqrt(S) factors)
  double alpha = 0.0;       // the subscript of W / Wbar
  SpinRef from, to;
};

struct Patch {
  int sites = 0;
  int boundary_count = 0;
  std::vector<Edge> edges;
};

// Staircase chain: site k+1 occupies the top-right corner of site k. White
// sites carry the V1 edge pattern, black sites the V2 pattern; the shared
// edge between consecutive sites is emitted once (by the earlier site, whose
// top-right edge it is). Boundary slots are numbered in the order
// [TL, BL (first site), BR, TR (last site)] per site.
Patch build_chain(int sites, bool first_white, const RapidityData& rap) {
  Patch patch;
  patch.sites = sites;
  const double a1 = rap.alpha1();
  const double a2 = rap.alpha2();
  const double a3 = rap.alpha3();
  const double a4 = rap.alpha4();
  int next_boundary = 0;
  for (int k = 0; k < sites; ++k) {
    const bool white = first_white == (k % 2 == 0);
    const SpinRef center{true, k};
    const SpinRef tl{false, next_boundary++};
    const SpinRef bl = (k == 0) ? SpinRef{false, next_boundary++}
                                : SpinRef{true, k - 1};
    const SpinRef br{false, next_boundary++};
    const SpinRef tr = (k == sites - 1) ? SpinRef{false, next_boundary++}
                                        : SpinRef{true, k + 1};
    if (white) {
      if (k == 0) patch.edges.push_back({true, a1, bl, center});
      patch.edges.push_back({true, a2, tr, center});
      patch.edges.push_back({false, a3, center, tl});
      patch.edges.push_back({false, a4, center, br});
    } else {
      patch.edges.push_back({true, a1, center, tr});
      if (k == 0) patch.edges.push_back({true, a2, center, bl});
      patch.edges.push_back({false, a3, br, center});
      patch.edges.push_back({false, a4, tl, center});
    }
  }
  patch.boundary_count = next_boundary;
  return patch;
}

// Everything precomputable for a patch integrand: boundary sqrt(S) values,
// per-edge weight shifts and kappa normalizations. operator() evaluates the
// integrand at one quadrature node (the concatenated free angles of all
// internal sites).
class PatchIntegrand {
 public:
  PatchIntegrand(const Patch& patch, std::vector<const Spin*> boundary,
                 const EllipticNomes& nomes, const KappaFn& kappa)
      : patch_(patch), boundary_(std::move(boundary)), nomes_(nomes) {
    n_ = boundary_.front()->n();
    inv_kappa_s_ = 1.0 / kappa_s(n_, nomes_);
    sqrt_s_boundary_.reserve(boundary_.size());
    for (const Spin* spin : boundary_)
      sqrt_s_boundary_.push_back(sqrt_single_spin(
          spin_pair_product(spin->components(), nomes_) * inv_kappa_s_));
    edge_shift_.reserve(patch_.edges.size());
    edge_inv_kappa_.reserve(patch_.edges.size());
    for (const Edge& e : patch_.edges) {
      if (e.conjugated) {
        edge_shift_.push_back(nomes_.eta() - e.alpha);
        edge_inv_kappa_.push_back(
            kappa ? 1.0 / kappa(nomes_.eta_re() - e.alpha) : Complex(1.0));
      } else {
        edge_shift_.push_back(Complex(e.alpha, 0.0));
        edge_inv_kappa_.push_back(kappa ? 1.0 / kappa(e.alpha) : Complex(1.0));
      }
    }
  }

  int dims() const { return patch_.sites * (n_ - 1); }

  Complex operator()(std::span<const double> angles) const {
    double comps[kMaxSites][kMaxComponents];
    double sqrt_s_internal[kMaxSites];
    for (int site = 0; site < patch_.sites; ++site) {
      const std::span<const double> free =
          angles.subspan(static_cast<std::size_t>(site) * (n_ - 1),
                         static_cast<std::size_t>(n_ - 1));
      for (int j = 0; j < n_ - 1; ++j) comps[site][j] = free[j];
      comps[site][n_ - 1] = dependent_component(free);
      const std::span<const double> full(comps[site],
                                         static_cast<std::size_t>(n_));
      sqrt_s_internal[site] =
          sqrt_single_spin(spin_pair_product(full, nomes_) * inv_kappa_s_);
    }
    const auto resolve = [&](const SpinRef& ref) {
      return ref.internal
                 ? std::span<const double>(comps[ref.idx],
                                           static_cast<std::size_t>(n_))
                 : boundary_[static_cast<std::size_t>(ref.idx)]->components();
    };
    const auto sqrt_s = [&](const SpinRef& ref) {
      return ref.internal ? sqrt_s_internal[ref.idx]
                          : sqrt_s_boundary_[static_cast<std::size_t>(ref.idx)];
    };
    Complex val = 1.0;
    for (std::size_t e = 0; e < patch_.edges.size(); ++e) {
      const Edge& edge = patch_.edges[e];
      Complex edge_val =
          weight_w_product(edge_shift_[e], resolve(edge.from),
                           resolve(edge.to), nomes_);
      if (edge.conjugated) edge_val *= sqrt_s(edge.from) * sqrt_s(edge.to);
      edge_val *= edge_inv_kappa_[e];
      val *= edge_val;
    }
    return val;
  }

 private:
  Patch patch_;
  std::vector<const Spin*> boundary_;
  EllipticNomes nomes_;
  int n_ = 0;
  Complex inv_kappa_s_{};
  std::vector<double> sqrt_s_boundary_;
  std::vector<Complex> edge_shift_;
  std::vector<Complex> edge_inv_kappa_;
};

QuadratureReport integrate_patch(const Patch& patch,
                                 std::vector<const Spin*> boundary,
                                 const EllipticNomes& nomes,
                                 const QuadratureSpec& spec,
                                 const KappaFn& kappa) {
  const PatchIntegrand integrand(patch, std::move(boundary), nomes, kappa);
  if (spec.dims != integrand.dims())
    throw ConfigError(
        "quadrature spec dims must equal (n - 1) * internal sites");
  return integrate_torus(
      [&integrand](std::span<const double> x) { return integrand(x); }, spec);
}

QuadratureReport star_integral(const StarConfig& cfg,
                               const QuadratureSpec& spec,
                               const KappaFn& kappa, bool white) {
  cfg.require_consistent();
  if (cfg.n() > kMaxComponents)
    throw ConfigError("star integral: n must be <= 6");
  cfg.rap.require_regime(cfg.nomes);
  const Patch patch = build_chain(1, white, cfg.rap);
  // Boundary slot order for one site is [TL, BL, BR, TR] = [a, c, d, b].
  return integrate_patch(patch, {&cfg.a, &cfg.c, &cfg.d, &cfg.b}, cfg.nomes,
                         spec, kappa);
}

}  // namespace

QuadratureReport star_v1(const StarConfig& cfg, const QuadratureSpec& spec,
                         const KappaFn& kappa) {
  return star_integral(cfg, spec, kappa, /*white=*/true);
}

QuadratureReport star_v2(const StarConfig& cfg, const QuadratureSpec& spec,
                         const KappaFn& kappa) {
  return star_integral(cfg, spec, kappa, /*white=*/false);
}

double star_star_residual(const StarConfig& cfg, const QuadratureSpec& spec,
                          const KappaFn& kappa) {
  cfg.require_consistent();
  cfg.rap.require_regime(cfg.nomes);
  const double dv = cfg.rap.v_prime - cfg.rap.v;
  const double du = cfg.rap.u_prime - cfg.rap.u;
  const double band = cfg.nomes.eta_re();
  if (!(std::abs(dv) < band) || !(std::abs(du) < band))
    throw RegimeError(
        "star_star_residual: |v'-v| and |u'-u| must be smaller than Re eta");
  const Complex v1 = star_v1(cfg, spec, kappa).value;
  const Complex v2 = star_v2(cfg, spec, kappa).value;
  const Complex lhs = weight_w(dv, cfg.d, cfg.c, cfg.nomes, kappa) *
                      weight_w(du, cfg.d, cfg.b, cfg.nomes, kappa) * v1;
  const Complex rhs = weight_w(dv, cfg.b, cfg.a, cfg.nomes, kappa) *
                      weight_w(du, cfg.c, cfg.a, cfg.nomes, kappa) * v2;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

QuadratureReport partition_function(int width, int height,
                                    const std::vector<Spin>& boundary,
                                    const RapidityData& rap,
                                    const EllipticNomes& nomes,
                                    const QuadratureSpec& spec,
                                    const KappaFn& kappa, PatchColor color) {
  if (width < 1 || height < 1 || std::min(width, height) != 1)
    throw ConfigError(
        "partition_function: only staircase chains (1 x K or K x 1) are "
        "supported");
  const int sites = width * height;
  if (sites > kMaxSites)
    throw ConfigError("partition_function: at most 3 internal sites");
  if (boundary.size() != static_cast<std::size_t>(2 * sites + 2))
    throw ConfigError("partition_function: need exactly 2*sites + 2 boundary spins");
  const int n = boundary.front().n();
  for (const Spin& spin : boundary)
    if (spin.n() != n)
      throw ConfigError("partition_function: boundary spins must share n");
  if (n * sites > kMaxComponents)
    throw ConfigError("partition_function: n * sites must be <= 6");
  rap.require_regime(nomes);
  const Patch patch =
      build_chain(sites, color == PatchColor::white_first, rap);
  std::vector<const Spin*> refs;
  refs.reserve(boundary.size());
  for (const Spin& spin : boundary) refs.push_back(&spin);
  return integrate_patch(patch, std::move(refs), nomes, spec, kappa);
}

}  // namespace starstar
