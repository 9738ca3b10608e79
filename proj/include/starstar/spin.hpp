#pragma once

#include <span>
#include <vector>

#include "starstar/common.hpp"
#include "starstar/errors.hpp"

namespace starstar {

// Tolerance on the zero-sum constraint of a spin's components.
inline constexpr double kSpinSumTol = 1e-12;

// An n-component continuous spin: angles in [0, pi)^n summing to zero mod pi.
// Only n-1 components are free; the last one is usually reconstructed with
// from_free(). Validation happens once, at construction.
class Spin {
 public:
  explicit Spin(std::vector<double> components);

  // Builds a spin from its free components, appending the dependent one.
  static Spin from_free(std::span<const double> free_components);

  int n() const { return static_cast<int>(comps_.size()); }
  std::span<const double> components() const { return comps_; }
  double operator[](int j) const { return comps_[static_cast<std::size_t>(j)]; }

  // Componentwise negation mod pi. Again a valid spin; useful because the
  // two star integrals exchange under it.
  Spin negated() const;

  bool operator==(const Spin&) const = default;

 private:
  std::vector<double> comps_;
};

// The representative of -(x_1 + ... + x_{n-1}) mod pi in [0, pi), i.e. the
// dependent component completing the zero-sum constraint.
double dependent_component(std::span<const double> free_components);

}  // namespace starstar
