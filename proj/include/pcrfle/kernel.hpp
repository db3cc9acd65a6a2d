#pragma once

#include <cmath>
#include <cstddef>
#include <string>

namespace pcrfle {

enum class KernelFamily { indicator, triangular, truncated_gaussian };

/// Radial profile eta: [0, inf) -> [0, inf), supported on [0, 1] and
/// non-increasing there.
class KernelSpec {
public:
  static constexpr double default_gaussian_shape = 0.4;

  KernelSpec() = default;
  /// Throws InvalidInput if shape <= 0 for the truncated Gaussian.
  explicit KernelSpec(KernelFamily family, double shape = default_gaussian_shape);

  static KernelSpec indicator() { return KernelSpec(KernelFamily::indicator); }
  static KernelSpec triangular() { return KernelSpec(KernelFamily::triangular); }
  static KernelSpec truncated_gaussian(double h = default_gaussian_shape) {
    return KernelSpec(KernelFamily::truncated_gaussian, h);
  }

  /// Parses "indicator", "triangular" or "truncated_gaussian".
  static KernelSpec from_name(const std::string &name, double shape = default_gaussian_shape);

  KernelFamily family() const { return family_; }
  double shape() const { return shape_; }
  std::string name() const;

  double operator()(double t) const {
    if (t < 0.0 || t > 1.0)
      return 0.0;
    switch (family_) {
    case KernelFamily::indicator: return 1.0;
    case KernelFamily::triangular: return 1.0 - t;
    case KernelFamily::truncated_gaussian: return std::exp(-t * t / (2.0 * shape_ * shape_));
    }
    return 0.0;
  }

  bool operator==(const KernelSpec &) const = default;

private:
  KernelFamily family_ = KernelFamily::truncated_gaussian;
  double shape_ = default_gaussian_shape;
};

/// sigma0 = int eta(|x|) dx and sigma1 = (1/d) int |y|^2 eta(|y|) dy over R^d.
struct KernelMoments {
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  std::size_t dim = 1;
};

/// Radial reduction to a 1-D integral on [0, 1], absolute error <= 1e-10.
KernelMoments kernel_moments(const KernelSpec &kernel, std::size_t dim);

} // namespace pcrfle
