#include "pcrfle/kernel.hpp"

#include "pcrfle/errors.hpp"
#include "pcrfle/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace pcrfle {

KernelSpec::KernelSpec(KernelFamily family, double shape) : family_(family), shape_(shape) {
  if (family_ == KernelFamily::truncated_gaussian && !(shape_ > 0.0))
    throw InvalidInput("truncated_gaussian shape h must be positive");
  if (family_ != KernelFamily::truncated_gaussian)
    shape_ = default_gaussian_shape;
}

KernelSpec KernelSpec::from_name(const std::string &name, double shape) {
  if (name == "indicator")
    return indicator();
  if (name == "triangular")
    return triangular();
  if (name == "truncated_gaussian")
    return truncated_gaussian(shape);
  throw InvalidInput("unknown kernel family '" + name +
                     "' (expected indicator, triangular or truncated_gaussian)");
}

std::string KernelSpec::name() const {
  switch (family_) {
  case KernelFamily::indicator: return "indicator";
  case KernelFamily::triangular: return "triangular";
  case KernelFamily::truncated_gaussian: return "truncated_gaussian";
  }
  return "unknown";
}

KernelMoments kernel_moments(const KernelSpec &kernel, std::size_t dim) {
  if (dim < 1)
    throw InvalidInput("kernel moments need dimension >= 1");
  using boost::math::quadrature::gauss_kronrod;
  const double d = static_cast<double>(dim);
  // Surface area of the unit sphere in R^d.
  const double sphere = 2.0 * std::pow(std::numbers::pi, d / 2.0) / gamma(d / 2.0);

  auto radial = [&](double power) {
    auto integrand = [&](double r) { return std::pow(r, power) * kernel(r); };
    double err = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14, &err);
    return value;
  };

  KernelMoments m;
  m.dim = dim;
  m.sigma0 = sphere * radial(d - 1.0);
  m.sigma1 = sphere * radial(d + 1.0) / d;
  return m;
}

} // namespace pcrfle
