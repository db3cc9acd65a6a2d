#include "pcrfle/special_functions.hpp"

#include "pcrfle/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace pcrfle {

namespace {

constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

double gamma(double x) {
  if (std::isnan(x))
    return x;
  if (x <= 0.0 && x == std::floor(x))
    return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.5)
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));

  x -= 1.0;
  double a = lanczos_coef[0];
  const double t = x + lanczos_g + 0.5;
  for (std::size_t i = 1; i < lanczos_coef.size(); ++i)
    a += lanczos_coef[i] / (x + static_cast<double>(i));
  // Split the power to delay overflow for large arguments.
  const double half = std::pow(t, (x + 0.5) / 2.0);
  return std::sqrt(2.0 * std::numbers::pi) * half * half * std::exp(-t) * a;
}

double frac_laplacian_constant(double s, int dim) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidInput("s must lie in (0,1)");
  if (dim < 1)
    throw InvalidInput("dimension must be >= 1");
  const double d = static_cast<double>(dim);
  return s * std::pow(2.0, 2.0 * s) * gamma((d + 2.0 * s) / 2.0) / gamma(1.0 - s);
}

} // namespace pcrfle
