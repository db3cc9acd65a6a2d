#pragma once

namespace pcrfle {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
/// with the reflection formula below 1/2. Relative error around 1e-15 on
/// the positive axis. Poles (0, -1, -2, ...) return NaN.
double gamma(double x);

/// Normalizing constant of the fractional Laplacian,
/// s * 4^s * Gamma((d + 2s) / 2) / Gamma(1 - s). Requires 0 < s < 1, d >= 1.
double frac_laplacian_constant(double s, int dim);

} // namespace pcrfle
