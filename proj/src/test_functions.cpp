#include "pcrfle/test_functions.hpp"

#include "pcrfle/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pcrfle {

bool operator==(const PowerFamily &a, const PowerFamily &b) { return a.alpha == b.alpha; }
bool operator==(const PiecewiseConstantFamily &a, const PiecewiseConstantFamily &b) {
  return a.breakpoints == b.breakpoints && a.values == b.values;
}
bool operator==(const PiecewisePolynomialFamily &a, const PiecewisePolynomialFamily &b) {
  return a.breakpoints == b.breakpoints && a.coefficients == b.coefficients;
}
bool operator==(const BumpsFamily &a, const BumpsFamily &b) {
  return a.locations == b.locations && a.heights == b.heights && a.widths == b.widths;
}

namespace {

void check_breakpoints(const std::string &name, const std::vector<double> &bp, std::size_t pieces,
                       double lower, double upper) {
  if (bp.size() < 2)
    throw InvalidInput(name + ": need at least two breakpoints");
  if (pieces != bp.size() - 1)
    throw InvalidInput(name + ": " + std::to_string(bp.size()) + " breakpoints need " +
                       std::to_string(bp.size() - 1) + " pieces, got " + std::to_string(pieces));
  for (std::size_t i = 1; i < bp.size(); ++i)
    if (!(bp[i] > bp[i - 1]))
      throw InvalidInput(name + ": breakpoints must be strictly increasing");
  if (bp.front() != lower || bp.back() != upper)
    throw InvalidInput(name + ": breakpoints must start and end at the domain bounds");
}

/// Index of the piece (bp[i], bp[i+1]] holding x; x == bp[0] maps to piece 0.
std::size_t piece_of(const std::vector<double> &bp, double x) {
  const auto it = std::lower_bound(bp.begin() + 1, bp.end(), x);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - bp.begin() - 1,
                                                            static_cast<std::ptrdiff_t>(bp.size()) - 2));
}

double horner(const std::vector<double> &coef, double x) {
  double acc = 0.0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

} // namespace

TestFunction::TestFunction(std::string name, FunctionFamily family, double lower, double upper)
    : name_(std::move(name)), family_(std::move(family)), lower_(lower), upper_(upper) {
  if (!(lower_ < upper_))
    throw InvalidInput(name_ + ": domain lower bound must be below the upper bound");
  std::visit(
      [&](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          if (!(f.alpha > 0.0 && f.alpha < 1.0))
            throw InvalidInput(name_ + ": alpha must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, PiecewiseConstantFamily>) {
          check_breakpoints(name_, f.breakpoints, f.values.size(), lower_, upper_);
        } else if constexpr (std::is_same_v<T, PiecewisePolynomialFamily>) {
          check_breakpoints(name_, f.breakpoints, f.coefficients.size(), lower_, upper_);
          for (const auto &c : f.coefficients)
            if (c.empty())
              throw InvalidInput(name_ + ": empty coefficient list");
        } else {
          if (f.locations.empty() || f.locations.size() != f.heights.size() ||
              f.locations.size() != f.widths.size())
            throw InvalidInput(name_ + ": bump locations, heights and widths must have equal non-zero length");
          for (double w : f.widths)
            if (!(w > 0.0))
              throw InvalidInput(name_ + ": bump widths must be positive");
        }
      },
      family_);
}

std::string TestFunction::family_name() const {
  return std::visit(
      [](const auto &f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerFamily>)
          return "power";
        else if constexpr (std::is_same_v<T, PiecewiseConstantFamily>)
          return "piecewise_constant";
        else if constexpr (std::is_same_v<T, PiecewisePolynomialFamily>)
          return "piecewise_polynomial";
        else
          return "bumps";
      },
      family_);
}

double TestFunction::operator()(double x) const {
  if (!(x >= lower_ && x <= upper_))
    throw InvalidInput(name_ + ": x=" + std::to_string(x) + " outside the domain [" +
                       std::to_string(lower_) + ", " + std::to_string(upper_) + "]");
  return std::visit(
      [x](const auto &f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          return std::pow(std::abs(x), f.alpha);
        } else if constexpr (std::is_same_v<T, PiecewiseConstantFamily>) {
          return f.values[piece_of(f.breakpoints, x)];
        } else if constexpr (std::is_same_v<T, PiecewisePolynomialFamily>) {
          return horner(f.coefficients[piece_of(f.breakpoints, x)], x);
        } else {
          double total = 0.0;
          for (std::size_t j = 0; j < f.locations.size(); ++j)
            total += f.heights[j] * std::pow(1.0 + std::abs(x - f.locations[j]) / f.widths[j], -4.0);
          return total;
        }
      },
      family_);
}

Eigen::VectorXd TestFunction::evaluate(const Eigen::VectorXd &x) const {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out(i) = (*this)(x(i));
  return out;
}

std::vector<double> TestFunction::interior_breakpoints() const {
  const std::vector<double> *bp = nullptr;
  if (const auto *pc = std::get_if<PiecewiseConstantFamily>(&family_))
    bp = &pc->breakpoints;
  else if (const auto *pp = std::get_if<PiecewisePolynomialFamily>(&family_))
    bp = &pp->breakpoints;
  if (!bp)
    return {};
  return {bp->begin() + 1, bp->end() - 1};
}

std::vector<TestFunction> builtin_zoo() {
  return {
      TestFunction("f1", PowerFamily{0.5}, -1.0, 1.0),
      TestFunction("f2", PiecewiseConstantFamily{{0.0, 1.0, 2.0, 3.0, 5.0}, {1.0, 0.5, 2.0, -2.5}}, 0.0, 5.0),
      TestFunction("f3",
                   PiecewisePolynomialFamily{{0.0, 1.0, 2.0, 3.0, 5.0},
                                             {{0.0, 1.0}, {2.0, 0.0, 2.0}, {2.0, -1.0}, {-4.0, -2.0, 0.0, 0.2}}},
                   0.0, 5.0),
      TestFunction("f4",
                   BumpsFamily{{0.5, 1.3, 2.2, 3.1, 4.4}, {4.0, 5.0, 3.0, 4.0, 5.0}, {0.05, 0.1, 0.08, 0.1, 0.06}},
                   0.0, 5.0),
      TestFunction("step", PiecewiseConstantFamily{{0.0, 0.5, 1.0}, {1.0, 0.0}}, 0.0, 1.0),
  };
}

const TestFunction &find_function(const std::vector<TestFunction> &zoo, const std::string &name) {
  for (const auto &f : zoo)
    if (f.name() == name)
      return f;
  std::string known;
  for (const auto &f : zoo)
    known += (known.empty() ? "" : ", ") + f.name();
  throw InvalidInput("unknown truth '" + name + "' (known: " + known + ")");
}

} // namespace pcrfle
