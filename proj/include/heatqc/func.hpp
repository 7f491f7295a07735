#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace heatqc {

/// A scalar function handle for the diagnostic operations: evaluation plus
/// the structural hints the quadrature layer can exploit.
struct Func {
  std::function<double(double)> eval;

  /// Kinks, jumps, or integrable singularities; panels are split here.
  std::vector<double> breakpoints{};

  /// Optional analytic primitive: integral over [a, b]. Preferred over
  /// quadrature when present (used for singular log-means).
  std::function<double(double, double)> integral{};

  /// Uniform bound used to certify convolution tails when support is full.
  double sup_bound = std::numeric_limits<double>::infinity();

  /// Compact support, when the function vanishes outside an interval.
  std::optional<std::pair<double, double>> support{};
};

inline Func constant_func(double c) {
  Func f;
  f.eval = [c](double) { return c; };
  f.integral = [c](double a, double b) { return c * (b - a); };
  f.sup_bound = std::fabs(c);
  return f;
}

}  // namespace heatqc
