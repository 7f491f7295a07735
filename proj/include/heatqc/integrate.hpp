#pragma once

#include <functional>
#include <span>
#include <vector>

namespace heatqc {

/// Tolerances and budgets for the adaptive integrator and the convolution
/// layer built on top of it.
struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_panels = 4096;
  int annulus_budget = 16;   // dyadic shells 2^n * scale before truncation
  bool oracle_mode = false;  // route convolutions through the dense fixed-grid rule

  void validate() const;
};

enum class QuadStatus {
  ok,
  tolerance_not_met,        // panel budget exhausted; value is the best estimate
  non_doubling_suspected,   // shell masses grow super-geometrically; tail bound unsafe
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;   // certified estimate for the integrated part
  int panels_used = 0;
  double truncation_bound = 0.0; // bound on everything that was not integrated
  QuadStatus status = QuadStatus::ok;

  bool ok() const { return status == QuadStatus::ok; }
  double total_error() const { return error_estimate + truncation_bound; }
};

/// One smooth piece of an integral: integrate f over [a, b].
struct Region {
  double a;
  double b;
  std::function<double(double)> f;
};

/// Adaptive Gauss-Kronrod (7,15) with bisection over a max-error heap seeded
/// with the given regions. Stops when error <= max(abs_tol, rel_tol*|value|)
/// or when max_panels is reached (status = tolerance_not_met).
QuadratureResult integrate_regions(std::vector<Region> seeds, const QuadratureConfig& cfg);

/// Single-interval convenience wrapper.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg);

/// Same, with the interval pre-split at the listed interior breakpoints.
QuadratureResult integrate_split(const std::function<double(double)>& f, double a, double b,
                                 std::span<const double> breaks, const QuadratureConfig& cfg);

/// Composite midpoint rule on n uniform cells. Intentionally naive; used as the
/// independent cross-check channel.
double integrate_dense(const std::function<double(double)>& f, double a, double b, long n);

/// Closed-form tail of the standard decay envelope A(1+u^2)e^{-b u^2}:
/// returns A * integral over |u| >= r of (1+u^2)e^{-b u^2} du.
double envelope_tail_integral(double amp, double rate, double r);

/// Sorted interior breakpoints of [a, b], deduplicated.
std::vector<double> clip_breaks(std::span<const double> breaks, double a, double b);

}  // namespace heatqc
