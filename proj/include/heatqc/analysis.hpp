#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "heatqc/func.hpp"
#include "heatqc/quadrature.hpp"

namespace heatqc {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// (1/|I|) int_I |alpha - alpha_I| with alpha_I the integral mean. Uses the
/// handle's analytic primitive for the mean when present (log-singular means
/// lose adaptive accuracy exactly where it matters).
double mean_oscillation(const Func& alpha, Interval I, const QuadratureConfig& cfg);

/// Integral mean of the handle over I.
double func_mean(const Func& alpha, Interval I, const QuadratureConfig& cfg);

struct OscillationReport {
  std::vector<std::pair<double, double>> per_scale;    // (delta, sup MO at that scale)
  double bmo_norm_estimate = 0.0;                      // overall sup; a lower bound
  std::vector<std::pair<double, double>> vmo_modulus;  // non-decreasing in delta
  double ainfty_ratio_sup = 1.0;
  std::vector<std::pair<double, double>> jn_tail_samples;
  double jn_slope = 0.0;  // fitted slope of log fraction vs lambda
};

/// For each scale delta: sup of mean_oscillation over sampled subintervals of
/// the window with |I| <= delta. Stratified random centers (seeded), dyadic
/// endpoints, and intervals centered on the handle's breakpoints.
OscillationReport bmo_vmo_profile(const Func& alpha, Interval window,
                                  std::span<const double> scales, int samples_per_scale,
                                  const QuadratureConfig& cfg, std::uint64_t seed);

/// (mean of omega over I) / exp(mean of log omega over I); >= 1 by Jensen.
double ainfty_ratio(const WeightSpec& spec, Interval I, const QuadratureConfig& cfg);

/// Distribution tail |{x in I : |alpha - alpha_I| > lambda}| / |I| by midpoint
/// measure-sampling with n_samples points.
std::vector<std::pair<double, double>> jn_tail(const Func& alpha, Interval I,
                                               std::span<const double> lambdas, long n_samples);

/// Least-squares slope of log(fraction) against lambda over the positive tail.
double jn_decay_slope(std::span<const std::pair<double, double>> samples);

/// sup over s > 0 of (1/2s) int_{|x-y|<s} |g 1_restriction|; multi-start log
/// grid plus golden-section refinement. Returns a certified lower bound.
double maximal_function(const Func& g, double x, Interval restriction,
                        const QuadratureConfig& cfg);

/// ( int_{s_min}^{s_max} (g * gamma_s)(x)^2 ds/s )^{1/2} for a zero-mean
/// kernel, length-scale dilation. Throws ZeroMeanRequired when m0 != 0.
double lp_square_function(const Func& g, const Kernel& k, double x, double s_min, double s_max,
                          const QuadratureConfig& cfg);

/// alpha = log omega as a handle, with analytic primitives where the family
/// admits them.
Func log_weight(const WeightSpec& spec);

/// omega - c as a handle (used for square-function inputs).
Func weight_minus_const(const WeightSpec& spec, double c);

/// Full diagnostic report for a weight: oscillation profile of log omega plus
/// the A_infty ratio swept over sampled intervals and the JN tail.
OscillationReport analyze_weight(const WeightSpec& spec, Interval window,
                                 std::span<const double> scales, int samples_per_scale,
                                 std::span<const double> lambdas, long jn_samples,
                                 const QuadratureConfig& cfg, std::uint64_t seed);

}  // namespace heatqc
