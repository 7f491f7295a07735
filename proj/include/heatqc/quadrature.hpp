#pragma once

#include <span>
#include <utility>
#include <vector>

#include "heatqc/func.hpp"
#include "heatqc/integrate.hpp"
#include "heatqc/kernels.hpp"
#include "heatqc/weights.hpp"

namespace heatqc {

/// (omega * gamma_scale)(x) on the unbounded line: core interval plus dyadic
/// annuli, panels pre-split at kernel jumps and weight singularities, tail
/// certified from the kernel decay envelope and the measured/claimed doubling
/// growth of the weight. Honors cfg.oracle_mode by routing to the dense rule.
QuadratureResult convolve_point(const WeightSpec& spec, const Kernel& k, ScaleKind kind,
                                double scale, double x, const QuadratureConfig& cfg);

/// Elementwise convolve_point over (x, scale) pairs; per-point failures are
/// recorded in the results, not thrown.
std::vector<QuadratureResult> convolve_grid(const WeightSpec& spec, const Kernel& k,
                                            ScaleKind kind,
                                            std::span<const std::pair<double, double>> points,
                                            const QuadratureConfig& cfg);

/// (f * gamma_scale)(x) for the weight primitive f, evaluated in profile
/// coordinates: integral of f(x - L z) gamma(z) dz with L the dilation length.
QuadratureResult convolve_primitive_point(const WeightSpec& spec, const Kernel& k, ScaleKind kind,
                                          double scale, double x, const QuadratureConfig& cfg);

/// (g * gamma_scale)(x) for a generic function handle. Needs either compact
/// support or a finite sup bound to certify the tail.
QuadratureResult convolve_func_point(const Func& g, const Kernel& k, ScaleKind kind, double scale,
                                     double x, const QuadratureConfig& cfg);

/// Intentionally naive dense midpoint rule over [x - width*L, x + width*L],
/// split only at structural jumps; the independent cross-check channel.
double convolve_point_dense(const WeightSpec& spec, const Kernel& k, ScaleKind kind, double scale,
                            double x, double width = 40.0, long nodes = 2'000'000);

}  // namespace heatqc
