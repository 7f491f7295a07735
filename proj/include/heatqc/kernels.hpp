#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heatqc/integrate.hpp"

namespace heatqc {

/// The two dilation conventions used side by side in the construction.
/// TimeScale (heat-equation sections): gamma_s(x) = s^{-1/2} gamma(x s^{-1/2}).
/// LengthScale (extension sections):   gamma_t(x) = t^{-1} gamma(x / t).
/// For the Gaussian family, LengthScale at t coincides with TimeScale at t^2.
enum class ScaleKind { time_scale, length_scale };

enum class Parity { even, odd, none };

/// A convolution profile together with the analytic metadata the quadrature
/// layer needs: moments, decay envelope |gamma(x)| <= A (1+x^2) e^{-b x^2},
/// jump locations, and support radius (infinite for the Gaussian family).
struct Kernel {
  std::string name;
  std::function<double(double)> profile;
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double abs_integral = 0.0;
  double envelope_amp = 0.0;   // A
  double envelope_rate = 0.0;  // b
  Parity parity = Parity::none;
  double support_radius = 0.0;  // +inf when the profile has full support
  std::vector<double> discontinuities;  // in profile coordinates

  /// Dilated profile value, exact formula. Throws DomainError if scale <= 0.
  double eval(ScaleKind kind, double scale, double x) const;

  bool compact_support() const;
};

/// Length unit of the dilation: scale for LengthScale, sqrt(scale) for TimeScale.
double dilation_length(ScaleKind kind, double scale);

/// Registry lookup by name: "heat", "phi", "psi", "phi_tilde", "eta",
/// "heat_dx", "heat_dxx", "ba_box", "ba_sign". Throws DomainError otherwise.
const Kernel& kernel(std::string_view name);

std::vector<std::string> kernel_names();

/// Classical sign kernel (r/2) 1_(-1,0) - (r/2) 1_(0,1) for arbitrary r > 0.
/// The registry entry "ba_sign" uses r = 2.
Kernel ba_sign_kernel(double r);

struct KernelMoments {
  double m0, m1, m2;
};

/// Cached analytic moments.
KernelMoments kernel_moments(const Kernel& k);

/// Verification mode: recompute the moments by quadrature over the decay range.
KernelMoments kernel_moments_quadrature(const Kernel& k, const QuadratureConfig& cfg);

/// sup over the grid of |Phi'(x) - (eta * Phi_{1/2})(x)|, the spatial-side
/// check of the identity defining eta. The convolution runs through the
/// adaptive integrator; quadrature failures propagate as QuadratureError.
double eta_identity_residual(std::span<const double> xs, const QuadratureConfig& cfg);

}  // namespace heatqc
