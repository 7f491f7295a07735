#include "heatqc/kernels.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "heatqc/errors.hpp"

namespace heatqc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvSqrtPi = 1.0 / std::sqrt(M_PI);

// Envelopes are padded by a hair so that the bound survives rounding at the
// touching points (e.g. |psi| meets its envelope exactly at |x| = 1).
constexpr double kEnvelopePad = 1.0 + 1e-9;

double gauss(double x) { return kInvSqrtPi * std::exp(-x * x); }

Kernel make_gaussian(std::string name) {
  Kernel k;
  k.name = std::move(name);
  k.profile = gauss;
  k.m0 = 1.0;
  k.m1 = 0.0;
  k.m2 = 0.5;
  k.abs_integral = 1.0;
  k.envelope_amp = kInvSqrtPi * kEnvelopePad;
  k.envelope_rate = 1.0;
  k.parity = Parity::even;
  k.support_radius = kInf;
  return k;
}

Kernel make_gauss_dx(std::string name) {
  Kernel k;
  k.name = std::move(name);
  k.profile = [](double x) { return -2.0 * x * gauss(x); };
  k.m0 = 0.0;
  k.m1 = -1.0;
  k.m2 = 0.0;
  k.abs_integral = 2.0 * kInvSqrtPi;
  k.envelope_amp = kInvSqrtPi * kEnvelopePad;  // 2|x| <= 1 + x^2
  k.envelope_rate = 1.0;
  k.parity = Parity::odd;
  k.support_radius = kInf;
  return k;
}

Kernel make_gauss_dxx() {
  Kernel k;
  k.name = "heat_dxx";
  k.profile = [](double x) { return (4.0 * x * x - 2.0) * gauss(x); };
  k.m0 = 0.0;
  k.m1 = 0.0;
  k.m2 = 2.0;
  k.abs_integral = 4.0 * std::sqrt(2.0) * std::exp(-0.5) * kInvSqrtPi;
  k.envelope_amp = 4.0 * kInvSqrtPi * kEnvelopePad;
  k.envelope_rate = 1.0;
  k.parity = Parity::even;
  k.support_radius = kInf;
  return k;
}

Kernel make_phi_tilde() {
  Kernel k;
  k.name = "phi_tilde";
  k.profile = [](double x) { return x * x * gauss(x); };
  k.m0 = 0.5;
  k.m1 = 0.0;
  k.m2 = 0.75;
  k.abs_integral = 0.5;
  k.envelope_amp = kInvSqrtPi * kEnvelopePad;
  k.envelope_rate = 1.0;
  k.parity = Parity::even;
  k.support_radius = kInf;
  return k;
}

Kernel make_eta() {
  const double amp = 4.0 * std::sqrt(2.0) * kInvSqrtPi;
  Kernel k;
  k.name = "eta";
  k.profile = [amp](double x) { return -amp * x * std::exp(-2.0 * x * x); };
  k.m0 = 0.0;
  k.m1 = -1.0;
  k.m2 = 0.0;
  k.abs_integral = 2.0 * std::sqrt(2.0) * kInvSqrtPi;
  k.envelope_amp = 2.0 * std::sqrt(2.0) * kInvSqrtPi * kEnvelopePad;
  k.envelope_rate = 2.0;
  k.parity = Parity::odd;
  k.support_radius = kInf;
  return k;
}

Kernel make_ba_box() {
  Kernel k;
  k.name = "ba_box";
  k.profile = [](double x) { return std::fabs(x) <= 1.0 ? 0.5 : 0.0; };
  k.m0 = 1.0;
  k.m1 = 0.0;
  k.m2 = 1.0 / 3.0;
  k.abs_integral = 1.0;
  k.envelope_amp = 0.25 * std::exp(1.0) * kEnvelopePad;
  k.envelope_rate = 1.0;
  k.parity = Parity::even;
  k.support_radius = 1.0;
  k.discontinuities = {-1.0, 1.0};
  return k;
}

const std::map<std::string, Kernel, std::less<>>& registry() {
  static const std::map<std::string, Kernel, std::less<>> reg = [] {
    std::map<std::string, Kernel, std::less<>> m;
    m.emplace("heat", make_gaussian("heat"));
    m.emplace("phi", make_gaussian("phi"));
    m.emplace("psi", make_gauss_dx("psi"));
    m.emplace("heat_dx", make_gauss_dx("heat_dx"));
    m.emplace("heat_dxx", make_gauss_dxx());
    m.emplace("phi_tilde", make_phi_tilde());
    m.emplace("eta", make_eta());
    m.emplace("ba_box", make_ba_box());
    m.emplace("ba_sign", ba_sign_kernel(2.0));
    return m;
  }();
  return reg;
}

}  // namespace

Kernel ba_sign_kernel(double r) {
  if (!(r > 0.0)) throw DomainError("ba_sign kernel requires r > 0");
  Kernel k;
  k.name = "ba_sign";
  k.profile = [r](double x) {
    if (x > -1.0 && x < 0.0) return 0.5 * r;
    if (x > 0.0 && x < 1.0) return -0.5 * r;
    return 0.0;
  };
  k.m0 = 0.0;
  k.m1 = -0.5 * r;
  k.m2 = 0.0;
  k.abs_integral = r;
  k.envelope_amp = 0.25 * r * std::exp(1.0) * kEnvelopePad;
  k.envelope_rate = 1.0;
  k.parity = Parity::odd;
  k.support_radius = 1.0;
  k.discontinuities = {-1.0, 0.0, 1.0};
  return k;
}

double dilation_length(ScaleKind kind, double scale) {
  if (!(scale > 0.0)) throw DomainError("dilation requires a positive scale");
  return kind == ScaleKind::time_scale ? std::sqrt(scale) : scale;
}

double Kernel::eval(ScaleKind kind, double scale, double x) const {
  const double len = dilation_length(kind, scale);
  return profile(x / len) / len;
}

bool Kernel::compact_support() const { return std::isfinite(support_radius); }

const Kernel& kernel(std::string_view name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw DomainError("unknown kernel: " + std::string(name));
  return it->second;
}

std::vector<std::string> kernel_names() {
  std::vector<std::string> names;
  for (const auto& [name, k] : registry()) names.push_back(name);
  return names;
}

KernelMoments kernel_moments(const Kernel& k) { return {k.m0, k.m1, k.m2}; }

KernelMoments kernel_moments_quadrature(const Kernel& k, const QuadratureConfig& cfg) {
  const double r = k.compact_support() ? k.support_radius : 30.0;
  // Seed panels at dyadic distances so the profile's O(1) features are never
  // buried inside one wide panel.
  std::vector<double> cuts = k.discontinuities;
  for (double c : {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0, 16.0, -16.0}) cuts.push_back(c);
  auto moment = [&](int p) {
    auto f = [&k, p](double x) {
      double xp = 1.0;
      for (int i = 0; i < p; ++i) xp *= x;
      return xp * k.profile(x);
    };
    QuadratureResult q = integrate_split(f, -r, r, cuts, cfg);
    if (q.status == QuadStatus::tolerance_not_met && q.error_estimate > 1e-6)
      throw QuadratureError("kernel moment quadrature failed for " + k.name, q.value);
    return q.value;
  };
  return {moment(0), moment(1), moment(2)};
}

double eta_identity_residual(std::span<const double> xs, const QuadratureConfig& cfg) {
  if (xs.empty()) throw DomainError("eta_identity_residual: empty grid");
  const Kernel& eta_k = kernel("eta");
  const Kernel& heat = kernel("heat");
  const Kernel& heat_dx = kernel("heat_dx");

  double sup = 0.0;
  for (double x : xs) {
    // Both factors decay like e^{-2 y^2}; |y| <= 20 + |x| captures the mass
    // far below any tolerance in use.
    const double r = 20.0 + std::fabs(x);
    auto f = [&](double y) {
      return eta_k.profile(y) * heat.eval(ScaleKind::time_scale, 0.5, x - y);
    };
    std::vector<double> cuts;
    for (double c : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      cuts.push_back(c);
      cuts.push_back(x + c);
    }
    QuadratureResult q = integrate_split(f, -r, r, cuts, cfg);
    if (q.status == QuadStatus::tolerance_not_met && q.error_estimate > 1e-8)
      throw QuadratureError("eta identity convolution did not converge", q.value);
    const double lhs = heat_dx.profile(x);
    sup = std::max(sup, std::fabs(lhs - q.value));
  }
  return sup;
}

}  // namespace heatqc
