#pragma once

#include <complex>

#include "heatqc/quadrature.hpp"

namespace heatqc {

/// Heat solution u = omega * Phi_s and its spatial derivatives at (x, s),
/// s in the time-scale convention. Errors are certified per component.
struct HeatSolution {
  double x = 0.0, s = 0.0;
  double u = 0.0, u_x = 0.0, u_xx = 0.0;
  double err_u = 0.0, err_ux = 0.0, err_uxx = 0.0;
};

HeatSolution heat_solution(const WeightSpec& spec, double x, double s, const QuadratureConfig& cfg);

/// Boundary extension values U = f * phi_t, V = f * psi_t (length scale).
struct ExtensionPoint {
  double U = 0.0, V = 0.0;
  double err_U = 0.0, err_V = 0.0;
};

ExtensionPoint extension_point(const WeightSpec& spec, double x, double t,
                               const QuadratureConfig& cfg);

/// Closed-form derivative matrix: U_x = u(x, t^2), V_x = t u'(x, t^2),
/// U_t = V_x / 2 (shared path, exact), V_t = 2 (omega * phi_tilde_t)(x).
/// No finite differences anywhere on this path.
struct DerivativeMatrix {
  double U_x = 0.0, U_t = 0.0, V_x = 0.0, V_t = 0.0;
  double err_U_x = 0.0, err_U_t = 0.0, err_V_x = 0.0, err_V_t = 0.0;
};

DerivativeMatrix derivative_matrix(const WeightSpec& spec, double x, double t,
                                   const QuadratureConfig& cfg);

struct ExtensionSample {
  double x = 0.0, t = 0.0;
  double U = 0.0, V = 0.0;
  double U_x = 0.0, U_t = 0.0, V_x = 0.0, V_t = 0.0;
  std::complex<double> mu{0.0, 0.0};
  double K = 1.0;
  double J = 0.0;
  double error_budget = 0.0;  // first-order bound on |mu| from quadrature errors
  bool flagged = false;       // |mu| within error budget of 1; kept, not rejected
};

/// Complex dilatation sample from the closed-form derivatives. Asserts J > 0
/// and |mu| < 1 up to the propagated budget; throws NonQuasiconformalSample
/// when the budget cannot explain a violation. with_position additionally
/// fills U and V (costs two more convolutions).
ExtensionSample beltrami(const WeightSpec& spec, double x, double t, const QuadratureConfig& cfg,
                         bool with_position = false);

/// Pure algebra from a precomputed derivative matrix (shared with the box sweeps).
ExtensionSample beltrami_from(const DerivativeMatrix& d, double x, double t);

}  // namespace heatqc
