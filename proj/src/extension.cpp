#include "heatqc/extension.hpp"

#include <cmath>
#include <limits>

#include "heatqc/errors.hpp"

namespace heatqc {

namespace {

double checked_value(const QuadratureResult& q, const char* what) {
  if (q.status == QuadStatus::tolerance_not_met && q.total_error() > 1e-6)
    throw QuadratureError(std::string(what) + ": quadrature budget exhausted", q.value);
  return q.value;
}

}  // namespace

HeatSolution heat_solution(const WeightSpec& spec, double x, double s, const QuadratureConfig& cfg) {
  if (!(s > 0.0)) throw DomainError("heat_solution requires s > 0");
  const Kernel& heat = kernel("heat");
  const Kernel& heat_dx = kernel("heat_dx");
  const Kernel& heat_dxx = kernel("heat_dxx");

  HeatSolution h;
  h.x = x;
  h.s = s;
  const double rs = std::sqrt(s);

  QuadratureResult qu = convolve_point(spec, heat, ScaleKind::time_scale, s, x, cfg);
  h.u = checked_value(qu, "u");
  h.err_u = qu.total_error();

  // (Phi_s)' = s^{-1/2} (Phi')_s and (Phi_s)'' = s^{-1} (Phi'')_s.
  QuadratureResult qx = convolve_point(spec, heat_dx, ScaleKind::time_scale, s, x, cfg);
  h.u_x = checked_value(qx, "u_x") / rs;
  h.err_ux = qx.total_error() / rs;

  QuadratureResult qxx = convolve_point(spec, heat_dxx, ScaleKind::time_scale, s, x, cfg);
  h.u_xx = checked_value(qxx, "u_xx") / s;
  h.err_uxx = qxx.total_error() / s;
  return h;
}

ExtensionPoint extension_point(const WeightSpec& spec, double x, double t,
                               const QuadratureConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("extension_point requires t > 0");
  ExtensionPoint p;
  QuadratureResult qU =
      convolve_primitive_point(spec, kernel("phi"), ScaleKind::length_scale, t, x, cfg);
  p.U = checked_value(qU, "U");
  p.err_U = qU.total_error();
  QuadratureResult qV =
      convolve_primitive_point(spec, kernel("psi"), ScaleKind::length_scale, t, x, cfg);
  p.V = checked_value(qV, "V");
  p.err_V = qV.total_error();
  return p;
}

DerivativeMatrix derivative_matrix(const WeightSpec& spec, double x, double t,
                                   const QuadratureConfig& cfg) {
  if (!(t > 0.0)) throw DomainError("derivative_matrix requires t > 0");
  const double s = t * t;

  DerivativeMatrix d;
  QuadratureResult qu = convolve_point(spec, kernel("heat"), ScaleKind::time_scale, s, x, cfg);
  d.U_x = checked_value(qu, "U_x");
  d.err_U_x = qu.total_error();

  QuadratureResult qx = convolve_point(spec, kernel("heat_dx"), ScaleKind::time_scale, s, x, cfg);
  // V_x = t u'(x, t^2) = t * s^{-1/2} * (omega * (Phi')_s)(x); t / sqrt(s) = 1.
  d.V_x = checked_value(qx, "V_x");
  d.err_V_x = qx.total_error();

  d.U_t = 0.5 * d.V_x;
  d.err_U_t = 0.5 * d.err_V_x;

  QuadratureResult qt =
      convolve_point(spec, kernel("phi_tilde"), ScaleKind::length_scale, t, x, cfg);
  d.V_t = 2.0 * checked_value(qt, "V_t");
  d.err_V_t = 2.0 * qt.total_error();
  return d;
}

ExtensionSample beltrami_from(const DerivativeMatrix& d, double x, double t) {
  ExtensionSample s;
  s.x = x;
  s.t = t;
  s.U_x = d.U_x;
  s.U_t = d.U_t;
  s.V_x = d.V_x;
  s.V_t = d.V_t;

  const std::complex<double> dF{0.5 * (d.U_x + d.V_t), 0.5 * (d.V_x - d.U_t)};
  const std::complex<double> dbarF{0.5 * (d.U_x - d.V_t), 0.5 * (d.V_x + d.U_t)};
  s.J = d.U_x * d.V_t - d.U_t * d.V_x;

  const double denom = std::abs(dF);
  const double comp_err = 0.5 * (d.err_U_x + d.err_U_t + d.err_V_x + d.err_V_t);
  if (denom == 0.0)
    throw NonQuasiconformalSample("degenerate sample: dF = 0", x, t, s.J, 0.0, comp_err);

  s.mu = dbarF / dF;
  const double abs_mu = std::abs(s.mu);
  s.error_budget = comp_err * (1.0 + abs_mu) / denom;
  const double j_budget = d.err_U_x * std::fabs(d.V_t) + d.err_V_t * std::fabs(d.U_x) +
                          d.err_U_t * std::fabs(d.V_x) + d.err_V_x * std::fabs(d.U_t);

  if (abs_mu >= 1.0 || s.J <= 0.0) {
    if (abs_mu - s.error_budget < 1.0 && s.J + j_budget > 0.0) {
      s.flagged = true;
    } else {
      throw NonQuasiconformalSample("sample outside the quasiconformal range", x, t, s.J, abs_mu,
                                    s.error_budget);
    }
  } else if (abs_mu + s.error_budget >= 1.0) {
    s.flagged = true;
  }

  s.K = abs_mu < 1.0 ? (1.0 + abs_mu * abs_mu) / (1.0 - abs_mu * abs_mu)
                     : std::numeric_limits<double>::infinity();
  return s;
}

ExtensionSample beltrami(const WeightSpec& spec, double x, double t, const QuadratureConfig& cfg,
                         bool with_position) {
  ExtensionSample s = beltrami_from(derivative_matrix(spec, x, t, cfg), x, t);
  if (with_position) {
    ExtensionPoint p = extension_point(spec, x, t, cfg);
    s.U = p.U;
    s.V = p.V;
  }
  return s;
}

}  // namespace heatqc
