#include "heatqc/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatqc/errors.hpp"

namespace heatqc {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_grid(const InnerGrid& g) {
  if (g.nx < 8 || g.ns < 8) throw DomainError("inner grid sizes must be >= 8");
  if (!(g.s_cutoff_ratio > 0.0 && g.s_cutoff_ratio < 1.0))
    throw DomainError("s_cutoff_ratio must lie in (0,1)");
}

// Least-squares slope of log g against log s over the smallest decade of the
// grid; the local power-law exponent used to extrapolate the cutoff tail.
double fit_power(std::span<const double> s, std::span<const double> g) {
  const double cut = s.front() * 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] > cut || !(g[i] > 0.0)) continue;
    const double X = std::log(s[i]), Y = std::log(g[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++n;
  }
  if (n < 2) return 1.0;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 1.0;
  return (n * sxy - sx * sy) / denom;
}

// integral_0^{s_min} g(s)/s ds under g ~ C s^p; conservative floor on p.
double log_measure_tail(double g_min, double p) {
  if (!(g_min > 0.0)) return 0.0;
  return g_min / std::max(p, 0.05);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    v[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

// Composite Simpson weights for n (odd) nodes spaced h apart.
std::vector<double> simpson_weights(int n, double h) {
  std::vector<double> w(n, h / 3.0);
  for (int i = 1; i < n - 1; ++i) w[i] *= (i % 2 ? 4.0 : 2.0);
  return w;
}

int round_up_odd(int n) { return n % 2 ? n : n + 1; }

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return v;
}

}  // namespace

CarlesonBox box_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                       const InnerGrid& grid) {
  if (!(t > 0.0)) throw DomainError("box_energy requires t > 0");
  validate_grid(grid);

  CarlesonBox box;
  box.x0 = x0;
  box.t = t;

  const int ns = round_up_odd(grid.ns);
  const double s_min = grid.s_cutoff_ratio * t;
  const std::vector<double> s_nodes = log_grid(s_min, t, ns);
  const double dlam = std::log(t / s_min) / (ns - 1);
  const std::vector<double> lam_w = simpson_weights(ns, dlam);
  const double dx = 2.0 * t / grid.nx;

  std::vector<double> gA(ns, 0.0), g3(ns, 0.0), g5(ns, 0.0), ge(ns, 0.0);

  for (int i = 0; i < ns; ++i) {
    const double s = s_nodes[i];
    for (int j = 0; j < grid.nx; ++j) {
      const double x = x0 - t + (j + 0.5) * dx;
      const ExtensionSample smp = beltrami_from(derivative_matrix(spec, x, s, cfg), x, s);
      const double am2 = std::norm(smp.mu);
      const double r3 = smp.V_x / smp.U_x;
      const double r5 = (smp.U_x - smp.V_t) / smp.U_x;
      gA[i] += am2 * dx;
      g3[i] += r3 * r3 * dx;
      g5[i] += r5 * r5 * dx;
      ge[i] += 2.0 * std::abs(smp.mu) * smp.error_budget * dx;
      ++box.samples;
    }
  }

  double A = 0.0, T3 = 0.0, T5 = 0.0, E = 0.0;
  for (int i = 0; i < ns; ++i) {
    A += lam_w[i] * gA[i];
    T3 += lam_w[i] * g3[i];
    T5 += lam_w[i] * g5[i];
    E += lam_w[i] * ge[i];
  }
  // sigma = s^2 change of variables; (V_x/U_x)^2 = s^2 (u'/u)^2 gives the
  // factor 2, and U_x - V_t = -(s^2/2) u''(x, s^2) gives the extra 4.
  box.A = A / t;
  box.thm3_energy = 2.0 * T3 / t;
  box.thm5_energy = 8.0 * T5 / t;

  // Extrapolated mass below the s cutoff, reported as error, not added to A.
  const double tail = log_measure_tail(gA.front(), fit_power(s_nodes, gA)) +
                      2.0 * log_measure_tail(g3.front(), fit_power(s_nodes, g3)) +
                      2.0 * log_measure_tail(g5.front(), fit_power(s_nodes, g5));
  box.quad_error = (E + tail) / t;
  return box;
}

namespace {

double sigma_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                    const InnerGrid& grid, bool second_derivative) {
  if (!(t > 0.0)) throw DomainError("energy requires t > 0");
  validate_grid(grid);

  const int ns = round_up_odd(grid.ns);
  const double sig_max = t * t;
  const double sig_min = grid.s_cutoff_ratio * grid.s_cutoff_ratio * sig_max;
  const std::vector<double> sig = log_grid(sig_min, sig_max, ns);
  const double dlam = std::log(sig_max / sig_min) / (ns - 1);
  const std::vector<double> lam_w = simpson_weights(ns, dlam);
  const double dx = 2.0 * t / grid.nx;

  const Kernel& heat = kernel("heat");
  const Kernel& deriv = kernel(second_derivative ? "heat_dxx" : "heat_dx");

  double total = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double s = sig[i];
    double G = 0.0;
    for (int j = 0; j < grid.nx; ++j) {
      const double x = x0 - t + (j + 0.5) * dx;
      const double u = convolve_point(spec, heat, ScaleKind::time_scale, s, x, cfg).value;
      double d = convolve_point(spec, deriv, ScaleKind::time_scale, s, x, cfg).value;
      d /= second_derivative ? s : std::sqrt(s);
      const double ratio = d / u;
      G += (second_derivative ? s * ratio * ratio : ratio * ratio) * dx;
    }
    total += lam_w[i] * G * sig[i];  // d sigma = sigma d(log sigma)
  }
  return total / t;
}

}  // namespace

double thm3_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                   const InnerGrid& grid) {
  return sigma_energy(spec, x0, t, cfg, grid, false);
}

double thm5_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                   const InnerGrid& grid) {
  return sigma_energy(spec, x0, t, cfg, grid, true);
}

CarlesonReport carleson_scan(const WeightSpec& spec, double x_lo, double x_hi, double t_lo,
                             double t_hi, int n_x0, int n_t, const QuadratureConfig& cfg,
                             const InnerGrid& grid, int max_refinements, double stability) {
  if (!(x_hi > x_lo) || !(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("bad scan region");
  if (n_x0 < 4 || n_t < 4) throw DomainError("scan grids must be >= 4");

  CarlesonReport report;
  double prev_sup = -1.0;

  for (int round = 0; round <= max_refinements; ++round) {
    const std::vector<double> x0s = linear_grid(x_lo, x_hi, n_x0);
    const std::vector<double> ts = log_grid(t_lo, t_hi, n_t);

    std::vector<CarlesonBox> boxes;
    boxes.reserve(x0s.size() * ts.size());
    double sup = 0.0;
    for (double t : ts)
      for (double x0 : x0s) {
        CarlesonBox b;
        try {
          b = box_energy(spec, x0, t, cfg, grid);
        } catch (const Error&) {
          b.x0 = x0;
          b.t = t;
          b.A = kNan;
          b.quad_error = std::numeric_limits<double>::infinity();
        }
        if (std::isfinite(b.A)) sup = std::max(sup, b.A);
        boxes.push_back(b);
      }

    report.boxes = std::move(boxes);
    report.sup_estimate = sup;
    report.refinement_history.push_back({n_x0, n_t, sup});

    if (prev_sup >= 0.0 && std::fabs(sup - prev_sup) <= stability * std::max(sup, 1e-300)) break;
    prev_sup = sup;
    if (round < max_refinements) {
      n_x0 = 2 * n_x0 - 1;
      n_t = 2 * n_t - 1;
    }
  }

  // Per-t sup over the final grid.
  const std::vector<double> ts = log_grid(t_lo, t_hi, report.refinement_history.back().n_t);
  for (double t : ts) {
    double sup_t = 0.0;
    for (const CarlesonBox& b : report.boxes)
      if (b.t == t && std::isfinite(b.A)) sup_t = std::max(sup_t, b.A);
    report.vanishing_profile.emplace_back(t, sup_t);
  }
  return report;
}

std::vector<std::pair<double, double>> vanishing_profile(const WeightSpec& spec,
                                                         std::span<const double> x0_grid,
                                                         std::span<const double> t_decades,
                                                         const QuadratureConfig& cfg,
                                                         const InnerGrid& grid) {
  if (x0_grid.empty() || t_decades.empty()) throw DomainError("vanishing_profile: empty grids");
  for (size_t i = 1; i < t_decades.size(); ++i)
    if (!(t_decades[i] < t_decades[i - 1]))
      throw DomainError("vanishing_profile: t values must decrease");

  std::vector<std::pair<double, double>> profile;
  for (double t : t_decades) {
    double sup = 0.0;
    for (double x0 : x0_grid) sup = std::max(sup, box_energy(spec, x0, t, cfg, grid).A);
    profile.emplace_back(t, sup);
  }
  return profile;
}

}  // namespace heatqc
