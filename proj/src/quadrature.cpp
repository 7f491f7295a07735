#include "heatqc/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "heatqc/errors.hpp"

namespace heatqc {

namespace {

// sup of the profile envelope A(1+u^2)e^{-b u^2} over |u| >= r (monotone
// beyond the inflection, which all built-in envelopes are past r >= 1).
double envelope_sup(const Kernel& k, double r) {
  return k.envelope_amp * (1.0 + r * r) * std::exp(-k.envelope_rate * r * r);
}

// Splits [lo, hi] at the given interior cuts; pieces adjacent to an integrable
// power singularity at 0 are rewritten in u = |y|^{1+a} coordinates, which
// makes the integrand smooth there.
void append_weight_regions(std::vector<Region>& out, const WeightSpec& spec,
                           const std::function<double(double)>& plain,
                           const std::function<double(double)>& kernel_at, double lo, double hi,
                           std::span<const double> cuts) {
  const bool singular = weight_singular_at_zero(spec);
  double a_pow = 0.0;
  if (const auto* p = std::get_if<PowerW>(&spec.family)) a_pow = p->a;

  std::vector<double> inner = clip_breaks(cuts, lo, hi);
  double left = lo;
  auto emit = [&](double p, double q) {
    if (!(q > p)) return;
    if (singular && p == 0.0) {
      const double e = 1.0 + a_pow;
      out.push_back(Region{0.0, std::pow(q, e), [kernel_at, e](double u) {
                             return kernel_at(std::pow(u, 1.0 / e)) / e;
                           }});
    } else if (singular && q == 0.0) {
      const double e = 1.0 + a_pow;
      out.push_back(Region{0.0, std::pow(-p, e), [kernel_at, e](double u) {
                             return kernel_at(-std::pow(u, 1.0 / e)) / e;
                           }});
    } else {
      out.push_back(Region{p, q, plain});
    }
  };
  for (double c : inner) {
    emit(left, c);
    left = c;
  }
  emit(left, hi);
}

struct ShellMassModel {
  double masses[4];   // ball masses at radii L, 2L, 4L, 8L
  double rho;         // growth factor used beyond the measured radii
  bool suspicious;    // super-geometric growth detected

  double ball(int n) const {
    if (n <= 3) return masses[n];
    return masses[3] * std::pow(rho, n - 3);
  }
};

ShellMassModel measure_masses(const WeightSpec& spec, double x, double len, double tol) {
  ShellMassModel m{};
  double r = len;
  for (int n = 0; n <= 3; ++n, r *= 2.0)
    m.masses[n] = weight_primitive(spec, x + r, tol) - weight_primitive(spec, x - r, tol);
  double ratios[3];
  for (int n = 0; n < 3; ++n)
    ratios[n] = m.masses[n] > 0.0 ? m.masses[n + 1] / m.masses[n] : 2.0;
  m.rho = std::max({ratios[0], ratios[1], ratios[2], doubling_bound(spec)});
  // Doubling weights have uniformly bounded ratios; escalating growth that has
  // already left the geometric range undermines the rho^n tail argument.
  m.suspicious = ratios[1] > ratios[0] && ratios[2] > ratios[1] && ratios[2] > 16.0;
  return m;
}

double primitive_tol(const QuadratureConfig& cfg) { return std::min(cfg.abs_tol * 1e-2, 1e-12); }

}  // namespace

QuadratureResult convolve_point(const WeightSpec& spec, const Kernel& k, ScaleKind kind,
                                double scale, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  const double len = dilation_length(kind, scale);

  if (cfg.oracle_mode) {
    QuadratureResult r;
    r.value = convolve_point_dense(spec, k, kind, scale, x);
    return r;
  }

  auto plain = [&spec, &k, kind, scale, x](double y) {
    return weight_eval(spec, y) * k.eval(kind, scale, x - y);
  };
  auto kernel_at = [&k, kind, scale, x](double y) { return k.eval(kind, scale, x - y); };

  std::vector<double> cuts = weight_breakpoints(spec);
  for (double d : k.discontinuities) cuts.push_back(x - d * len);
  cuts.push_back(x);

  std::vector<Region> seeds;
  QuadratureResult out;

  if (k.compact_support()) {
    const double r = k.support_radius * len;
    append_weight_regions(seeds, spec, plain, kernel_at, x - r, x + r, cuts);
    out = integrate_regions(std::move(seeds), cfg);
    return out;
  }

  const ShellMassModel masses = measure_masses(spec, x, len, primitive_tol(cfg));

  // Core |x - y| < L.
  append_weight_regions(seeds, spec, plain, kernel_at, x - len, x + len, cuts);

  // Dyadic shells; a shell whose certified bound is negligible is not
  // integrated, its bound goes to the truncation ledger instead.
  const double skip = 1e-3 * cfg.abs_tol;
  double truncation = 0.0;
  double inner_r = len;
  for (int n = 1; n <= cfg.annulus_budget; ++n) {
    const double outer_r = 2.0 * inner_r;
    const double bound = envelope_sup(k, std::pow(2.0, n - 1)) / len * masses.ball(n);
    if (bound > skip) {
      append_weight_regions(seeds, spec, plain, kernel_at, x - outer_r, x - inner_r, cuts);
      append_weight_regions(seeds, spec, plain, kernel_at, x + inner_r, x + outer_r, cuts);
    } else {
      truncation += bound;
    }
    inner_r = outer_r;
  }
  // Tail beyond the annulus budget.
  for (int n = cfg.annulus_budget + 1; n <= cfg.annulus_budget + 80; ++n) {
    const double term = envelope_sup(k, std::pow(2.0, n - 1)) / len * masses.ball(n);
    truncation += term;
    if (term < 1e-300) break;
  }

  out = integrate_regions(std::move(seeds), cfg);
  out.truncation_bound += truncation;
  if (masses.suspicious) out.status = QuadStatus::non_doubling_suspected;
  return out;
}

std::vector<QuadratureResult> convolve_grid(const WeightSpec& spec, const Kernel& k,
                                            ScaleKind kind,
                                            std::span<const std::pair<double, double>> points,
                                            const QuadratureConfig& cfg) {
  std::vector<QuadratureResult> out;
  out.reserve(points.size());
  for (const auto& [x, scale] : points) out.push_back(convolve_point(spec, k, kind, scale, x, cfg));
  return out;
}

QuadratureResult convolve_primitive_point(const WeightSpec& spec, const Kernel& k, ScaleKind kind,
                                          double scale, double x, const QuadratureConfig& cfg) {
  cfg.validate();
  const double len = dilation_length(kind, scale);
  const double ptol = primitive_tol(cfg);

  auto integrand = [&spec, &k, len, x, ptol](double z) {
    return weight_primitive(spec, x - len * z, ptol) * k.profile(z);
  };

  // Breakpoints in profile coordinates: kernel jumps plus weight structure
  // mapped through y = x - L z.
  std::vector<double> cuts = k.discontinuities;
  cuts.push_back(0.0);
  for (double b : weight_breakpoints(spec)) cuts.push_back((x - b) / len);

  std::vector<Region> seeds;
  const double core = k.compact_support() ? k.support_radius : 1.0;
  {
    std::vector<double> inner = clip_breaks(cuts, -core, core);
    double left = -core;
    for (double c : inner) {
      seeds.push_back(Region{left, c, integrand});
      left = c;
    }
    seeds.push_back(Region{left, core, integrand});
  }

  QuadratureResult out;
  double truncation = 0.0;
  if (!k.compact_support()) {
    const ShellMassModel masses = measure_masses(spec, x, len, ptol);
    const double f_x = std::fabs(weight_primitive(spec, x, ptol));
    const double skip = 1e-3 * cfg.abs_tol;
    for (int n = 1; n <= cfg.annulus_budget + 80; ++n) {
      const double r_in = std::pow(2.0, n - 1);
      // |f(x - L z)| <= |f(x)| + ball mass at radius 2^n L on the shell.
      const double bound = 2.0 * r_in * envelope_sup(k, r_in) * (f_x + masses.ball(n));
      if (n <= cfg.annulus_budget && bound > skip) {
        auto add = [&](double lo, double hi) {
          std::vector<double> inner = clip_breaks(cuts, lo, hi);
          double left = lo;
          for (double c : inner) {
            seeds.push_back(Region{left, c, integrand});
            left = c;
          }
          seeds.push_back(Region{left, hi, integrand});
        };
        add(-2.0 * r_in, -r_in);
        add(r_in, 2.0 * r_in);
      } else {
        truncation += bound;
        if (bound < 1e-300) break;
      }
    }
    if (masses.suspicious) out.status = QuadStatus::non_doubling_suspected;
  }

  QuadratureResult q = integrate_regions(std::move(seeds), cfg);
  q.truncation_bound += truncation;
  if (out.status == QuadStatus::non_doubling_suspected) q.status = out.status;
  return q;
}

QuadratureResult convolve_func_point(const Func& g, const Kernel& k, ScaleKind kind, double scale,
                                     double x, const QuadratureConfig& cfg) {
  cfg.validate();
  const double len = dilation_length(kind, scale);

  auto integrand = [&g, &k, kind, scale, x](double y) {
    return g.eval(y) * k.eval(kind, scale, x - y);
  };

  std::vector<double> cuts = g.breakpoints;
  for (double d : k.discontinuities) cuts.push_back(x - d * len);
  cuts.push_back(x);

  const double reach = (k.compact_support() ? k.support_radius : 40.0) * len;
  double lo = x - reach, hi = x + reach;
  double truncation = 0.0;

  if (g.support) {
    lo = std::max(lo, g.support->first);
    hi = std::min(hi, g.support->second);
    if (!(hi > lo)) return QuadratureResult{};
    if (!k.compact_support() && std::isfinite(g.sup_bound)) {
      // Support sticking out beyond the 40 L reach, bounded by the envelope tail.
      if (g.support->first < x - reach || g.support->second > x + reach)
        truncation += g.sup_bound * envelope_tail_integral(k.envelope_amp, k.envelope_rate, 40.0);
    }
  } else {
    if (k.compact_support()) {
      // fine: the kernel limits the domain
    } else if (std::isfinite(g.sup_bound)) {
      truncation += g.sup_bound * envelope_tail_integral(k.envelope_amp, k.envelope_rate, 40.0);
    } else {
      throw DomainError("convolve_func_point: handle needs compact support or a sup bound");
    }
  }

  std::vector<Region> seeds;
  std::vector<double> inner = clip_breaks(cuts, lo, hi);
  double left = lo;
  for (double c : inner) {
    seeds.push_back(Region{left, c, integrand});
    left = c;
  }
  seeds.push_back(Region{left, hi, integrand});

  QuadratureResult q = integrate_regions(std::move(seeds), cfg);
  q.truncation_bound += truncation;
  return q;
}

double convolve_point_dense(const WeightSpec& spec, const Kernel& k, ScaleKind kind, double scale,
                            double x, double width, long nodes) {
  const double len = dilation_length(kind, scale);
  const double reach = (k.compact_support() ? k.support_radius : width) * len;
  const double lo = x - reach, hi = x + reach;

  auto plain = [&](double y) { return weight_eval(spec, y) * k.eval(kind, scale, x - y); };

  std::vector<double> cuts = weight_breakpoints(spec);
  for (double d : k.discontinuities) cuts.push_back(x - d * len);
  std::vector<double> inner = clip_breaks(cuts, lo, hi);

  std::vector<std::pair<double, double>> pieces;
  double left = lo;
  for (double c : inner) {
    pieces.emplace_back(left, c);
    left = c;
  }
  pieces.emplace_back(left, hi);

  const bool singular = weight_singular_at_zero(spec);
  double a_pow = 0.0;
  if (const auto* p = std::get_if<PowerW>(&spec.family)) a_pow = p->a;

  double total = 0.0;
  for (const auto& [p, q] : pieces) {
    if (!(q > p)) continue;
    long n = std::max<long>(1000, static_cast<long>(nodes * (q - p) / (hi - lo)));
    if (singular && (p == 0.0 || q == 0.0)) {
      // Same naive rule, in coordinates that absorb the |y|^a singularity.
      const double e = 1.0 + a_pow;
      if (p == 0.0) {
        total += integrate_dense(
            [&](double u) { return k.eval(kind, scale, x - std::pow(u, 1.0 / e)) / e; }, 0.0,
            std::pow(q, e), n);
      } else {
        total += integrate_dense(
            [&](double u) { return k.eval(kind, scale, x + std::pow(u, 1.0 / e)) / e; }, 0.0,
            std::pow(-p, e), n);
      }
    } else {
      total += integrate_dense(plain, p, q, n);
    }
  }
  return total;
}

}  // namespace heatqc
