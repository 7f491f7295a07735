#include "heatqc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "heatqc/errors.hpp"

namespace heatqc {

namespace {

double adaptive_mean(const Func& alpha, Interval I, const QuadratureConfig& cfg) {
  QuadratureResult q = integrate_split(alpha.eval, I.lo, I.hi, alpha.breakpoints, cfg);
  return q.value / I.length();
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double func_mean(const Func& alpha, Interval I, const QuadratureConfig& cfg) {
  if (!(I.hi > I.lo)) throw DomainError("func_mean: empty interval");
  if (alpha.integral) return alpha.integral(I.lo, I.hi) / I.length();
  return adaptive_mean(alpha, I, cfg);
}

double mean_oscillation(const Func& alpha, Interval I, const QuadratureConfig& cfg) {
  if (!(I.hi > I.lo)) throw DomainError("mean_oscillation: empty interval");
  const double mean = func_mean(alpha, I, cfg);
  auto dev = [&alpha, mean](double x) { return std::fabs(alpha.eval(x) - mean); };
  QuadratureResult q = integrate_split(dev, I.lo, I.hi, alpha.breakpoints, cfg);
  return q.value / I.length();
}

OscillationReport bmo_vmo_profile(const Func& alpha, Interval window,
                                  std::span<const double> scales, int samples_per_scale,
                                  const QuadratureConfig& cfg, std::uint64_t seed) {
  if (!(window.hi > window.lo)) throw DomainError("bmo_vmo_profile: empty window");
  if (scales.empty()) throw DomainError("bmo_vmo_profile: no scales");
  for (size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw DomainError("scales must be positive");
    if (i > 0 && !(scales[i] < scales[i - 1])) throw DomainError("scales must decrease");
  }

  std::mt19937_64 rng(seed);
  const double len = window.length();

  OscillationReport rep;
  for (double delta : scales) {
    const double d = std::min(delta, len);
    std::vector<double> starts;

    const int n = std::max(1, samples_per_scale);
    for (int i = 0; i < n; ++i)
      starts.push_back(window.lo + (i + uniform01(rng)) / n * (len - d));

    // Dyadic endpoints at half-delta stride, subsampled to a cap.
    {
      const long count = std::max(1L, static_cast<long>(std::floor(2.0 * len / d)) - 1);
      const long stride = std::max(1L, count / 256);
      for (long j = 0; j < count; j += stride) {
        const double s = window.lo + 0.5 * d * static_cast<double>(j);
        if (s + d <= window.hi) starts.push_back(s);
      }
    }

    // Adversarial candidates: intervals centered on structural breakpoints.
    for (double b : alpha.breakpoints) {
      if (b <= window.lo || b >= window.hi) continue;
      double s = b - 0.5 * d;
      s = std::clamp(s, window.lo, window.hi - d);
      starts.push_back(s);
    }

    double sup = 0.0;
    for (double s : starts)
      sup = std::max(sup, mean_oscillation(alpha, {s, s + d}, cfg));
    rep.per_scale.emplace_back(delta, sup);
  }

  // vmo_modulus(delta) = sup over all sampled intervals with |I| <= delta.
  rep.vmo_modulus = rep.per_scale;
  for (size_t i = rep.vmo_modulus.size(); i-- > 1;)
    rep.vmo_modulus[i - 1].second = std::max(rep.vmo_modulus[i - 1].second, rep.vmo_modulus[i].second);
  rep.bmo_norm_estimate = rep.vmo_modulus.front().second;
  return rep;
}

double ainfty_ratio(const WeightSpec& spec, Interval I, const QuadratureConfig& cfg) {
  if (!(I.hi > I.lo)) throw DomainError("ainfty_ratio: empty interval");
  const double ptol = std::min(cfg.abs_tol * 1e-2, 1e-12);
  const double mean_w =
      (weight_primitive(spec, I.hi, ptol) - weight_primitive(spec, I.lo, ptol)) / I.length();
  const double mean_log = func_mean(log_weight(spec), I, cfg);
  return mean_w / std::exp(mean_log);
}

std::vector<std::pair<double, double>> jn_tail(const Func& alpha, Interval I,
                                               std::span<const double> lambdas, long n_samples) {
  if (!(I.hi > I.lo)) throw DomainError("jn_tail: empty interval");
  for (size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw DomainError("jn_tail: lambdas must increase");
  if (n_samples < 1) throw DomainError("jn_tail: need samples");

  QuadratureConfig cfg;  // mean only; default tolerances are plenty
  const double mean = func_mean(alpha, I, cfg);

  std::vector<long> counts(lambdas.size(), 0);
  const double h = I.length() / static_cast<double>(n_samples);
  for (long i = 0; i < n_samples; ++i) {
    const double x = I.lo + (static_cast<double>(i) + 0.5) * h;
    double dev;
    try {
      dev = std::fabs(alpha.eval(x) - mean);
    } catch (const SingularityError&) {
      dev = std::numeric_limits<double>::infinity();
    }
    for (size_t k = 0; k < lambdas.size(); ++k)
      if (dev > lambdas[k]) ++counts[k];
  }

  std::vector<std::pair<double, double>> out;
  for (size_t k = 0; k < lambdas.size(); ++k)
    out.emplace_back(lambdas[k], static_cast<double>(counts[k]) / static_cast<double>(n_samples));
  return out;
}

double jn_decay_slope(std::span<const std::pair<double, double>> samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [lam, frac] : samples) {
    if (!(frac > 0.0)) continue;
    const double y = std::log(frac);
    sx += lam;
    sy += y;
    sxx += lam * lam;
    sxy += lam * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

double maximal_function(const Func& g, double x, Interval restriction,
                        const QuadratureConfig& cfg) {
  if (!(restriction.hi > restriction.lo)) throw DomainError("maximal_function: empty restriction");

  auto av = [&](double s) {
    const double a = std::max(x - s, restriction.lo);
    const double b = std::min(x + s, restriction.hi);
    if (!(b > a)) return 0.0;
    auto absg = [&g](double y) { return std::fabs(g.eval(y)); };
    QuadratureResult q = integrate_split(absg, a, b, g.breakpoints, cfg);
    return q.value / (2.0 * s);
  };

  const double d_lo = std::fabs(x - restriction.lo);
  const double d_hi = std::fabs(x - restriction.hi);
  const double span = restriction.length();
  const double s_cover = std::max(d_lo, d_hi);
  const double s_max = 2.0 * (s_cover + span);
  const double s_min = std::max(1e-7 * span, 1e-300);

  // Multi-start over a log grid, then golden-section refinement around the best.
  std::vector<double> cand;
  for (int i = 0; i < 40; ++i)
    cand.push_back(s_min * std::pow(s_max / s_min, i / 39.0));
  if (d_lo > 0.0) cand.push_back(d_lo);
  if (d_hi > 0.0) cand.push_back(d_hi);
  cand.push_back(s_cover);

  double best_s = cand.front(), best = -1.0;
  for (double s : cand) {
    if (!(s > 0.0)) continue;
    const double v = av(s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }

  // Golden section in log s on a bracket around the best start.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::log(best_s) - 0.7, hi = std::log(best_s) + 0.7;
  double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
  double f1 = av(std::exp(c1)), f2 = av(std::exp(c2));
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + gr * (hi - lo);
      f2 = av(std::exp(c2));
    } else {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - gr * (hi - lo);
      f1 = av(std::exp(c1));
    }
  }
  return std::max({best, f1, f2});
}

double lp_square_function(const Func& g, const Kernel& k, double x, double s_min, double s_max,
                          const QuadratureConfig& cfg) {
  if (std::fabs(k.m0) > 1e-12)
    throw ZeroMeanRequired("lp_square_function requires a zero-mean kernel, got m0 = " +
                           std::to_string(k.m0));
  if (!(s_min > 0.0) || !(s_max > s_min)) throw DomainError("lp_square_function: bad s range");

  auto integrand = [&](double lam) {
    const double s = std::exp(lam);
    const double c = convolve_func_point(g, k, ScaleKind::length_scale, s, x, cfg).value;
    return c * c;
  };
  QuadratureConfig outer = cfg;
  outer.rel_tol = std::max(cfg.rel_tol, 1e-9);
  QuadratureResult q = integrate(integrand, std::log(s_min), std::log(s_max), outer);
  return std::sqrt(std::max(0.0, q.value));
}

Func log_weight(const WeightSpec& spec) {
  Func f;
  f.eval = [spec](double x) { return weight_log_eval(spec, x); };
  f.breakpoints = weight_breakpoints(spec);

  if (const auto* c = std::get_if<ConstantW>(&spec.family)) {
    const double lc = std::log(c->c);
    f.integral = [lc](double a, double b) { return lc * (b - a); };
    f.sup_bound = std::fabs(lc);
  } else if (const auto* p = std::get_if<PowerW>(&spec.family)) {
    const double a_pow = p->a;
    auto F = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::fabs(x)) - x; };
    f.integral = [a_pow, F](double a, double b) { return a_pow * (F(b) - F(a)); };
  } else if (const auto* e = std::get_if<ExpSineW>(&spec.family)) {
    const double eps = e->eps, k = e->freq;
    f.integral = [eps, k](double a, double b) {
      return eps * (std::cos(k * a) - std::cos(k * b)) / k;
    };
    f.sup_bound = eps;
  } else if (const auto* st = std::get_if<DyadicStepW>(&spec.family)) {
    const DyadicStepW levels = *st;
    double bound = 0.0;
    for (const StepLevel& lv : levels.levels) bound = std::max(bound, std::fabs(std::log(lv.value)));
    f.integral = [levels](double a, double b) {
      double acc = 0.0;
      for (const StepLevel& lv : levels.levels) {
        const double o_lo = std::max(a, lv.lo), o_hi = std::min(b, lv.hi);
        if (o_hi > o_lo) acc += std::log(lv.value) * (o_hi - o_lo);
      }
      return acc;  // default level is 1, log 1 = 0
    };
    f.sup_bound = bound;
  } else if (const auto* sm = std::get_if<SampledW>(&spec.family)) {
    double bound = 0.0;
    for (double w : sm->ws) bound = std::max(bound, std::fabs(std::log(w)));
    f.sup_bound = bound;
  }
  return f;
}

Func weight_minus_const(const WeightSpec& spec, double c) {
  Func f;
  f.eval = [spec, c](double x) { return weight_eval(spec, x) - c; };
  f.breakpoints = weight_breakpoints(spec);
  if (const auto* e = std::get_if<ExpSineW>(&spec.family))
    f.sup_bound = std::exp(e->eps) + std::fabs(c);
  else if (const auto* cc = std::get_if<ConstantW>(&spec.family))
    f.sup_bound = std::fabs(cc->c - c);
  else if (const auto* st = std::get_if<DyadicStepW>(&spec.family)) {
    double m = 1.0;
    for (const StepLevel& lv : st->levels) m = std::max(m, lv.value);
    f.sup_bound = m + std::fabs(c);
  } else if (const auto* sm = std::get_if<SampledW>(&spec.family)) {
    double m = 0.0;
    for (double w : sm->ws) m = std::max(m, w);
    f.sup_bound = m + std::fabs(c);
  }
  return f;
}

OscillationReport analyze_weight(const WeightSpec& spec, Interval window,
                                 std::span<const double> scales, int samples_per_scale,
                                 std::span<const double> lambdas, long jn_samples,
                                 const QuadratureConfig& cfg, std::uint64_t seed) {
  const Func alpha = log_weight(spec);
  OscillationReport rep = bmo_vmo_profile(alpha, window, scales, samples_per_scale, cfg, seed);

  // A_infty ratio swept over stratified intervals across the same scales.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  double sup_ratio = 1.0;
  for (double delta : scales) {
    const double d = std::min(delta, window.length());
    for (int i = 0; i < std::max(1, samples_per_scale); ++i) {
      const double s = window.lo + uniform01(rng) * (window.length() - d);
      sup_ratio = std::max(sup_ratio, ainfty_ratio(spec, {s, s + d}, cfg));
    }
  }
  rep.ainfty_ratio_sup = sup_ratio;

  if (!lambdas.empty()) {
    rep.jn_tail_samples = jn_tail(alpha, window, lambdas, jn_samples);
    rep.jn_slope = jn_decay_slope(rep.jn_tail_samples);
  }
  return rep;
}

}  // namespace heatqc
