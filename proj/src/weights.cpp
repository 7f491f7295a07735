#include "heatqc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heatqc/errors.hpp"

namespace heatqc {

namespace {

double power_eval(const PowerW& p, double x) {
  if (x == 0.0) {
    if (p.a < 0.0) throw SingularityError("Power weight with a < 0 evaluated at x = 0");
    return p.a == 0.0 ? 1.0 : 0.0;
  }
  return std::pow(std::fabs(x), p.a);
}

double step_eval(const DyadicStepW& w, double x) {
  for (const StepLevel& lv : w.levels)
    if (x >= lv.lo && x < lv.hi) return lv.value;
  return 1.0;
}

double sampled_eval(const SampledW& w, double x) {
  const auto& xs = w.xs;
  const auto& ws = w.ws;
  if (x <= xs.front()) return ws.front();
  if (x >= xs.back()) return ws.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const size_t i = static_cast<size_t>(it - xs.begin());
  const double u = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ws[i - 1] + u * (ws[i] - ws[i - 1]);
}

double step_primitive(const DyadicStepW& w, double x) {
  // Exact integral of the piecewise-constant weight from 0 to x.
  const double lo = std::min(0.0, x);
  const double hi = std::max(0.0, x);
  double acc = hi - lo;  // default level 1 everywhere, corrected below
  for (const StepLevel& lv : w.levels) {
    const double a = std::max(lo, lv.lo);
    const double b = std::min(hi, lv.hi);
    if (b > a) acc += (lv.value - 1.0) * (b - a);
  }
  return x >= 0.0 ? acc : -acc;
}

double sampled_cum_to(const SampledW& w, double x) {
  // Exact integral of the piecewise-linear interpolant from xs.front() to x.
  const auto& xs = w.xs;
  const auto& ws = w.ws;
  if (x <= xs.front()) return ws.front() * (x - xs.front());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    if (x <= xs[i]) break;
    const double b = std::min(x, xs[i + 1]);
    const double u = (b - xs[i]) / (xs[i + 1] - xs[i]);
    const double wb = ws[i] + u * (ws[i + 1] - ws[i]);
    acc += 0.5 * (ws[i] + wb) * (b - xs[i]);
  }
  if (x > xs.back()) acc += ws.back() * (x - xs.back());
  return acc;
}

double sampled_primitive(const SampledW& w, double x) {
  return sampled_cum_to(w, x) - sampled_cum_to(w, 0.0);
}

// Generic cached path: integer anchors chained from 0, adaptive within the cell.
double cached_primitive(const WeightSpec& spec, double x, double tol) {
  PrimitiveCache& c = *spec.cache;
  QuadratureConfig cfg;
  cfg.abs_tol = std::min(tol, c.anchor_tol);
  cfg.rel_tol = 1e-12;
  auto omega = [&spec](double y) { return weight_eval(spec, y); };

  const long n0 = static_cast<long>(std::floor(x));
  double base;
  {
    std::scoped_lock lock(c.m);
    auto it = c.cum.find(n0);
    if (it == c.cum.end()) {
      if (c.cum.empty()) c.cum[0] = 0.0;
      long lo = c.cum.begin()->first;
      long hi = c.cum.rbegin()->first;
      while (hi < n0) {
        c.cum[hi + 1] =
            c.cum[hi] + integrate(omega, static_cast<double>(hi), static_cast<double>(hi + 1), cfg).value;
        ++hi;
      }
      while (lo > n0) {
        c.cum[lo - 1] =
            c.cum[lo] - integrate(omega, static_cast<double>(lo - 1), static_cast<double>(lo), cfg).value;
        --lo;
      }
      it = c.cum.find(n0);
    }
    base = it->second;
  }
  if (x == static_cast<double>(n0)) return base;
  return base + integrate(omega, static_cast<double>(n0), x, cfg).value;
}

Classification classify(TriState ainfty, TriState bmo, TriState vmo) {
  Classification c;
  c.is_ainfty = ainfty;
  c.log_in_bmo = bmo;
  c.log_in_vmo = vmo;
  return c;
}

const char* tri_name(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    default: return "unknown";
  }
}

TriState tri_parse(const std::string& s) {
  if (s == "yes") return TriState::yes;
  if (s == "no") return TriState::no;
  if (s == "unknown") return TriState::unknown;
  throw DomainError("bad classification flag: " + s);
}

}  // namespace

WeightSpec make_constant(double c) {
  if (!(c > 0.0)) throw DomainError("constant weight must be positive");
  WeightSpec s;
  s.family = ConstantW{c};
  s.claimed_doubling = 2.0;
  s.name = "constant";
  return s;
}

WeightSpec make_power(double a) {
  if (!(a > -1.0)) throw DomainError("power weight requires a > -1");
  WeightSpec s;
  s.family = PowerW{a};
  // Centered-at-zero intervals give 2^{1+a}; for a < 0 the worst interval is
  // off-center, so pad generously. Only tail certification consumes this.
  s.claimed_doubling = a >= 0.0 ? std::pow(2.0, 1.0 + a) : std::max(4.0, 4.0 / (1.0 + a));
  s.name = "power";
  return s;
}

WeightSpec make_expsine(double eps, double freq) {
  if (eps < 0.0 || !(freq > 0.0)) throw DomainError("expsine weight requires eps >= 0, freq > 0");
  WeightSpec s;
  s.family = ExpSineW{eps, freq};
  s.claimed_doubling = 2.0 * std::exp(2.0 * eps);
  s.name = "expsine";
  return s;
}

WeightSpec make_dyadic_step(std::vector<StepLevel> levels) {
  double vmin = 1.0, vmax = 1.0;
  for (size_t i = 0; i < levels.size(); ++i) {
    const StepLevel& lv = levels[i];
    if (!(lv.value > 0.0) || !(lv.hi > lv.lo)) throw DomainError("bad step level");
    if (i > 0 && levels[i].lo < levels[i - 1].hi) throw DomainError("step levels must be sorted and disjoint");
    vmin = std::min(vmin, lv.value);
    vmax = std::max(vmax, lv.value);
  }
  WeightSpec s;
  s.family = DyadicStepW{std::move(levels)};
  s.claimed_doubling = 2.0 * vmax / vmin;
  s.name = "step";
  return s;
}

WeightSpec make_sampled(std::vector<double> xs, std::vector<double> ws) {
  if (xs.size() != ws.size() || xs.size() < 2) throw DomainError("sampled weight needs >= 2 nodes");
  double vmin = ws.front(), vmax = ws.front();
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(ws[i] > 0.0)) throw DomainError("sampled weight values must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("sampled weight nodes must increase");
    vmin = std::min(vmin, ws[i]);
    vmax = std::max(vmax, ws[i]);
  }
  WeightSpec s;
  s.family = SampledW{std::move(xs), std::move(ws)};
  s.claimed_doubling = 2.0 * vmax / vmin;
  s.name = "sampled";
  return s;
}

double weight_eval(const WeightSpec& spec, double x) {
  return std::visit(
      [x](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, ConstantW>) return fam.c;
        else if constexpr (std::is_same_v<T, PowerW>) return power_eval(fam, x);
        else if constexpr (std::is_same_v<T, ExpSineW>) return std::exp(fam.eps * std::sin(fam.freq * x));
        else if constexpr (std::is_same_v<T, DyadicStepW>) return step_eval(fam, x);
        else return sampled_eval(fam, x);
      },
      spec.family);
}

double weight_log_eval(const WeightSpec& spec, double x) {
  if (const auto* p = std::get_if<PowerW>(&spec.family)) {
    if (x == 0.0) throw SingularityError("log |x|^a at x = 0");
    return p->a * std::log(std::fabs(x));
  }
  if (const auto* e = std::get_if<ExpSineW>(&spec.family)) return e->eps * std::sin(e->freq * x);
  return std::log(weight_eval(spec, x));
}

double weight_primitive(const WeightSpec& spec, double x, double tol) {
  if (!(tol > 0.0)) throw DomainError("weight_primitive requires tol > 0");
  if (!std::isfinite(x)) throw DomainError("weight_primitive requires finite x");
  return std::visit(
      [&](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          return fam.c * x;
        } else if constexpr (std::is_same_v<T, PowerW>) {
          const double p = fam.a + 1.0;
          return std::copysign(std::pow(std::fabs(x), p), x) / p;
        } else if constexpr (std::is_same_v<T, DyadicStepW>) {
          return step_primitive(fam, x);
        } else if constexpr (std::is_same_v<T, SampledW>) {
          return sampled_primitive(fam, x);
        } else {
          return cached_primitive(spec, x, tol);
        }
      },
      spec.family);
}

std::vector<double> weight_breakpoints(const WeightSpec& spec) {
  return std::visit(
      [](const auto& fam) -> std::vector<double> {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PowerW>) {
          return fam.a == 0.0 ? std::vector<double>{} : std::vector<double>{0.0};
        } else if constexpr (std::is_same_v<T, DyadicStepW>) {
          std::vector<double> b;
          for (const StepLevel& lv : fam.levels) {
            b.push_back(lv.lo);
            b.push_back(lv.hi);
          }
          return b;
        } else if constexpr (std::is_same_v<T, SampledW>) {
          return fam.xs;
        } else {
          return {};
        }
      },
      spec.family);
}

bool weight_singular_at_zero(const WeightSpec& spec) {
  const auto* p = std::get_if<PowerW>(&spec.family);
  return p != nullptr && p->a < 0.0;
}

double doubling_estimate(const WeightSpec& spec, std::span<const double> centers,
                         std::span<const double> scales, double tol) {
  if (centers.empty() || scales.empty()) throw DomainError("doubling_estimate: empty grids");
  double best = 0.0;
  for (double c : centers)
    for (double h : scales) {
      if (!(h > 0.0)) throw DomainError("doubling_estimate: scales must be positive");
      const double inner = weight_primitive(spec, c + h, tol) - weight_primitive(spec, c - h, tol);
      const double outer =
          weight_primitive(spec, c + 2.0 * h, tol) - weight_primitive(spec, c - 2.0 * h, tol);
      if (inner > 0.0) best = std::max(best, outer / inner);
    }
  return best;
}

double doubling_bound(const WeightSpec& spec) {
  if (spec.claimed_doubling) return *spec.claimed_doubling;
  return 16.0;
}

const std::vector<std::pair<std::string, WeightSpec>>& catalog() {
  static const std::vector<std::pair<std::string, WeightSpec>> entries = [] {
    std::vector<std::pair<std::string, WeightSpec>> v;

    WeightSpec unit = make_constant(1.0);
    unit.name = "unit";
    unit.classification = classify(TriState::yes, TriState::yes, TriState::yes);
    v.emplace_back("unit", std::move(unit));

    WeightSpec sq = make_power(0.5);
    sq.name = "sqrt";
    sq.classification = classify(TriState::yes, TriState::yes, TriState::no);
    v.emplace_back("sqrt", std::move(sq));

    WeightSpec isq = make_power(-0.5);
    isq.name = "invsqrt";
    isq.classification = classify(TriState::yes, TriState::yes, TriState::no);
    v.emplace_back("invsqrt", std::move(isq));

    WeightSpec es = make_expsine(1.0, 1.0);
    es.name = "expsine";
    es.classification = classify(TriState::yes, TriState::yes, TriState::yes);
    v.emplace_back("expsine", std::move(es));

    // Alternating dyadic shells around the origin, values 1 and 2. The jumps
    // persist at every scale, so log omega stays away from VMO.
    std::vector<StepLevel> levels;
    for (int k = -10; k <= 2; ++k) {
      const double lo = std::pow(2.0, k);
      const double hi = std::pow(2.0, k + 1);
      const double value = (k & 1) ? 1.0 : 2.0;
      levels.push_back({lo, hi, value});
    }
    std::vector<StepLevel> mirrored;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it)
      mirrored.push_back({-it->hi, -it->lo, it->value});
    mirrored.insert(mirrored.end(), levels.begin(), levels.end());
    WeightSpec st = make_dyadic_step(std::move(mirrored));
    st.name = "step";
    st.classification = classify(TriState::yes, TriState::yes, TriState::no);
    v.emplace_back("step", std::move(st));

    return v;
  }();
  return entries;
}

const WeightSpec& catalog_lookup(std::string_view name) {
  for (const auto& [n, spec] : catalog())
    if (n == name) return spec;
  throw DomainError("unknown catalog weight: " + std::string(name));
}

std::string weight_to_json(const WeightSpec& spec) {
  nlohmann::json j;
  std::visit(
      [&j](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          j["family"] = "constant";
          j["params"] = {{"c", fam.c}};
        } else if constexpr (std::is_same_v<T, PowerW>) {
          j["family"] = "power";
          j["params"] = {{"a", fam.a}};
        } else if constexpr (std::is_same_v<T, ExpSineW>) {
          j["family"] = "expsine";
          j["params"] = {{"eps", fam.eps}, {"freq", fam.freq}};
        } else if constexpr (std::is_same_v<T, DyadicStepW>) {
          j["family"] = "step";
          nlohmann::json lv = nlohmann::json::array();
          for (const StepLevel& l : fam.levels) lv.push_back({l.lo, l.hi, l.value});
          j["params"] = {{"levels", lv}};
        } else {
          j["family"] = "sampled";
          j["params"] = {{"xs", fam.xs}, {"ws", fam.ws}};
        }
      },
      spec.family);
  if (spec.claimed_doubling) j["claimed_doubling"] = *spec.claimed_doubling;
  if (!spec.name.empty()) j["name"] = spec.name;
  j["classification"] = {{"is_ainfty", tri_name(spec.classification.is_ainfty)},
                         {"log_in_bmo", tri_name(spec.classification.log_in_bmo)},
                         {"log_in_vmo", tri_name(spec.classification.log_in_vmo)}};
  return j.dump(2);
}

WeightSpec weight_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("weight spec parse error: ") + e.what());
  }
  try {
    const std::string family = j.at("family").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    WeightSpec spec;
    if (family == "constant") {
      spec = make_constant(params.value("c", 1.0));
    } else if (family == "power") {
      spec = make_power(params.at("a").get<double>());
    } else if (family == "expsine") {
      spec = make_expsine(params.value("eps", 1.0), params.value("freq", 1.0));
    } else if (family == "step") {
      std::vector<StepLevel> levels;
      for (const auto& l : params.at("levels"))
        levels.push_back({l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>()});
      spec = make_dyadic_step(std::move(levels));
    } else if (family == "sampled") {
      spec = make_sampled(params.at("xs").get<std::vector<double>>(),
                          params.at("ws").get<std::vector<double>>());
    } else {
      throw DomainError("unknown weight family: " + family);
    }
    if (j.contains("claimed_doubling")) spec.claimed_doubling = j["claimed_doubling"].get<double>();
    if (j.contains("name")) spec.name = j["name"].get<std::string>();
    if (j.contains("classification")) {
      const auto& c = j["classification"];
      spec.classification.is_ainfty = tri_parse(c.value("is_ainfty", "unknown"));
      spec.classification.log_in_bmo = tri_parse(c.value("log_in_bmo", "unknown"));
      spec.classification.log_in_vmo = tri_parse(c.value("log_in_vmo", "unknown"));
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("weight spec field error: ") + e.what());
  }
}

WeightSpec weight_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open weight spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return weight_from_json(ss.str());
}

}  // namespace heatqc
