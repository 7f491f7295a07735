#include "heatqc/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "heatqc/errors.hpp"

namespace heatqc {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0) || !(abs_tol > 0.0 && abs_tol < 1.0))
    throw DomainError("quadrature tolerances must lie in (0,1)");
  if (max_panels < 16) throw DomainError("max_panels must be >= 16");
  if (annulus_budget < 4) throw DomainError("annulus_budget must be >= 4");
}

namespace {

// Gauss-Kronrod (7,15) nodes and weights on [-1,1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule (nodes 1, 3, 5, 7 above).
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
  double kronrod;
  double err;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodNodes[i]);
    fv[14 - i] = f(c + h * kKronrodNodes[i]);
  }
  fv[7] = f(c);

  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) resk += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  resk += kKronrodWeights[7] * fv[7];
  for (int i = 0; i < 3; ++i) resg += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += kGaussWeights[3] * fv[7];

  resk *= h;
  resg *= h;

  // QUADPACK-style scaled error estimate.
  const double reskh = resk * 0.5 / h;
  double resasc = 0.0;
  for (int i = 0; i < 7; ++i)
    resasc += kKronrodWeights[i] * (std::fabs(fv[i] - reskh) + std::fabs(fv[14 - i] - reskh));
  resasc += kKronrodWeights[7] * std::fabs(fv[7] - reskh);
  resasc *= std::fabs(h);

  double err = std::fabs(resk - resg);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {resk, err};
}

struct Panel {
  double a, b;
  double value, err;
  const std::function<double(double)>* f;
};

struct PanelLess {
  bool operator()(const Panel& p, const Panel& q) const { return p.err < q.err; }
};

}  // namespace

QuadratureResult integrate_regions(std::vector<Region> seeds, const QuadratureConfig& cfg) {
  QuadratureResult out;
  if (seeds.empty()) return out;

  // The functions must outlive the heap entries; keep the seed storage alive.
  std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
  double total = 0.0, toterr = 0.0;
  int panels = 0;

  for (const Region& r : seeds) {
    if (!(r.b > r.a)) continue;
    PanelEval e = gk15(r.f, r.a, r.b);
    heap.push(Panel{r.a, r.b, e.kronrod, e.err, &r.f});
    total += e.kronrod;
    toterr += e.err;
    ++panels;
  }

  while (panels < cfg.max_panels) {
    if (toterr <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total))) break;
    if (heap.empty()) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval exhausted at machine precision; accept its error as final.
      heap.push(worst);
      break;
    }
    PanelEval left = gk15(*worst.f, worst.a, mid);
    PanelEval right = gk15(*worst.f, mid, worst.b);
    total += left.kronrod + right.kronrod - worst.value;
    toterr += left.err + right.err - worst.err;
    heap.push(Panel{worst.a, mid, left.kronrod, left.err, worst.f});
    heap.push(Panel{mid, worst.b, right.kronrod, right.err, worst.f});
    ++panels;
  }

  // Re-accumulate from the heap to undo incremental-update drift.
  {
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
      v += heap.top().value;
      e += heap.top().err;
      heap.pop();
    }
    total = v;
    toterr = e;
  }

  out.value = total;
  out.error_estimate = toterr;
  out.panels_used = panels;
  if (toterr > std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total)))
    out.status = QuadStatus::tolerance_not_met;
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
  std::vector<Region> seeds;
  seeds.push_back(Region{a, b, f});
  return integrate_regions(std::move(seeds), cfg);
}

QuadratureResult integrate_split(const std::function<double(double)>& f, double a, double b,
                                 std::span<const double> breaks, const QuadratureConfig& cfg) {
  std::vector<double> cuts = clip_breaks(breaks, a, b);
  std::vector<Region> seeds;
  double lo = a;
  for (double c : cuts) {
    seeds.push_back(Region{lo, c, f});
    lo = c;
  }
  seeds.push_back(Region{lo, b, f});
  return integrate_regions(std::move(seeds), cfg);
}

double integrate_dense(const std::function<double(double)>& f, double a, double b, long n) {
  if (n <= 0 || !(b > a)) return 0.0;
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = a + (static_cast<double>(i) + 0.5) * h;
    const double v = f(x);
    if (std::isfinite(v)) sum += v;  // integrable singularities: drop the stray node
  }
  return sum * h;
}

double envelope_tail_integral(double amp, double rate, double r) {
  if (r < 0.0) r = 0.0;
  const double b = rate;
  const double sb = std::sqrt(b);
  const double erfc_term = 0.5 * std::sqrt(M_PI / b) * std::erfc(sb * r);
  // int_r^inf e^{-b u^2} du = erfc_term
  // int_r^inf u^2 e^{-b u^2} du = r/(2b) e^{-b r^2} + erfc_term/(2b)
  const double i0 = erfc_term;
  const double i2 = r / (2.0 * b) * std::exp(-b * r * r) + erfc_term / (2.0 * b);
  return 2.0 * amp * (i0 + i2);
}

std::vector<double> clip_breaks(std::span<const double> breaks, double a, double b) {
  std::vector<double> cuts;
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace heatqc
