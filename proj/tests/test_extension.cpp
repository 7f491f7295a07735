#include <doctest.h>

#include <cmath>

#include "heatqc/errors.hpp"
#include "heatqc/extension.hpp"
#include "oracle_utils.hpp"

using namespace heatqc;

namespace {
const double kSqrtPi = std::sqrt(M_PI);
const QuadratureConfig kCfg{};

QuadratureConfig tight_cfg() {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-14;
  return cfg;
}
}  // namespace

TEST_CASE("heat solution of the unit weight") {
  WeightSpec unit = make_constant(1.0);
  HeatSolution h = heat_solution(unit, 2.7, 0.8, kCfg);
  CHECK(std::fabs(h.u - 1.0) < 1e-10);
  CHECK(std::fabs(h.u_x) < 1e-10);
  CHECK(std::fabs(h.u_xx) < 1e-9);
  CHECK_THROWS_AS(heat_solution(unit, 0.0, -1.0, kCfg), DomainError);
}

TEST_CASE("heat solution of the sqrt weight at the origin") {
  WeightSpec sq = catalog_lookup("sqrt");
  const double m_half = std::tgamma(0.75) / kSqrtPi;

  HeatSolution h = heat_solution(sq, 0.0, 1.0, kCfg);
  CHECK(std::fabs(h.u - m_half) < 1e-9);
  CHECK(std::fabs(h.u_x) < 1e-9);

  // Homogeneity: u(0, s) = s^{1/4} u(0, 1) for omega = |x|^{1/2}.
  for (double s : oracle::logspace(1e-3, 1e3, 7)) {
    HeatSolution hs = heat_solution(sq, 0.0, s, kCfg);
    CHECK(hs.u == doctest::Approx(std::pow(s, 0.25) * m_half).epsilon(1e-8));
    CHECK(hs.u > 0.0);
  }
}

TEST_CASE("extension of the unit weight is the identity map") {
  WeightSpec unit = make_constant(1.0);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 12; ++i) {
    const double x = oracle::uniform(rng, -8.0, 8.0);
    const double t = oracle::uniform(rng, 0.05, 6.0);
    ExtensionPoint p = extension_point(unit, x, t, kCfg);
    CHECK(std::fabs(p.U - x) < 1e-9);
    CHECK(std::fabs(p.V - t) < 1e-9);
  }

  WeightSpec two = make_constant(2.0);
  ExtensionPoint p = extension_point(two, 1.5, 0.75, kCfg);
  CHECK(p.U == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(p.V == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("extension point against the dense oracle") {
  WeightSpec es = catalog_lookup("expsine");
  const Kernel& phi = kernel("phi");
  const Kernel& psi = kernel("psi");
  for (double x : {0.0, 1.3}) {
    ExtensionPoint p = extension_point(es, x, 1.0, kCfg);
    auto fU = [&](double z) { return weight_primitive(es, x - z, 1e-12) * phi.profile(z); };
    auto fV = [&](double z) { return weight_primitive(es, x - z, 1e-12) * psi.profile(z); };
    const double U_ref = oracle::midpoint(fU, -40.0, 40.0, 400000);
    const double V_ref = oracle::midpoint(fV, -40.0, 40.0, 400000);
    CHECK(std::fabs(p.U - U_ref) < 1e-6);
    CHECK(std::fabs(p.V - V_ref) < 1e-6);
  }
}

TEST_CASE("derivative matrix closed forms") {
  WeightSpec unit = make_constant(1.0);
  DerivativeMatrix d = derivative_matrix(unit, -1.2, 0.6, kCfg);
  CHECK(std::fabs(d.U_x - 1.0) < 1e-10);
  CHECK(std::fabs(d.U_t) < 1e-10);
  CHECK(std::fabs(d.V_x) < 1e-10);
  CHECK(std::fabs(d.V_t - 1.0) < 1e-10);

  WeightSpec sq = catalog_lookup("sqrt");
  DerivativeMatrix ds = derivative_matrix(sq, 0.0, 2.0, kCfg);
  CHECK(std::fabs(ds.V_x) < 1e-9);

  // U_t is literally half of V_x: shared computation path.
  std::mt19937_64 rng(32);
  for (const auto& [name, spec] : catalog())
    for (int i = 0; i < 4; ++i) {
      const double x = oracle::uniform(rng, -4.0, 4.0);
      const double t = oracle::uniform(rng, 0.1, 3.0);
      DerivativeMatrix m = derivative_matrix(spec, x, t, kCfg);
      CHECK(m.U_t == 0.5 * m.V_x);
      CHECK(std::fabs(m.V_x) == 2.0 * std::fabs(m.U_t));
    }
}

TEST_CASE("closed-form derivatives match Richardson finite differences") {
  QuadratureConfig cfg = tight_cfg();
  std::mt19937_64 rng(33);
  for (const auto& [name, spec] : catalog()) {
    const double x = oracle::uniform(rng, -2.0, 2.0);
    const double t = oracle::uniform(rng, 0.3, 2.0);
    DerivativeMatrix d = derivative_matrix(spec, x, t, cfg);

    const double h = t / 50.0;
    auto richardson = [](double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; };

    auto point = [&](double xx, double tt) { return extension_point(spec, xx, tt, cfg); };
    ExtensionPoint xp1 = point(x + h, t), xm1 = point(x - h, t);
    ExtensionPoint xp2 = point(x + h / 2, t), xm2 = point(x - h / 2, t);
    const double Ux = richardson((xp2.U - xm2.U) / h, (xp1.U - xm1.U) / (2.0 * h));
    const double Vx = richardson((xp2.V - xm2.V) / h, (xp1.V - xm1.V) / (2.0 * h));

    ExtensionPoint tp1 = point(x, t + h), tm1 = point(x, t - h);
    ExtensionPoint tp2 = point(x, t + h / 2), tm2 = point(x, t - h / 2);
    const double Ut = richardson((tp2.U - tm2.U) / h, (tp1.U - tm1.U) / (2.0 * h));
    const double Vt = richardson((tp2.V - tm2.V) / h, (tp1.V - tm1.V) / (2.0 * h));

    CAPTURE(name);
    const double scale = std::fabs(d.U_x) + std::fabs(d.V_t);
    CHECK(std::fabs(Ux - d.U_x) < 1e-5 * scale);
    CHECK(std::fabs(Vx - d.V_x) < 1e-5 * scale);
    CHECK(std::fabs(Ut - d.U_t) < 1e-5 * scale);
    CHECK(std::fabs(Vt - d.V_t) < 1e-5 * scale);
  }
}

TEST_CASE("dilatation of the identity map vanishes") {
  WeightSpec unit = make_constant(1.0);
  ExtensionSample s = beltrami(unit, 0.4, 1.7, kCfg);
  CHECK(std::abs(s.mu) < 1e-9);
  CHECK(std::fabs(s.K - 1.0) < 1e-8);
  CHECK(s.J == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(!s.flagged);
}

TEST_CASE("power weights have scale-free dilatation on the vertical ray") {
  // On x = 0 all four derivatives scale the same way, so mu is constant in t
  // and equals -a/(a+2).
  for (double a : {0.5, -0.5}) {
    WeightSpec w = make_power(a);
    const double expected = -a / (a + 2.0);
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
      ExtensionSample s = beltrami(w, 0.0, t, kCfg);
      CHECK(std::fabs(s.mu.real() - expected) < 1e-7);
      CHECK(std::fabs(s.mu.imag()) < 1e-9);
      CHECK(s.J > 0.0);
    }
  }
}

TEST_CASE("quasiconformal range over a small catalog sweep") {
  double sup_K = 0.0;
  for (const auto& [name, spec] : catalog())
    for (double x : oracle::linspace(-4.0, 4.0, 5))
      for (double t : oracle::logspace(0.01, 10.0, 7)) {
        ExtensionSample s = beltrami(spec, x, t, kCfg);
        CAPTURE(name);
        CAPTURE(x);
        CAPTURE(t);
        CHECK(s.J > 0.0);
        CHECK(std::abs(s.mu) < 1.0);
        sup_K = std::max(sup_K, s.K);
      }
  MESSAGE("sup K over the small sweep: ", sup_K);
  CHECK(std::isfinite(sup_K));
}

TEST_CASE("gradient-to-solution ratio stays bounded (measured)") {
  // sqrt(s) |u_x| / u over a log grid; the per-weight sup is the measured
  // companion of the existential constant.
  for (const auto& [name, spec] : catalog()) {
    double sup = 0.0;
    for (double x : oracle::linspace(-10.0, 10.0, 9))
      for (double s : oracle::logspace(1e-4, 1e4, 9)) {
        HeatSolution h = heat_solution(spec, x, s, kCfg);
        sup = std::max(sup, std::sqrt(s) * std::fabs(h.u_x) / h.u);
      }
    MESSAGE("weight ", name, ": sup sqrt(s)|u_x|/u = ", sup);
    CHECK(sup < 20.0);
  }
}

TEST_CASE("vertical stretch is comparable to the horizontal one") {
  for (const auto& [name, spec] : catalog()) {
    double lo = 1e300, hi = 0.0;
    for (double x : oracle::linspace(-10.0, 10.0, 9))
      for (double t : oracle::logspace(1e-2, 1e2, 9)) {
        DerivativeMatrix d = derivative_matrix(spec, x, t, kCfg);
        const double r = d.V_t / d.U_x;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    CAPTURE(name);
    MESSAGE("weight ", name, ": V_t/U_x in [", lo, ", ", hi, "]");
    CHECK(lo > 0.05);
    CHECK(hi < 20.0);
  }
}

TEST_CASE("three gaussian moments of the weight are pairwise comparable") {
  Kernel abs_phi;
  abs_phi.name = "abs_phi";
  abs_phi.profile = [](double u) { return std::fabs(u) * std::exp(-u * u) / kSqrtPi; };
  abs_phi.envelope_amp = 1.0 / kSqrtPi;
  abs_phi.envelope_rate = 1.0;
  abs_phi.parity = Parity::even;
  abs_phi.support_radius = std::numeric_limits<double>::infinity();
  abs_phi.discontinuities = {0.0};  // kink

  for (const auto& [name, spec] : catalog()) {
    double lo12 = 1e300, hi12 = 0.0, lo23 = 1e300, hi23 = 0.0;
    for (double x : oracle::linspace(-6.0, 6.0, 7))
      for (double t : oracle::logspace(1e-2, 1e2, 7)) {
        const double k1 =
            convolve_point(spec, kernel("phi"), ScaleKind::length_scale, t, x, kCfg).value;
        const double k2 = convolve_point(spec, abs_phi, ScaleKind::length_scale, t, x, kCfg).value;
        const double k3 =
            convolve_point(spec, kernel("phi_tilde"), ScaleKind::length_scale, t, x, kCfg).value;
        lo12 = std::min(lo12, k1 / k2);
        hi12 = std::max(hi12, k1 / k2);
        lo23 = std::min(lo23, k2 / k3);
        hi23 = std::max(hi23, k2 / k3);
      }
    CAPTURE(name);
    MESSAGE("weight ", name, ": m0/m1 in [", lo12, ",", hi12, "], m1/m2 in [", lo23, ",", hi23, "]");
    CHECK(lo12 > 0.05);
    CHECK(hi12 < 20.0);
    CHECK(lo23 > 0.05);
    CHECK(hi23 < 20.0);
  }
}

TEST_CASE("boundary values recover f and kill V") {
  std::mt19937_64 rng(34);
  for (const auto& [name, spec] : catalog()) {
    const double x = oracle::uniform(rng, -2.0, 2.0);
    const double fx = weight_primitive(spec, x, 1e-12);
    double prev_u = 1e300, prev_v = 1e300;
    for (int k = 2; k <= 14; k += 2) {
      const double t = std::pow(2.0, -k);
      ExtensionPoint p = extension_point(spec, x, t, kCfg);
      const double du = std::fabs(p.U - fx);
      const double dv = std::fabs(p.V);
      CHECK(du < prev_u + 1e-12);
      CHECK(dv < prev_v + 1e-12);
      prev_u = du;
      prev_v = dv;
    }
    CAPTURE(name);
    CHECK(prev_u < 1e-3);
    CHECK(prev_v < 1e-3);
  }
}

TEST_CASE("V stays positive on catalog grids") {
  for (const auto& [name, spec] : catalog())
    for (double x : oracle::linspace(-5.0, 5.0, 5))
      for (double t : {0.1, 1.0, 10.0}) {
        ExtensionPoint p = extension_point(spec, x, t, kCfg);
        CAPTURE(name);
        CHECK(p.V > 0.0);
      }
}

TEST_CASE("degenerate samples raise or get flagged") {
  DerivativeMatrix bad;
  bad.U_x = 1.0;
  bad.V_t = -0.5;  // J < 0, |mu| = 3
  CHECK_THROWS_AS(beltrami_from(bad, 0.0, 1.0), NonQuasiconformalSample);

  try {
    beltrami_from(bad, 0.25, 1.5);
  } catch (const NonQuasiconformalSample& e) {
    CHECK(e.x == 0.25);
    CHECK(e.t == 1.5);
    CHECK(e.jacobian < 0.0);
    CHECK(e.abs_mu > 1.0);
  }

  // Same numbers but with an error budget wide enough to explain them.
  DerivativeMatrix shaky = bad;
  shaky.err_V_t = 3.0;
  ExtensionSample s = beltrami_from(shaky, 0.0, 1.0);
  CHECK(s.flagged);

  DerivativeMatrix degenerate;
  degenerate.U_x = 1.0;
  degenerate.V_t = -1.0;  // dF = 0
  CHECK_THROWS_AS(beltrami_from(degenerate, 0.0, 1.0), NonQuasiconformalSample);
}
