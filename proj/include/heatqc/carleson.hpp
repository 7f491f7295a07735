#pragma once

#include <utility>
#include <vector>

#include "heatqc/extension.hpp"

namespace heatqc {

/// Inner tensor grid of one Carleson box: nx midpoint cells across the base
/// interval, ns trapezoid nodes log-uniform in s on [s_cutoff_ratio * t, t].
struct InnerGrid {
  int nx = 32;
  int ns = 24;
  double s_cutoff_ratio = 1e-4;
};

struct CarlesonBox {
  double x0 = 0.0;
  double t = 0.0;
  double A = 0.0;            // (1/t) int_0^t int_{|x-x0|<t} |mu|^2 dx ds/s
  double thm3_energy = 0.0;  // (1/t) int_0^{t^2} int (u'/u)^2 dx dsigma, via sigma = s^2
  double thm5_energy = 0.0;  // same with the extra sigma factor and u''
  double quad_error = 0.0;   // per-sample budgets plus the extrapolated s-tail
  int samples = 0;
};

CarlesonBox box_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                       const InnerGrid& grid = {});

/// Standalone sigma-space routes of the two energies (log grid in sigma on
/// [(ratio*t)^2, t^2], trapezoid against d sigma, power-law tail below).
double thm3_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                   const InnerGrid& grid = {});
double thm5_energy(const WeightSpec& spec, double x0, double t, const QuadratureConfig& cfg,
                   const InnerGrid& grid = {});

struct RefinementStep {
  int n_x0 = 0;
  int n_t = 0;
  double sup = 0.0;
};

struct CarlesonReport {
  std::vector<CarlesonBox> boxes;
  double sup_estimate = 0.0;
  std::vector<RefinementStep> refinement_history;
  std::vector<std::pair<double, double>> vanishing_profile;  // (t, sup over x0 of A)
};

/// Box energies over an (x0, t) grid (t log-spaced), sup estimate, and a
/// refinement history produced by grid doubling (n -> 2n - 1, so refined grids
/// contain the previous boxes) until the sup moves less than `stability` or
/// `max_refinements` is reached. Per-box failures are recorded, the scan
/// completes.
CarlesonReport carleson_scan(const WeightSpec& spec, double x_lo, double x_hi, double t_lo,
                             double t_hi, int n_x0, int n_t, const QuadratureConfig& cfg,
                             const InnerGrid& grid = {}, int max_refinements = 3,
                             double stability = 0.05);

/// (t, sup over the x0 grid of A(x0, t)) for each requested t, decreasing t's.
std::vector<std::pair<double, double>> vanishing_profile(const WeightSpec& spec,
                                                         std::span<const double> x0_grid,
                                                         std::span<const double> t_decades,
                                                         const QuadratureConfig& cfg,
                                                         const InnerGrid& grid = {});

}  // namespace heatqc
