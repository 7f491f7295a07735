#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "heatqc/integrate.hpp"
#include "heatqc/primitive_cache.hpp"

namespace heatqc {

enum class TriState { yes, no, unknown };

struct Classification {
  TriState is_ainfty = TriState::unknown;
  TriState log_in_bmo = TriState::unknown;
  TriState log_in_vmo = TriState::unknown;
};

struct ConstantW {
  double c = 1.0;
};

/// omega(x) = |x|^a, a > -1 so the primitive is finite.
struct PowerW {
  double a = 0.0;
};

/// omega(x) = exp(eps * sin(k x)).
struct ExpSineW {
  double eps = 1.0;
  double freq = 1.0;
};

/// Piecewise-constant weight: value levels[i].value on [levels[i].lo, levels[i].hi),
/// 1 outside all listed intervals. Intervals must be disjoint and sorted.
struct StepLevel {
  double lo, hi, value;
};
struct DyadicStepW {
  std::vector<StepLevel> levels;
};

/// Monotone piecewise-linear interpolation of tabulated omega values, extended
/// by the boundary values outside the table.
struct SampledW {
  std::vector<double> xs;
  std::vector<double> ws;
};

struct WeightSpec {
  std::variant<ConstantW, PowerW, ExpSineW, DyadicStepW, SampledW> family;
  std::optional<double> claimed_doubling{};
  Classification classification{};
  std::string name{};

  // Memoized primitive anchors, shared across copies. Thread-safe.
  std::shared_ptr<PrimitiveCache> cache = std::make_shared<PrimitiveCache>();
};

WeightSpec make_constant(double c);
WeightSpec make_power(double a);
WeightSpec make_expsine(double eps, double freq);
WeightSpec make_dyadic_step(std::vector<StepLevel> levels);
WeightSpec make_sampled(std::vector<double> xs, std::vector<double> ws);

/// omega(x) > 0. Throws SingularityError for Power(a<0) at x = 0.
double weight_eval(const WeightSpec& spec, double x);

/// log omega(x).
double weight_log_eval(const WeightSpec& spec, double x);

/// f(x) = int_0^x omega, strictly increasing, f(0) = 0; closed forms where the
/// family admits them, cached adaptive quadrature otherwise. Absolute error <= tol.
double weight_primitive(const WeightSpec& spec, double x, double tol);

/// Points where omega jumps or has an integrable singularity.
std::vector<double> weight_breakpoints(const WeightSpec& spec);

/// True when the family has an integrable singularity at x = 0 (Power a < 0).
bool weight_singular_at_zero(const WeightSpec& spec);

/// max over the sampled (center, scale) pairs of int_{2I} omega / int_I omega;
/// a lower bound for the doubling constant.
double doubling_estimate(const WeightSpec& spec, std::span<const double> centers,
                         std::span<const double> scales, double tol = 1e-10);

/// Safe a-priori doubling bound: claimed_doubling if set, else a family bound,
/// else a fallback for the tail certification.
double doubling_bound(const WeightSpec& spec);

const std::vector<std::pair<std::string, WeightSpec>>& catalog();
const WeightSpec& catalog_lookup(std::string_view name);

/// JSON document {family, params, classification, claimed_doubling?, name?}.
std::string weight_to_json(const WeightSpec& spec);
WeightSpec weight_from_json(const std::string& text);
WeightSpec weight_from_json_file(const std::string& path);

}  // namespace heatqc
