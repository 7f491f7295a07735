#pragma once

#include <map>
#include <mutex>

namespace heatqc {

/// Append-only memo of int_0^n omega at integer anchors. Single mutex; writers
/// extend the anchor range, readers look up. Shared across copies of a spec.
struct PrimitiveCache {
  std::mutex m;
  std::map<long, double> cum;
  double anchor_tol = 1e-13;
};

}  // namespace heatqc
