#pragma once

// Flow regime parameters. alpha = Fr^2/2 is the reduced Froude number; the
// regime thresholds are the constants under which existence, uniqueness, and
// the cusp geometry results hold.

#include <cmath>
#include <stdexcept>

#include "sinkflow/grid.hpp"

namespace sinkflow {
namespace bounds {

// 2/pi * (1 + 1/(3 sqrt(pi))): alpha at or above this guarantees a solution.
inline double existence_threshold() {
  return 2.0 / pi * (1.0 + 1.0 / (3.0 * std::sqrt(pi)));
}

// 8/pi: alpha strictly above this makes the fixed point unique.
inline double uniqueness_threshold() { return 8.0 / pi; }

// 5/sqrt(8): alpha strictly above this keeps the inclination below pi/2
// everywhere except the cusp.
inline double cusp_threshold() { return 5.0 / std::sqrt(8.0); }

// 9 sqrt(pi)/2: L2 ball radius containing every solution.
inline double ball_radius() { return 4.5 * std::sqrt(pi); }

// B^2 = pi log 2 - pi^3/24 = integral_0^{pi/2} (sigma cot sigma)^2; < 1.
inline double b_squared() { return pi * std::log(2.0) - pi * pi * pi / 24.0; }

// Lipschitz constant of the fixed-point operator on the nonnegative cone.
inline double contraction_bound(double alpha) { return 8.0 / (alpha * pi); }

// Bound on ||(tau' sin sigma)'|| for the solved flow.
inline double smoothness_bound(double alpha) {
  return 7.0 / (alpha * std::sqrt(pi));
}

// Boundary value of the log-speed trace at sigma = 0.
inline double tau_origin() { return std::log(half_pi); }

}  // namespace bounds

struct FlowParams {
  double alpha;

  explicit FlowParams(double a) : alpha(a) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("FlowParams: alpha must be positive and finite");
  }

  static FlowParams from_froude(double fr) {
    if (!(fr > 0.0) || !std::isfinite(fr))
      throw std::invalid_argument("FlowParams: Froude number must be positive and finite");
    return FlowParams(fr * fr / 2.0);
  }

  double froude() const { return std::sqrt(2.0 * alpha); }

  bool existence_guaranteed() const {
    return alpha >= bounds::existence_threshold();
  }
  bool uniqueness_guaranteed() const {
    return alpha > bounds::uniqueness_threshold();
  }
  bool cusp_asymptotics_guaranteed() const { return alpha > bounds::cusp_threshold(); }
};

}  // namespace sinkflow
