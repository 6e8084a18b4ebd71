#pragma once

// The fixed-point operator
//   Phi(zeta)(sigma) = 3/(alpha pi) sin(sigma + (1/3)(H zeta)(sigma))
//                      * cot(sigma) / exp(integral_0^sigma zeta ds)
// and its capped variants Phi_k, where cot is replaced by
// q_k(sigma) = cot(1/k) on (0, 1/k]. H is applied spectrally through a cached
// sine table; the running integral uses the grid's cumulative rule. Clamping
// of negative iterates is the solver's job, not Phi's.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sinkflow/flow_params.hpp"
#include "sinkflow/grid.hpp"
#include "sinkflow/sine_series.hpp"

namespace sinkflow {

inline constexpr double reg_unbounded = std::numeric_limits<double>::infinity();

class PhiOperator {
 public:
  PhiOperator(Grid grid, int modes)
      : grid_(std::move(grid)), table_(grid_, modes) {
    cot_.resize(grid_.size());
    for (int j = 0; j < grid_.size(); ++j) {
      double s = grid_.nodes[j];
      cot_[j] = (s == half_pi) ? 0.0 : std::cos(s) / std::sin(s);
    }
  }

  const Grid& grid() const { return grid_; }
  const SineTable& table() const { return table_; }
  int modes() const { return table_.modes(); }
  double cot_node(int j) const { return cot_[j]; }

  SineSeries project(const std::vector<double>& f) const {
    return table_.project(f);
  }

  // theta = (1/3) H zeta at the nodes; exactly 0 at sigma = pi/2.
  std::vector<double> theta(const std::vector<double>& zeta) const {
    SineSeries t = h_apply_spectral(table_.project(zeta));
    for (double& c : t.c) c /= 3.0;
    return table_.synthesize(t);
  }

  // Sine coefficients of theta (useful for derivative evaluations).
  SineSeries theta_series(const std::vector<double>& zeta) const {
    SineSeries t = h_apply_spectral(table_.project(zeta));
    for (double& c : t.c) c /= 3.0;
    return t;
  }

  std::vector<double> eta(const std::vector<double>& zeta) const {
    std::vector<double> e = theta(zeta);
    for (int j = 0; j < grid_.size(); ++j) e[j] += grid_.nodes[j];
    return e;
  }

  // Phi_k(zeta); reg_k = reg_unbounded (or any non-finite value) means the
  // uncapped operator. Requires zeta >= 0 at every node.
  std::vector<double> apply(const std::vector<double>& zeta,
                            const FlowParams& p,
                            double reg_k = reg_unbounded) const {
    if (static_cast<int>(zeta.size()) != grid_.size())
      throw std::invalid_argument("PhiOperator::apply: size mismatch");
    for (double z : zeta)
      if (!(z >= 0.0))
        throw std::invalid_argument("PhiOperator::apply: zeta must be nonnegative");
    if (std::isfinite(reg_k) && !(reg_k >= 1.0))
      throw std::invalid_argument("PhiOperator::apply: regularization index must be >= 1");

    std::vector<double> th = theta(zeta);
    std::vector<double> cum = cumulative_integral(grid_, zeta);
    double amp = 3.0 / (p.alpha * pi);
    bool capped = std::isfinite(reg_k);
    double cap_point = capped ? 1.0 / reg_k : 0.0;
    double cap_value = capped ? std::cos(cap_point) / std::sin(cap_point) : 0.0;

    std::vector<double> out(zeta.size());
    for (int j = 0; j < grid_.size(); ++j) {
      double s = grid_.nodes[j];
      double qk = (capped && s <= cap_point) ? cap_value : cot_[j];
      out[j] = amp * std::sin(s + th[j]) * qk * std::exp(-cum[j]);
    }
    return out;
  }

  double norm(const std::vector<double>& f) const { return l2_norm(grid_, f); }

 private:
  Grid grid_;
  SineTable table_;
  std::vector<double> cot_;
};

}  // namespace sinkflow
