#pragma once

// Sine expansions f(sigma) = sum_k c_k sin(2 k sigma) on (0, pi/2) and the
// smoothing operator H, which is diagonal on this basis with eigenvalues
// 1/(2k). Norms follow Parseval: ||f||^2 = (pi/4) sum c_k^2.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sinkflow/grid.hpp"

namespace sinkflow {

struct SineSeries {
  std::vector<double> c;  // c[k-1] multiplies sin(2 k sigma)

  int modes() const { return static_cast<int>(c.size()); }
};

// Exactly 0 at sigma = 0 and sigma = pi/2 (every basis function vanishes).
inline double eval_series(const SineSeries& s, double sigma) {
  if (sigma == 0.0 || sigma == half_pi) return 0.0;
  double v = 0.0;
  for (int k = 1; k <= s.modes(); ++k) v += s.c[k - 1] * std::sin(2.0 * k * sigma);
  return v;
}

inline double eval_series_deriv(const SineSeries& s, double sigma) {
  double v = 0.0;
  for (int k = 1; k <= s.modes(); ++k)
    v += 2.0 * k * s.c[k - 1] * std::cos(2.0 * k * sigma);
  return v;
}

inline double parseval_norm(const SineSeries& s) {
  double q = 0.0;
  for (double c : s.c) q += c * c;
  return std::sqrt(q * pi / 4.0);
}

inline SineSeries h_apply_spectral(const SineSeries& w) {
  SineSeries u = w;
  for (int k = 1; k <= u.modes(); ++k) u.c[k - 1] /= 2.0 * k;
  return u;
}

// Cached sin(2 k sigma_j) table for projection and synthesis on a fixed grid.
// The row at sigma = pi/2 is exactly zero so endpoint identities hold exactly.
class SineTable {
 public:
  SineTable(const Grid& g, int modes) : modes_(modes) {
    if (modes < 1) throw std::invalid_argument("SineTable: modes must be >= 1");
    if (2 * modes > g.size())
      throw std::invalid_argument("SineTable: modes exceed the aliasing guard (need modes <= nodes/2)");
    int M = g.size();
    S_.resize(M, modes);
    wsin_.resize(M, modes);
    for (int j = 0; j < M; ++j) {
      double sj = g.nodes[j];
      for (int k = 1; k <= modes; ++k) {
        double v = (sj == half_pi) ? 0.0 : std::sin(2.0 * k * sj);
        S_(j, k - 1) = v;
        wsin_(j, k - 1) = g.weights[j] * v;
      }
    }
  }

  int modes() const { return modes_; }

  // b_k = (4/pi) * integral of f(s) sin(2 k s) ds by grid quadrature.
  SineSeries project(const std::vector<double>& f) const {
    if (static_cast<int>(f.size()) != S_.rows())
      throw std::invalid_argument("SineTable::project: size mismatch");
    Eigen::Map<const Eigen::VectorXd> fv(f.data(), f.size());
    Eigen::VectorXd b = (4.0 / pi) * (wsin_.transpose() * fv);
    SineSeries s;
    s.c.assign(b.data(), b.data() + b.size());
    return s;
  }

  std::vector<double> synthesize(const SineSeries& s) const {
    if (s.modes() != modes_)
      throw std::invalid_argument("SineTable::synthesize: mode count mismatch");
    Eigen::Map<const Eigen::VectorXd> cv(s.c.data(), s.c.size());
    Eigen::VectorXd f = S_ * cv;
    return std::vector<double>(f.data(), f.data() + f.size());
  }

 private:
  int modes_;
  Eigen::MatrixXd S_;     // M x N
  Eigen::MatrixXd wsin_;  // weights folded in for projection
};

// One-shot projection (builds no table); N limited by the aliasing guard.
inline SineSeries project_to_sine(const Grid& g, const std::vector<double>& f,
                                  int modes) {
  if (modes < 1) throw std::invalid_argument("project_to_sine: modes must be >= 1");
  if (2 * modes > g.size())
    throw std::invalid_argument("project_to_sine: modes exceed the aliasing guard (need modes <= nodes/2)");
  if (static_cast<int>(f.size()) != g.size())
    throw std::invalid_argument("project_to_sine: size mismatch");
  SineSeries s;
  s.c.assign(modes, 0.0);
  for (int k = 1; k <= modes; ++k) {
    double acc = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      double v = (g.nodes[j] == half_pi) ? 0.0 : std::sin(2.0 * k * g.nodes[j]);
      acc += g.weights[j] * f[j] * v;
    }
    s.c[k - 1] = acc * 4.0 / pi;
  }
  return s;
}

}  // namespace sinkflow
