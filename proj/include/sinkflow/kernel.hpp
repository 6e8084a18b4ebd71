#pragma once

// The quarter-circle log kernel K(s, sigma) = log|sin(s+sigma)/sin(s-sigma)|,
// its sine-series form 2 sum_k sin(2k s) sin(2k sigma)/k, and a direct
// quadrature of (Hw)(sigma) = (1/pi) integral K(s, sigma) w(s) ds used as an
// independent oracle for the spectral application of H.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sinkflow/grid.hpp"

namespace sinkflow {

// K >= 0 on [0, pi/2]^2, zero when either argument is 0 or pi/2, +inf on the
// diagonal. Near the diagonal the tan form log|(tan s + tan o)/(tan s - tan o)|
// is evaluated instead of the sin form; the two are identical analytically but
// cancel differently in floating point.
inline double kernel_closed(double s, double sigma) {
  if (s < 0.0 || s > half_pi || sigma < 0.0 || sigma > half_pi)
    throw std::domain_error("kernel_closed: arguments outside [0, pi/2]");
  if (s == sigma) return std::numeric_limits<double>::infinity();
  if (s == 0.0 || sigma == 0.0) return 0.0;
  if (s == half_pi || sigma == half_pi) return 0.0;
  if (std::abs(s - sigma) < 0.1) {
    double ts = std::tan(s), to = std::tan(sigma);
    return std::log(std::abs((ts + to) / (ts - to)));
  }
  return std::log(std::abs(std::sin(s + sigma))) -
         std::log(std::abs(std::sin(s - sigma)));
}

inline double kernel_series(double s, double sigma, int terms) {
  if (terms < 1) throw std::invalid_argument("kernel_series: terms must be >= 1");
  double acc = 0.0;
  for (int k = terms; k >= 1; --k)  // small terms first
    acc += std::sin(2.0 * k * s) * std::sin(2.0 * k * sigma) / k;
  return 2.0 * acc;
}

namespace detail {

// integral_0^sigma log(cot s) ds on a mesh geometrically refined toward both
// log-singular endpoints 0 and pi/2.
inline double integral_log_cot(double sigma, const Quadrature& rule) {
  if (sigma <= 0.0) return 0.0;
  std::vector<double> edges;
  edges.push_back(0.0);
  double mid = std::min(sigma, pi / 4.0);
  for (int d = 52; d >= 0; --d) {
    double e = mid * std::pow(0.5, d);
    if (e > edges.back() && e < sigma) edges.push_back(e);
  }
  if (sigma > pi / 4.0) {
    for (int d = 0; d <= 52; ++d) {
      double e = half_pi - (half_pi - pi / 4.0) * std::pow(0.5, d);
      if (e > edges.back() && e < sigma) edges.push_back(e);
    }
  }
  edges.push_back(sigma);
  double acc = 0.0;
  int q = static_cast<int>(rule.x.size());
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    double a = edges[p], b = edges[p + 1], h = b - a;
    if (h <= 0.0) continue;
    for (int i = 0; i < q; ++i) {
      double t = a + h * 0.5 * (1.0 + rule.x[i]);
      if (t <= 0.0 || t >= half_pi) continue;
      acc += 0.5 * h * rule.w[i] *
             (std::log(std::cos(t)) - std::log(std::sin(t)));
    }
  }
  return acc;
}

}  // namespace detail

// Kernel moment mu(sigma) = integral_0^{pi/2} K(s, sigma) ds
//                        = 2 integral_0^sigma log(cot s) ds.
inline double kernel_moment(double sigma) {
  if (!(sigma > 0.0) || sigma > half_pi)
    throw std::domain_error("kernel_moment: sigma outside (0, pi/2]");
  static const Quadrature rule = gauss_legendre(12);
  return 2.0 * detail::integral_log_cot(sigma, rule);
}

// (Hw)(sigma) by direct quadrature with singularity subtraction:
//   (1/pi) [ integral K(s, sigma) (w(s) - w(sigma)) ds + w(sigma) mu(sigma) ].
// Panels near sigma are subdivided geometrically toward the diagonal, with w
// evaluated through the panel interpolant.
inline double h_apply_direct(const Grid& g, const std::vector<double>& w,
                             double sigma) {
  if (!(sigma > 0.0) || sigma > half_pi)
    throw std::domain_error("h_apply_direct: sigma outside (0, pi/2]");
  if (static_cast<int>(w.size()) != g.size())
    throw std::invalid_argument("h_apply_direct: size mismatch");

  double wsig = interpolate(g, w, sigma);
  int P = g.npanels(), q = g.q;
  int psig = static_cast<int>(std::upper_bound(g.edges.begin(), g.edges.end(), sigma) -
                              g.edges.begin()) - 1;
  psig = std::clamp(psig, 0, P - 1);

  double acc = 0.0;
  auto add_subinterval = [&](double a, double b) {
    double h = b - a;
    if (h <= 0.0) return;
    for (int i = 0; i < q; ++i) {
      double t = a + h * 0.5 * (1.0 + g.gl.x[i]);
      if (t <= 0.0 || t >= half_pi || t == sigma) continue;
      acc += 0.5 * h * g.gl.w[i] * kernel_closed(t, sigma) *
             (interpolate(g, w, t) - wsig);
    }
  };
  // geometric subdivision of [a, b] toward the interior point c
  auto add_refined = [&](double a, double b, double c) {
    double cut = 1e-15 * half_pi;
    if (c - a > cut) {
      std::vector<double> e;
      e.push_back(a);
      double len = c - a;
      for (int d = 50; d >= 1; --d) {
        double x = c - len * std::pow(0.5, d);
        if (x > e.back() && c - x > cut) e.push_back(x);
      }
      for (size_t i = 0; i + 1 < e.size(); ++i) add_subinterval(e[i], e[i + 1]);
    }
    if (b - c > cut) {
      std::vector<double> e;
      e.push_back(b);
      double len = b - c;
      for (int d = 50; d >= 1; --d) {
        double x = c + len * std::pow(0.5, d);
        if (x < e.back() && x - c > cut) e.push_back(x);
      }
      for (size_t i = 0; i + 1 < e.size(); ++i) add_subinterval(e[i + 1], e[i]);
    }
  };

  for (int p = 0; p < P; ++p) {
    bool near = (p >= psig - 1 && p <= psig + 1);
    if (!near) {
      for (int i = 0; i < q; ++i) {
        int j = p * q + i;
        acc += g.weights[j] * kernel_closed(g.nodes[j], sigma) * (w[j] - wsig);
      }
    } else if (sigma > g.edges[p] && sigma < g.edges[p + 1]) {
      add_refined(g.edges[p], g.edges[p + 1], sigma);
    } else {
      // neighbor panel: refine toward the shared edge closest to sigma
      double a = g.edges[p], b = g.edges[p + 1];
      if (sigma <= a)
        add_refined(a, b, a);
      else
        add_refined(a, b, b);
    }
  }
  return (acc + wsig * kernel_moment(sigma)) / pi;
}

}  // namespace sinkflow
