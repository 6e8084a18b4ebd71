#pragma once

// Free-surface reconstruction from the solved zeta: log-speed trace tau,
// flow-angle perturbation theta, inclination eta = sigma + theta, the
// boundary curve (x, y) in units of the far-field depth, the Bernoulli
// consistency residual, the symmetry extension to [0, 2pi], and the cusp
// asymptotics y = y0 + a x^(2/3) + o(x^(2/3)).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sinkflow/flow_params.hpp"
#include "sinkflow/grid.hpp"
#include "sinkflow/nekrasov.hpp"

namespace sinkflow {

struct SurfaceSolution {
  std::vector<double> sigma;
  std::vector<double> tau;    // log-speed trace, tau(0+) = log(pi/2)
  std::vector<double> theta;  // flow-angle perturbation, theta(pi/2) = 0 exactly
  std::vector<double> eta;    // inclination sigma + theta
  std::vector<double> x, y;   // boundary curve, x(pi/2) = 0, y(0+) = 1
  double alpha = 0.0;
  double y0 = 0.0;    // cusp height y(pi/2)
  double beta = 0.0;  // eta'(pi/2-)
  double c0 = 0.0;    // exp(-tau(pi/2))
  double a = 0.0;     // cusp coefficient 3^(2/3) c0^(1/3) / (2 beta^(2/3))
  bool monotone_x = false, monotone_y = false;
  SineSeries zeta_series;  // sine coefficients of zeta
};

// tau = log(pi/2) + (1/3) integral_0^sigma zeta, theta = (1/3) H zeta.
inline std::pair<std::vector<double>, std::vector<double>> tau_theta(
    const PhiOperator& op, const std::vector<double>& zeta) {
  for (double z : zeta)
    if (!(z >= 0.0))
      throw std::invalid_argument("tau_theta: zeta must be nonnegative");
  std::vector<double> tau = cumulative_integral(op.grid(), zeta);
  double t0 = bounds::tau_origin();
  for (double& t : tau) t = t0 + t / 3.0;
  return {std::move(tau), op.theta(zeta)};
}

inline SurfaceSolution reconstruct_surface(const PhiOperator& op,
                                           const std::vector<double>& zeta,
                                           const FlowParams& p) {
  const Grid& g = op.grid();
  int M = g.size();
  SurfaceSolution sol;
  sol.alpha = p.alpha;
  sol.sigma = g.nodes;
  auto [tau, theta] = tau_theta(op, zeta);
  sol.tau = std::move(tau);
  sol.theta = std::move(theta);
  sol.zeta_series = op.project(zeta);

  sol.eta.resize(M);
  for (int j = 0; j < M; ++j) sol.eta[j] = g.nodes[j] + sol.theta[j];

  // theta'(sigma) = (1/3) sum b_k cos(2 k sigma), b = zeta coefficients
  std::vector<double> thp(M, 0.0);
  for (int j = 0; j < M; ++j) {
    double acc = 0.0;
    for (int k = 1; k <= sol.zeta_series.modes(); ++k)
      acc += sol.zeta_series.c[k - 1] * std::cos(2.0 * k * g.nodes[j]);
    thp[j] = acc / 3.0;
  }

  // y(sigma) = 1 - integral_0^sigma exp(-tau) sin(s + theta) cot(s) ds;
  // the integrand tends to 2/pi at 0, the open first panel covers (0, x_first].
  std::vector<double> gy(M);
  for (int j = 0; j < M; ++j)
    gy[j] = std::exp(-sol.tau[j]) * std::sin(g.nodes[j] + sol.theta[j]) *
            op.cot_node(j);
  std::vector<double> cy = cumulative_integral(g, gy);
  sol.y.resize(M);
  for (int j = 0; j < M; ++j) sol.y[j] = 1.0 - cy[j];

  // x(sigma) = integral_sigma^{pi/2} exp(-tau) cos(s + theta) cot(s) ds,
  // integrated by parts against d(log sin s) to remove the 1/s blowup:
  // x = -phi(sigma) log sin sigma - integral_sigma^{pi/2} phi' log sin s ds.
  std::vector<double> gx(M);
  std::vector<double> phi(M);
  for (int j = 0; j < M; ++j) {
    double e = std::exp(-sol.tau[j]);
    double c = std::cos(g.nodes[j] + sol.theta[j]);
    double s = std::sin(g.nodes[j] + sol.theta[j]);
    phi[j] = e * c;
    gx[j] = e * (-(zeta[j] / 3.0) * c - (1.0 + thp[j]) * s) *
            std::log(std::sin(g.nodes[j]));
  }
  std::vector<double> cx = cumulative_integral(g, gx);
  sol.x.resize(M);
  for (int j = 0; j < M; ++j)
    sol.x[j] = -phi[j] * std::log(std::sin(g.nodes[j])) - (cx[M - 1] - cx[j]);
  sol.x[M - 1] = 0.0;

  sol.monotone_x = sol.monotone_y = true;
  for (int j = 0; j + 1 < M; ++j) {
    if (!(sol.x[j + 1] < sol.x[j])) sol.monotone_x = false;
    if (!(sol.y[j + 1] < sol.y[j])) sol.monotone_y = false;
  }

  sol.y0 = sol.y[M - 1];
  double tp = 0.0;  // theta'(pi/2) by the alternating coefficient sum
  for (int k = 1; k <= sol.zeta_series.modes(); ++k)
    tp += sol.zeta_series.c[k - 1] * (k % 2 == 0 ? 1.0 : -1.0);
  sol.beta = 1.0 + tp / 3.0;
  sol.c0 = std::exp(-sol.tau[M - 1]);
  sol.a = std::pow(3.0, 2.0 / 3.0) * std::cbrt(sol.c0) /
          (2.0 * std::pow(sol.beta, 2.0 / 3.0));
  return sol;
}

// r(sigma) = alpha (4/pi^2) exp(2 tau) + y - (alpha + 1); identically zero on
// the true flow. The solver only enforces the differentiated equation, so
// this is an end-to-end consistency oracle.
inline std::vector<double> bernoulli_residual(const FlowParams& p,
                                              const std::vector<double>& tau,
                                              const std::vector<double>& y) {
  if (tau.size() != y.size())
    throw std::invalid_argument("bernoulli_residual: size mismatch");
  std::vector<double> r(tau.size());
  double c = p.alpha * 4.0 / (pi * pi);
  for (size_t j = 0; j < tau.size(); ++j)
    r[j] = c * std::exp(2.0 * tau[j]) + y[j] - (p.alpha + 1.0);
  return r;
}

struct InclinationResult {
  double max_interior = 0.0;
  bool interior_ok = false;   // max over interior nodes < pi/2
  bool endpoint_ok = false;   // eta(pi/2) == pi/2 exactly
  bool ok = false;
};

inline InclinationResult inclination_check(const std::vector<double>& eta) {
  if (eta.size() < 2)
    throw std::invalid_argument("inclination_check: need at least 2 samples");
  InclinationResult r;
  r.max_interior = eta[0];
  for (size_t j = 0; j + 1 < eta.size(); ++j)
    r.max_interior = std::max(r.max_interior, eta[j]);
  r.interior_ok = r.max_interior < half_pi;
  r.endpoint_ok = eta.back() == half_pi;
  r.ok = r.interior_ok && r.endpoint_ok;
  return r;
}

struct CuspFit {
  double beta = 0.0, c0 = 0.0, a = 0.0, y0 = 0.0;
  double exponent = 0.0;     // fitted slope of log(y - y0) vs log(x)
  double coefficient = 0.0;  // exp(intercept)
  double window_lo = 0.0, window_hi = 0.0;
  int npoints = 0;
};

// Log-log fit of (y - y0) vs x over the near-cusp window x in [1e-6, 1e-2].
inline CuspFit cusp_asymptotics(const SurfaceSolution& sol,
                                const FlowParams& p) {
  if (!p.cusp_asymptotics_guaranteed())
    throw std::domain_error(
        "cusp asymptotics require alpha > 5/sqrt(8) = " +
        std::to_string(bounds::cusp_threshold()));
  CuspFit fit;
  fit.beta = sol.beta;
  fit.c0 = sol.c0;
  fit.a = sol.a;
  fit.y0 = sol.y0;
  fit.window_lo = 1e-6;
  fit.window_hi = 1e-2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (size_t j = 0; j < sol.x.size(); ++j) {
    double xx = sol.x[j], yy = sol.y[j] - sol.y0;
    if (xx < fit.window_lo || xx > fit.window_hi || !(yy > 0.0)) continue;
    double lx = std::log(xx), ly = std::log(yy);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 8)
    throw std::runtime_error(
        "insufficient near-cusp resolution: fewer than 8 nodes in the fit window");
  double denom = n * sxx - sx * sx;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
  fit.npoints = n;
  return fit;
}

struct ExtendedTraces {
  std::vector<double> sigma, tau, theta;  // sampled on [0, 2pi]
};

// Reflections: tau even and theta odd about both 0 and pi/2, both pi-periodic.
// The sigma = 0 limit values tau = log(pi/2), theta = 0 are prepended.
inline ExtendedTraces extend_symmetry(const std::vector<double>& nodes,
                                      const std::vector<double>& tau,
                                      const std::vector<double>& theta) {
  if (nodes.size() != tau.size() || nodes.size() != theta.size())
    throw std::invalid_argument("extend_symmetry: size mismatch");
  if (nodes.empty() || nodes.back() != half_pi)
    throw std::invalid_argument("extend_symmetry: last node must be pi/2");
  int M = static_cast<int>(nodes.size());
  ExtendedTraces e;
  e.sigma.reserve(4 * M + 2);
  e.tau.reserve(4 * M + 2);
  e.theta.reserve(4 * M + 2);
  auto push = [&](double s, double t, double th) {
    e.sigma.push_back(s);
    e.tau.push_back(t);
    e.theta.push_back(th);
  };
  push(0.0, bounds::tau_origin(), 0.0);
  for (int j = 0; j < M; ++j) push(nodes[j], tau[j], theta[j]);
  for (int j = M - 2; j >= 0; --j) push(pi - nodes[j], tau[j], -theta[j]);
  push(pi, bounds::tau_origin(), 0.0);
  int half = static_cast<int>(e.sigma.size());
  for (int i = 1; i < half; ++i) push(e.sigma[i] + pi, e.tau[i], e.theta[i]);
  return e;
}

// Grid L2 norm of (tau' sin sigma)' for a solved zeta, evaluated through the
// closed-form derivative of the fixed-point equation (valid at the fixed
// point). Differentiating the truncated sine series instead is unstable: a
// nonzero zeta(0+) puts an O(N) oscillation into the series derivative.
inline double smoothness_norm(const PhiOperator& op,
                              const std::vector<double>& zeta,
                              const FlowParams& p) {
  const Grid& g = op.grid();
  int M = g.size();
  SineSeries b = op.project(zeta);
  std::vector<double> th = op.theta(zeta);
  std::vector<double> cum = cumulative_integral(g, zeta);
  double amp = 3.0 / (p.alpha * pi);
  std::vector<double> deriv(M);
  for (int j = 0; j < M; ++j) {
    double s = g.nodes[j];
    double thp = 0.0;
    for (int k = 1; k <= b.modes(); ++k)
      thp += b.c[k - 1] * std::cos(2.0 * k * s);
    thp /= 3.0;
    double common = amp * std::exp(-cum[j]);
    double sn = std::sin(s + th[j]), cs = std::cos(s + th[j]);
    double cot = op.cot_node(j);
    double inv_sin2 = 1.0 / (std::sin(s) * std::sin(s));
    double zp = common * ((1.0 + thp) * cs * cot - sn * inv_sin2) -
                zeta[j] * common * sn * cot;
    deriv[j] = (zp * std::sin(s) + zeta[j] * std::cos(s)) / 3.0;
  }
  return l2_norm(g, deriv);
}

}  // namespace sinkflow
