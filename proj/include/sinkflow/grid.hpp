#pragma once

// Composite quadrature grid on (0, pi/2].
//
// Layout: one open Gauss-Legendre panel (0, x_first] whose first node lands
// exactly on sigma_min, a geometric block of panels up to x_split resolving
// the cot(sigma) singularity, a uniform block, and a Gauss-Lobatto last panel
// so that pi/2 itself is a node. The number of graded panels scales with the
// total panel count, so refining the grid shrinks every cell.
//
// Each panel carries an interpolatory cumulative-integration map (node values
// to running integrals from the panel's left edge). The first panel uses a
// log-augmented basis {1, log u, u, ..., u^(q-2)} because several integrands
// in this problem behave like log(sigma) near 0.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sinkflow {

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double half_pi = pi / 2.0;

// P_n(x) and P_n'(x); derivative form valid for |x| < 1.
inline std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

struct Quadrature {
  std::vector<double> x;  // nodes on [-1, 1], ascending
  std::vector<double> w;
};

inline Quadrature gauss_legendre(int q) {
  if (q < 2) throw std::invalid_argument("gauss_legendre: q must be >= 2");
  Quadrature r;
  r.x.assign(q, 0.0);
  r.w.assign(q, 0.0);
  for (int i = 0; i < q; ++i) {
    double x = std::cos(pi * (i + 0.75) / (q + 0.5));  // descending guess
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(q, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = legendre(q, x);
    (void)p;
    r.x[q - 1 - i] = x;
    r.w[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; i < q / 2; ++i) {  // enforce exact symmetry
    int j = q - 1 - i;
    double xm = 0.5 * (r.x[j] - r.x[i]);
    double wm = 0.5 * (r.w[i] + r.w[j]);
    r.x[i] = -xm;
    r.x[j] = xm;
    r.w[i] = r.w[j] = wm;
  }
  if (q % 2 == 1) r.x[q / 2] = 0.0;
  return r;
}

inline Quadrature gauss_lobatto(int q) {
  if (q < 3) throw std::invalid_argument("gauss_lobatto: q must be >= 3");
  int n = q - 1;  // interior nodes are roots of P_n'
  Quadrature r;
  r.x.assign(q, 0.0);
  r.w.assign(q, 0.0);
  r.x[0] = -1.0;
  r.x[q - 1] = 1.0;
  for (int i = 1; i <= q - 2; ++i) {
    double x = std::cos(pi * i / n);  // descending guess
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double d2p = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
      double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[q - 1 - i] = x;
  }
  for (int i = 0; i < q; ++i) {
    double p = legendre(n, r.x[i]).first;
    r.w[i] = 2.0 / (q * n * p * p);
  }
  for (int i = 0; i < q / 2; ++i) {
    int j = q - 1 - i;
    double xm = 0.5 * (r.x[j] - r.x[i]);
    double wm = 0.5 * (r.w[i] + r.w[j]);
    r.x[i] = -xm;
    r.x[j] = xm;
    r.w[i] = r.w[j] = wm;
  }
  if (q % 2 == 1) r.x[q / 2] = 0.0;
  return r;
}

namespace detail {

// Interpolatory cumulative map on the reference nodes: C maps node values to
// integrals from -1 to each node, t to the integral over [-1, 1] (both for a
// unit-scale panel; callers multiply by h/2).
inline void cumulative_poly(const Quadrature& rule, Eigen::MatrixXd& C,
                            Eigen::VectorXd& t) {
  int q = static_cast<int>(rule.x.size());
  Eigen::MatrixXd V(q, q), Q(q, q);
  for (int i = 0; i < q; ++i) {
    double xi = rule.x[i];
    for (int m = 0; m < q; ++m) {
      V(i, m) = legendre(m, xi).first;
      if (m == 0)
        Q(i, m) = xi + 1.0;
      else
        Q(i, m) =
            (legendre(m + 1, xi).first - legendre(m - 1, xi).first) /
            (2.0 * m + 1.0);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(V.transpose());
  C = lu.solve(Q.transpose()).transpose();
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(q);
  e0(0) = 2.0;  // integral of P_0 over [-1, 1]
  t = lu.solve(e0);
}

// Same on u in (0, 1] with basis {1, log u, u, ..., u^(q-2)}; unit scale is
// the panel width h (callers multiply by h).
inline void cumulative_log(const Quadrature& rule, Eigen::MatrixXd& C,
                           Eigen::VectorXd& t) {
  int q = static_cast<int>(rule.x.size());
  Eigen::MatrixXd B(q, q), F(q, q);
  for (int i = 0; i < q; ++i) {
    double u = 0.5 * (1.0 + rule.x[i]);
    B(i, 0) = 1.0;
    F(i, 0) = u;
    B(i, 1) = std::log(u);
    F(i, 1) = u * std::log(u) - u;
    for (int m = 2; m < q; ++m) {
      B(i, m) = std::pow(u, m - 1.0);
      F(i, m) = std::pow(u, static_cast<double>(m)) / m;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B.transpose());
  C = lu.solve(F.transpose()).transpose();
  Eigen::VectorXd ftot(q);
  ftot(0) = 1.0;
  ftot(1) = -1.0;
  for (int m = 2; m < q; ++m) ftot(m) = 1.0 / m;
  t = lu.solve(ftot);
}

inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
  int q = static_cast<int>(x.size());
  std::vector<double> lam(q, 1.0);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (j != i) lam[i] /= (x[i] - x[j]);
  return lam;
}

}  // namespace detail

struct Grid {
  int q = 0;
  std::vector<double> edges;    // npanels+1 values, edges[0]=0, edges.back()=pi/2
  std::vector<double> nodes;    // strictly increasing, inside (0, pi/2], back()==pi/2
  std::vector<double> weights;  // positive, sum = pi/2
  Quadrature gl, lob;
  std::vector<double> bary_gl, bary_lob;
  Eigen::MatrixXd cum_gl, cum_lob, cum_log;  // reference cumulative maps
  Eigen::VectorXd tot_gl, tot_lob, tot_log;
  double sigma_min = 0.0;
  double x_split = 0.0;

  int npanels() const { return static_cast<int>(edges.size()) - 1; }
  int size() const { return static_cast<int>(nodes.size()); }
  bool lobatto_panel(int p) const { return p == npanels() - 1; }
  double panel_h(int p) const { return edges[p + 1] - edges[p]; }
};

inline Grid make_grid(int nodes_total, double sigma_min, int q = 8,
                      double x_split = 0.2) {
  if (q < 4 || q > 16) throw std::invalid_argument("make_grid: q must be in [4, 16]");
  if (nodes_total <= 0 || nodes_total % q != 0)
    throw std::invalid_argument("make_grid: node count must be a positive multiple of q");
  int P = nodes_total / q;
  if (P < 8) throw std::invalid_argument("make_grid: need at least 8 panels");
  if (!(sigma_min > 0.0) || sigma_min >= 1e-2)
    throw std::invalid_argument("make_grid: sigma_min must be in (0, 1e-2)");
  if (!(x_split > 0.0) || x_split >= half_pi / 2.0)
    throw std::invalid_argument("make_grid: x_split must be in (0, pi/4)");

  Grid g;
  g.q = q;
  g.sigma_min = sigma_min;
  g.x_split = x_split;
  g.gl = gauss_legendre(q);
  g.lob = gauss_lobatto(q);
  g.bary_gl = detail::barycentric_weights(g.gl.x);
  g.bary_lob = detail::barycentric_weights(g.lob.x);
  detail::cumulative_poly(g.gl, g.cum_gl, g.tot_gl);
  detail::cumulative_poly(g.lob, g.cum_lob, g.tot_lob);
  detail::cumulative_log(g.gl, g.cum_log, g.tot_log);

  double xi1bar = 0.5 * (1.0 + g.gl.x[0]);
  double x_first = sigma_min / xi1bar;  // first node sits exactly on sigma_min
  if (x_first >= x_split / 4.0)
    throw std::invalid_argument("make_grid: sigma_min too large for x_split");

  int G = std::max(4, P / 8);
  int U = P - 1 - G;
  if (U < 2) throw std::invalid_argument("make_grid: too few panels for the uniform block");

  g.edges.reserve(P + 1);
  g.edges.push_back(0.0);
  g.edges.push_back(x_first);
  double ratio = x_split / x_first;
  for (int i = 1; i < G; ++i)
    g.edges.push_back(x_first * std::pow(ratio, static_cast<double>(i) / G));
  g.edges.push_back(x_split);
  for (int i = 1; i < U; ++i)
    g.edges.push_back(x_split + i * (half_pi - x_split) / U);
  g.edges.push_back(half_pi);

  g.nodes.reserve(nodes_total);
  g.weights.reserve(nodes_total);
  for (int p = 0; p < P; ++p) {
    const Quadrature& rule = (p == P - 1) ? g.lob : g.gl;
    double a = g.edges[p], b = g.edges[p + 1], h = b - a;
    for (int i = 0; i < q; ++i) {
      double xi = rule.x[i];
      double s;
      if (xi == 1.0)
        s = b;
      else if (xi == -1.0)
        s = a;
      else
        s = a + h * 0.5 * (1.0 + xi);
      g.nodes.push_back(s);
      g.weights.push_back(0.5 * h * rule.w[i]);
    }
  }
  return g;
}

// Running integrals from 0 to each node.
inline std::vector<double> cumulative_integral(const Grid& g,
                                               const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != g.size())
    throw std::invalid_argument("cumulative_integral: size mismatch");
  int P = g.npanels(), q = g.q;
  std::vector<double> out(f.size());
  double offset = 0.0;
  for (int p = 0; p < P; ++p) {
    Eigen::Map<const Eigen::VectorXd> fp(f.data() + p * q, q);
    double h = g.panel_h(p);
    Eigen::VectorXd local;
    double tot;
    if (p == 0) {
      local = h * (g.cum_log * fp);
      tot = h * g.tot_log.dot(fp);
    } else if (g.lobatto_panel(p)) {
      local = 0.5 * h * (g.cum_lob * fp);
      tot = 0.5 * h * g.tot_lob.dot(fp);
    } else {
      local = 0.5 * h * (g.cum_gl * fp);
      tot = 0.5 * h * g.tot_gl.dot(fp);
    }
    for (int i = 0; i < q; ++i) out[p * q + i] = offset + local(i);
    offset += tot;
  }
  return out;
}

inline double integrate(const Grid& g, const std::vector<double>& f) {
  if (f.size() != g.weights.size())
    throw std::invalid_argument("integrate: size mismatch");
  double s = 0.0;
  for (size_t j = 0; j < f.size(); ++j) s += g.weights[j] * f[j];
  return s;
}

inline double l2_norm(const Grid& g, const std::vector<double>& f) {
  if (f.size() != g.weights.size())
    throw std::invalid_argument("l2_norm: size mismatch");
  double s = 0.0;
  for (size_t j = 0; j < f.size(); ++j) s += g.weights[j] * f[j] * f[j];
  return std::sqrt(s);
}

// Barycentric interpolation within the panel containing sigma.
inline double interpolate(const Grid& g, const std::vector<double>& f,
                          double sigma) {
  if (static_cast<int>(f.size()) != g.size())
    throw std::invalid_argument("interpolate: size mismatch");
  if (!(sigma >= 0.0) || sigma > half_pi)
    throw std::domain_error("interpolate: sigma outside [0, pi/2]");
  int P = g.npanels();
  int p = static_cast<int>(std::upper_bound(g.edges.begin(), g.edges.end(), sigma) -
                           g.edges.begin()) - 1;
  p = std::clamp(p, 0, P - 1);
  double a = g.edges[p], h = g.panel_h(p);
  double xi = 2.0 * (sigma - a) / h - 1.0;
  const Quadrature& rule = g.lobatto_panel(p) ? g.lob : g.gl;
  const std::vector<double>& lam = g.lobatto_panel(p) ? g.bary_lob : g.bary_gl;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.q; ++i) {
    double d = xi - rule.x[i];
    if (std::abs(d) < 1e-14) return f[p * g.q + i];
    double c = lam[i] / d;
    num += c * f[p * g.q + i];
    den += c;
  }
  return num / den;
}

}  // namespace sinkflow
