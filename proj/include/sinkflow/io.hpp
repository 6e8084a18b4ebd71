#pragma once

// Deterministic emitters for the CLI file formats. All floating-point output
// uses %.17g so identical inputs produce byte-identical files. JSON is
// written by hand for exactly that reason; non-finite values serialize as
// null (JSON) or inf/nan literals (CSV).

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "sinkflow/diagnostics.hpp"
#include "sinkflow/solver.hpp"
#include "sinkflow/surface.hpp"

namespace sinkflow {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::string json_num(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt17(v);
}

inline std::string json_str(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

inline void json_array(std::ostream& os, const std::vector<double>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << json_num(v[i]);
  }
  os << ']';
}

inline void json_array(std::ostream& os, const std::vector<int>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ']';
}

}  // namespace detail

struct RunMeta {
  double alpha = 0.0;
  SolverConfig config;
};

inline void write_metadata_json(std::ostream& os, const RunMeta& m) {
  os << "{\"alpha\":" << detail::json_num(m.alpha)
     << ",\"froude\":" << detail::json_num(std::sqrt(2.0 * m.alpha))
     << ",\"modes\":" << m.config.modes << ",\"nodes\":" << m.config.nodes
     << ",\"tol\":" << detail::json_num(m.config.tol)
     << ",\"max_iter\":" << m.config.max_iter
     << ",\"sigma_min\":" << detail::json_num(m.config.sigma_min)
     << ",\"reg_schedule\":[";
  for (size_t i = 0; i < m.config.reg_schedule.size(); ++i) {
    if (i) os << ',';
    double k = m.config.reg_schedule[i];
    if (std::isinf(k))
      os << "\"inf\"";
    else
      os << fmt17(k);
  }
  os << "],\"schema_version\":1}";
}

inline double surface_speed(double tau) { return (2.0 / pi) * std::exp(tau); }

inline void write_profile_csv(std::ostream& os, const SurfaceSolution& s) {
  os << "sigma,x,y,tau,theta,eta,speed\n";
  for (size_t j = 0; j < s.sigma.size(); ++j) {
    os << fmt17(s.sigma[j]) << ',' << fmt17(s.x[j]) << ',' << fmt17(s.y[j])
       << ',' << fmt17(s.tau[j]) << ',' << fmt17(s.theta[j]) << ','
       << fmt17(s.eta[j]) << ',' << fmt17(surface_speed(s.tau[j])) << '\n';
  }
}

inline void write_profile_json(std::ostream& os, const SurfaceSolution& s,
                               const RunMeta& m) {
  os << "{\"metadata\":";
  write_metadata_json(os, m);
  os << ",\"profile\":{\"sigma\":";
  detail::json_array(os, s.sigma);
  os << ",\"x\":";
  detail::json_array(os, s.x);
  os << ",\"y\":";
  detail::json_array(os, s.y);
  os << ",\"tau\":";
  detail::json_array(os, s.tau);
  os << ",\"theta\":";
  detail::json_array(os, s.theta);
  os << ",\"eta\":";
  detail::json_array(os, s.eta);
  os << ",\"speed\":[";
  for (size_t j = 0; j < s.tau.size(); ++j) {
    if (j) os << ',';
    os << detail::json_num(surface_speed(s.tau[j]));
  }
  os << "]}}\n";
}

inline void write_report_json(std::ostream& os, const SolveReport& rep,
                              const RunMeta& m, const SurfaceSolution* s,
                              double norm_zeta) {
  os << "{\"metadata\":";
  write_metadata_json(os, m);
  os << ",\"report\":{\"converged\":" << (rep.converged ? "true" : "false")
     << ",\"final_residual\":" << detail::json_num(rep.final_residual)
     << ",\"contraction_estimate\":" << detail::json_num(rep.contraction_estimate)
     << ",\"iterations_per_stage\":";
  detail::json_array(os, rep.iterations_per_stage);
  os << ",\"residual_history\":";
  detail::json_array(os, rep.residual_history);
  os << ",\"clamped_final\":" << rep.clamped_final
     << ",\"existence_only_regime\":"
     << (rep.existence_only_regime ? "true" : "false")
     << ",\"regime_note\":" << detail::json_str(rep.regime_note) << '}';
  if (s != nullptr) {
    std::vector<double> r =
        bernoulli_residual(FlowParams(m.alpha), s->tau, s->y);
    double sup = 0.0;
    for (double v : r) sup = std::max(sup, std::abs(v));
    os << ",\"surface\":{\"norm_zeta\":" << detail::json_num(norm_zeta)
       << ",\"y0\":" << detail::json_num(s->y0)
       << ",\"beta\":" << detail::json_num(s->beta)
       << ",\"c0\":" << detail::json_num(s->c0)
       << ",\"a\":" << detail::json_num(s->a)
       << ",\"sup_bernoulli\":" << detail::json_num(sup)
       << ",\"monotone_x\":" << (s->monotone_x ? "true" : "false")
       << ",\"monotone_y\":" << (s->monotone_y ? "true" : "false") << '}';
  }
  os << "}\n";
}

inline void write_checks_json(std::ostream& os,
                              const std::vector<CheckResult>& checks) {
  int failed = 0;
  for (const auto& c : checks)
    if (!c.passed) ++failed;
  os << "{\"checks\":[";
  for (size_t i = 0; i < checks.size(); ++i) {
    const CheckResult& c = checks[i];
    if (i) os << ',';
    os << "{\"name\":" << detail::json_str(c.name)
       << ",\"bound\":" << detail::json_num(c.bound)
       << ",\"observed\":" << detail::json_num(c.observed)
       << ",\"margin\":" << detail::json_num(c.margin)
       << ",\"passed\":" << (c.passed ? "true" : "false") << '}';
  }
  os << "],\"failed_count\":" << failed
     << ",\"passed\":" << (failed == 0 ? "true" : "false") << "}\n";
}

struct SweepRow {
  double alpha = 0.0;
  bool converged = false;
  double norm_zeta = 0.0, y0 = 0.0, beta = 0.0, a = 0.0, sup_bernoulli = 0.0;
  int iterations = 0;
  std::string error;
};

inline void write_sweep_summary_csv(std::ostream& os,
                                    const std::vector<SweepRow>& rows) {
  os << "alpha,converged,norm_zeta,y0,beta,a,sup_bernoulli,iterations\n";
  for (const auto& r : rows) {
    os << fmt17(r.alpha) << ',' << (r.converged ? 1 : 0) << ','
       << fmt17(r.norm_zeta) << ',' << fmt17(r.y0) << ',' << fmt17(r.beta)
       << ',' << fmt17(r.a) << ',' << fmt17(r.sup_bernoulli) << ','
       << r.iterations << '\n';
  }
}

inline void write_sweep_summary_json(std::ostream& os,
                                     const std::vector<SweepRow>& rows) {
  os << "{\"summary\":[";
  for (size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    if (i) os << ',';
    os << "{\"alpha\":" << detail::json_num(r.alpha)
       << ",\"converged\":" << (r.converged ? "true" : "false")
       << ",\"norm_zeta\":" << detail::json_num(r.norm_zeta)
       << ",\"y0\":" << detail::json_num(r.y0)
       << ",\"beta\":" << detail::json_num(r.beta)
       << ",\"a\":" << detail::json_num(r.a)
       << ",\"sup_bernoulli\":" << detail::json_num(r.sup_bernoulli)
       << ",\"iterations\":" << r.iterations
       << ",\"error\":" << detail::json_str(r.error) << '}';
  }
  os << "]}\n";
}

inline void write_asymptotics_json(std::ostream& os, const CuspFit& fit,
                                   const std::vector<double>& xs,
                                   const std::vector<double>& dys,
                                   const RunMeta& m) {
  os << "{\"metadata\":";
  write_metadata_json(os, m);
  os << ",\"fit\":{\"exponent\":" << detail::json_num(fit.exponent)
     << ",\"coefficient\":" << detail::json_num(fit.coefficient)
     << ",\"a\":" << detail::json_num(fit.a)
     << ",\"beta\":" << detail::json_num(fit.beta)
     << ",\"c0\":" << detail::json_num(fit.c0)
     << ",\"y0\":" << detail::json_num(fit.y0)
     << ",\"window_lo\":" << detail::json_num(fit.window_lo)
     << ",\"window_hi\":" << detail::json_num(fit.window_hi)
     << ",\"npoints\":" << fit.npoints << "},\"points\":{\"x\":";
  detail::json_array(os, xs);
  os << ",\"y_minus_y0\":";
  detail::json_array(os, dys);
  os << "}}\n";
}

inline void write_asymptotics_csv(std::ostream& os, const CuspFit& fit,
                                  const std::vector<double>& xs,
                                  const std::vector<double>& dys) {
  os << "# exponent=" << fmt17(fit.exponent)
     << " coefficient=" << fmt17(fit.coefficient) << " a=" << fmt17(fit.a)
     << " beta=" << fmt17(fit.beta) << " c0=" << fmt17(fit.c0)
     << " y0=" << fmt17(fit.y0) << " window=[" << fmt17(fit.window_lo) << ','
     << fmt17(fit.window_hi) << "]\n";
  os << "x,y_minus_y0\n";
  for (size_t i = 0; i < xs.size(); ++i)
    os << fmt17(xs[i]) << ',' << fmt17(dys[i]) << '\n';
}

}  // namespace sinkflow
