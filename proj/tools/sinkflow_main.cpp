// Command-line front end: solve a single flow, sweep a Froude range, run the
// verification suite, or emit near-cusp asymptotics data.
//
// Exit codes: 0 success, 1 check/convergence/regime failure, 2 usage error,
// 3 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinkflow/sinkflow.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
  double alpha = 0.0;
  double froude = 0.0;
  bool has_alpha = false;
  bool has_froude = false;
  std::string alpha_range;
  sinkflow::SolverConfig cfg;
  std::string reg_schedule;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 12345;
  int jobs = 1;
  int trials = 1000;
};

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--modes", o.cfg.modes, "Sine modes kept in the expansion");
  cmd->add_option("--nodes", o.cfg.nodes, "Quadrature nodes (multiple of 8)");
  cmd->add_option("--tol", o.cfg.tol, "L2 residual stopping tolerance");
  cmd->add_option("--max-iter", o.cfg.max_iter, "Iteration cap per continuation stage");
  cmd->add_option("--sigma-min", o.cfg.sigma_min, "Smallest grid node");
  cmd->add_option("--reg-schedule", o.reg_schedule,
                  "Comma list of cap indices ending in inf, e.g. 16,64,256,1024,inf");
}

void add_output_flags(CLI::App* cmd, Options& o, bool required) {
  auto* opt = cmd->add_option("--output,-o", o.output, "Output file path");
  if (required) opt->required();
  cmd->add_option("--format", o.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

bool parse_reg_schedule(const std::string& text, std::vector<double>& out,
                        std::string& err) {
  if (text.empty()) return true;
  out.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "INF" || item == "Inf") {
      out.push_back(sinkflow::reg_unbounded);
      continue;
    }
    try {
      size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      err = "bad --reg-schedule entry '" + item + "'";
      return false;
    }
  }
  return true;
}

bool parse_alpha_range(const std::string& text, std::vector<double>& out,
                       std::string& err) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  bool log_spaced = false;
  if (parts.size() == 4 && parts[3] == "log") {
    log_spaced = true;
    parts.pop_back();
  }
  if (parts.size() != 3) {
    err = "--alpha-range must be A:B:N or A:B:N:log";
    return false;
  }
  double a, b;
  long n;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stol(parts[2]);
  } catch (const std::exception&) {
    err = "--alpha-range must be numeric A:B:N";
    return false;
  }
  if (n < 2 || !(a > 0.0) || !(b > a)) {
    err = "--alpha-range needs 0 < A < B and N >= 2";
    return false;
  }
  out.resize(n);
  for (long i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / (n - 1);
    out[i] = log_spaced ? a * std::pow(b / a, t) : a + t * (b - a);
  }
  return true;
}

int resolve_alpha(const Options& o, bool allow_default, double& alpha,
                  std::string& err) {
  if (o.has_alpha && o.has_froude) {
    err = "pass exactly one of --alpha / --froude";
    return kExitUsage;
  }
  if (o.has_alpha) {
    alpha = o.alpha;
  } else if (o.has_froude) {
    if (!(o.froude > 0.0)) {
      err = "--froude must be positive";
      return kExitUsage;
    }
    alpha = o.froude * o.froude / 2.0;
  } else if (allow_default) {
    alpha = 3.0;
  } else {
    err = "pass --alpha or --froude";
    return kExitUsage;
  }
  if (!(alpha > 0.0)) {
    err = "alpha must be positive";
    return kExitUsage;
  }
  return kExitOk;
}

int write_file(const std::string& path,
               const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return kExitOk;
  }
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitIo;
  }
  writer(ofs);
  ofs.flush();
  if (!ofs.good()) {
    std::cerr << "error: write to '" << path << "' failed\n";
    return kExitIo;
  }
  return kExitOk;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  size_t slash = path.find_last_of('/');
  size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int finalize_config(Options& o, std::string& err) {
  if (!o.reg_schedule.empty() &&
      !parse_reg_schedule(o.reg_schedule, o.cfg.reg_schedule, err))
    return kExitUsage;
  try {
    o.cfg.validate();
    sinkflow::make_grid(o.cfg.nodes, o.cfg.sigma_min);
  } catch (const std::exception& e) {
    err = e.what();
    return kExitUsage;
  }
  return kExitOk;
}

int regime_gate(const sinkflow::FlowParams& p) {
  if (!p.existence_guaranteed()) {
    std::cerr << "error: alpha = " << p.alpha
              << " is below the existence threshold "
              << sinkflow::fmt17(sinkflow::bounds::existence_threshold())
              << "; no solution is guaranteed in this regime\n";
    return kExitFailure;
  }
  if (!p.uniqueness_guaranteed())
    std::cerr << "warning: alpha = " << p.alpha
              << " is in the existence-only regime (<= 8/pi); convergence and "
                 "uniqueness are not guaranteed\n";
  return kExitOk;
}

int cmd_solve(Options& o) {
  std::string err;
  double alpha;
  int rc = resolve_alpha(o, false, alpha, err);
  if (rc != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  if ((rc = finalize_config(o, err)) != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  sinkflow::FlowParams p(alpha);
  if ((rc = regime_gate(p)) != kExitOk) return rc;

  sinkflow::PhiOperator op(sinkflow::make_grid(o.cfg.nodes, o.cfg.sigma_min),
                           o.cfg.modes);
  sinkflow::RunMeta meta{alpha, o.cfg};
  std::string report_path = o.output + ".report.json";
  try {
    sinkflow::Solution sol = sinkflow::solve(op, p, o.cfg);
    sinkflow::SurfaceSolution surf =
        sinkflow::reconstruct_surface(op, sol.zeta, p);
    rc = write_file(o.output, [&](std::ostream& os) {
      if (o.format == "csv")
        sinkflow::write_profile_csv(os, surf);
      else
        sinkflow::write_profile_json(os, surf, meta);
    });
    if (rc != kExitOk) return rc;
    rc = write_file(report_path, [&](std::ostream& os) {
      sinkflow::write_report_json(os, sol.report, meta, &surf,
                                  op.norm(sol.zeta));
    });
    if (rc != kExitOk) return rc;
    std::cout << "solved alpha=" << sinkflow::fmt17(alpha)
              << " residual=" << sinkflow::fmt17(sol.report.final_residual)
              << " y0=" << sinkflow::fmt17(surf.y0)
              << " beta=" << sinkflow::fmt17(surf.beta) << '\n';
    return kExitOk;
  } catch (const sinkflow::SolveFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    write_file(report_path, [&](std::ostream& os) {
      sinkflow::write_report_json(os, e.report(), meta, nullptr, 0.0);
    });
    return kExitFailure;
  }
}

int cmd_sweep(Options& o) {
  std::string err;
  std::vector<double> alphas;
  if (o.alpha_range.empty() || !parse_alpha_range(o.alpha_range, alphas, err)) {
    std::cerr << "error: " << (err.empty() ? "--alpha-range is required" : err)
              << '\n';
    return kExitUsage;
  }
  int rc = finalize_config(o, err);
  if (rc != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  for (double a : alphas) {
    sinkflow::FlowParams p(a);
    if (!p.existence_guaranteed()) {
      std::cerr << "error: alpha = " << a
                << " in the range is below the existence threshold\n";
      return kExitFailure;
    }
  }

  sinkflow::PhiOperator op(sinkflow::make_grid(o.cfg.nodes, o.cfg.sigma_min),
                           o.cfg.modes);
  std::vector<sinkflow::SweepEntry> entries =
      sinkflow::sweep(op, alphas, o.cfg, o.jobs);

  std::vector<sinkflow::SweepRow> rows(entries.size());
  bool all_ok = true;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    rows[i].alpha = e.alpha;
    rows[i].converged = e.ok;
    rows[i].error = e.error;
    int iters = 0;
    for (int it : e.solution.report.iterations_per_stage) iters += it;
    rows[i].iterations = iters;
    if (!e.ok) {
      all_ok = false;
      continue;
    }
    sinkflow::FlowParams p(e.alpha);
    sinkflow::SurfaceSolution surf =
        sinkflow::reconstruct_surface(op, e.solution.zeta, p);
    rows[i].norm_zeta = op.norm(e.solution.zeta);
    rows[i].y0 = surf.y0;
    rows[i].beta = surf.beta;
    rows[i].a = surf.a;
    double sup = 0.0;
    for (double v : sinkflow::bernoulli_residual(p, surf.tau, surf.y))
      sup = std::max(sup, std::abs(v));
    rows[i].sup_bernoulli = sup;
    sinkflow::RunMeta meta{e.alpha, o.cfg};
    std::string path =
        with_suffix(o.output, ".alpha" + std::to_string(i));
    int wrc = write_file(path, [&](std::ostream& os) {
      if (o.format == "csv")
        sinkflow::write_profile_csv(os, surf);
      else
        sinkflow::write_profile_json(os, surf, meta);
    });
    if (wrc != kExitOk) return wrc;
  }
  rc = write_file(o.output, [&](std::ostream& os) {
    if (o.format == "csv")
      sinkflow::write_sweep_summary_csv(os, rows);
    else
      sinkflow::write_sweep_summary_json(os, rows);
  });
  if (rc != kExitOk) return rc;
  std::cout << "sweep: " << entries.size() << " alphas, "
            << (all_ok ? "all converged" : "with failures") << '\n';
  return all_ok ? kExitOk : kExitFailure;
}

int cmd_verify(Options& o) {
  std::string err;
  double alpha;
  int rc = resolve_alpha(o, true, alpha, err);
  if (rc != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  if ((rc = finalize_config(o, err)) != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  sinkflow::PhiOperator op(sinkflow::make_grid(o.cfg.nodes, o.cfg.sigma_min),
                           o.cfg.modes);

  std::vector<sinkflow::CheckResult> checks = sinkflow::check_constants();
  std::vector<sinkflow::CheckResult> ops =
      sinkflow::check_operator_bounds(op, o.trials, o.seed);
  checks.insert(checks.end(), ops.begin(), ops.end());
  int ctrials = std::max(10, o.trials / 10);
  for (double a : {3.0, 5.0, 10.0})
    checks.push_back(sinkflow::check_contraction(op, sinkflow::FlowParams(a),
                                                 ctrials, o.seed + 1));

  sinkflow::FlowParams p(alpha);
  try {
    sinkflow::Solution sol = sinkflow::solve(op, p, o.cfg);
    sinkflow::SurfaceSolution surf =
        sinkflow::reconstruct_surface(op, sol.zeta, p);
    std::vector<sinkflow::CheckResult> sc =
        sinkflow::check_solution(op, sol.zeta, surf, p);
    checks.insert(checks.end(), sc.begin(), sc.end());
  } catch (const sinkflow::SolveFailure& e) {
    std::cerr << "verify: solve failed: " << e.what() << '\n';
    sinkflow::CheckResult c;
    c.name = "solve-converged";
    c.bound = 1.0;
    c.observed = 0.0;
    c.margin = -1.0;
    c.passed = false;
    checks.push_back(c);
  }

  rc = write_file(o.output, [&](std::ostream& os) {
    sinkflow::write_checks_json(os, checks);
  });
  if (rc != kExitOk) return rc;
  int failed = 0;
  for (const auto& c : checks)
    if (!c.passed) ++failed;
  std::cerr << "verify: " << checks.size() - failed << "/" << checks.size()
            << " checks passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_asymptotics(Options& o) {
  std::string err;
  double alpha;
  int rc = resolve_alpha(o, false, alpha, err);
  if (rc != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  if ((rc = finalize_config(o, err)) != kExitOk) {
    std::cerr << "error: " << err << '\n';
    return rc;
  }
  sinkflow::FlowParams p(alpha);
  if (!p.cusp_asymptotics_guaranteed()) {
    std::cerr << "error: alpha = " << alpha
              << " is at or below the cusp regime threshold "
              << sinkflow::fmt17(sinkflow::bounds::cusp_threshold()) << '\n';
    return kExitFailure;
  }
  if ((rc = regime_gate(p)) != kExitOk) return rc;

  sinkflow::PhiOperator op(sinkflow::make_grid(o.cfg.nodes, o.cfg.sigma_min),
                           o.cfg.modes);
  try {
    sinkflow::Solution sol = sinkflow::solve(op, p, o.cfg);
    sinkflow::SurfaceSolution surf =
        sinkflow::reconstruct_surface(op, sol.zeta, p);
    sinkflow::CuspFit fit = sinkflow::cusp_asymptotics(surf, p);
    std::vector<double> xs, dys;
    for (size_t j = 0; j < surf.x.size(); ++j) {
      double dy = surf.y[j] - surf.y0;
      if (surf.x[j] >= fit.window_lo && surf.x[j] <= fit.window_hi && dy > 0.0) {
        xs.push_back(surf.x[j]);
        dys.push_back(dy);
      }
    }
    sinkflow::RunMeta meta{alpha, o.cfg};
    rc = write_file(o.output, [&](std::ostream& os) {
      if (o.format == "csv")
        sinkflow::write_asymptotics_csv(os, fit, xs, dys);
      else
        sinkflow::write_asymptotics_json(os, fit, xs, dys, meta);
    });
    if (rc != kExitOk) return rc;
    std::cout << "cusp fit alpha=" << sinkflow::fmt17(alpha)
              << " exponent=" << sinkflow::fmt17(fit.exponent)
              << " coefficient=" << sinkflow::fmt17(fit.coefficient)
              << " a=" << sinkflow::fmt17(fit.a) << '\n';
    return kExitOk;
  } catch (const sinkflow::SolveFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Free-surface profiles for supercritical flow over a bottom sink"};
  app.require_subcommand(1);
  Options o;

  auto add_alpha_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--alpha", o.alpha, "Reduced Froude number alpha = Fr^2/2")
        ->each([&o](const std::string&) { o.has_alpha = true; });
    cmd->add_option("--froude", o.froude,
                    "Froude number (converted to alpha = Fr^2/2)")
        ->each([&o](const std::string&) { o.has_froude = true; });
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve one flow and write its profile");
  add_alpha_flags(solve);
  add_solver_flags(solve, o);
  add_output_flags(solve, o, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Solve a range of alphas");
  sweep->add_option("--alpha-range", o.alpha_range, "A:B:N or A:B:N:log")->required();
  sweep->add_option("--jobs", o.jobs, "Parallel solves (1 = sequential warm-started)");
  add_solver_flags(sweep, o);
  add_output_flags(sweep, o, true);

  CLI::App* verify = app.add_subcommand("verify", "Run the bound-verification suite");
  verify->add_option("--alpha", o.alpha, "Alpha for the solved-flow checks (default 3)")
      ->each([&o](const std::string&) { o.has_alpha = true; });
  verify->add_option("--seed", o.seed, "RNG seed for the randomized checks");
  verify->add_option("--trials", o.trials, "Random trials for the operator checks");
  add_solver_flags(verify, o);
  add_output_flags(verify, o, false);

  CLI::App* asym = app.add_subcommand("asymptotics", "Write near-cusp fit data");
  add_alpha_flags(asym);
  add_solver_flags(asym, o);
  add_output_flags(asym, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (verify->parsed()) return cmd_verify(o);
    if (asym->parsed()) return cmd_asymptotics(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
