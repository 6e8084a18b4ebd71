#pragma once

// Picard iteration for zeta = Phi(zeta) with a continuation ladder over the
// capped operators Phi_k. Each stage iterates zeta <- clamp+(Phi_k(zeta)) to
// the L2-residual tolerance, warm-starting the next stage; the last stage is
// always uncapped so the reported residual is against the true operator.

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sinkflow/flow_params.hpp"
#include "sinkflow/grid.hpp"
#include "sinkflow/nekrasov.hpp"

namespace sinkflow {

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 500;  // per continuation stage
  int modes = 256;
  int nodes = 2048;
  std::vector<double> reg_schedule = {16.0, 64.0, 256.0, 1024.0, reg_unbounded};
  double sigma_min = 1e-4;

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (modes < 1) throw std::invalid_argument("SolverConfig: modes must be >= 1");
    if (2 * modes > nodes)
      throw std::invalid_argument("SolverConfig: modes exceed the aliasing guard (need modes <= nodes/2)");
    if (reg_schedule.empty() || !std::isinf(reg_schedule.back()))
      throw std::invalid_argument("SolverConfig: reg_schedule must end with inf");
    for (size_t i = 0; i + 1 < reg_schedule.size(); ++i) {
      if (!(reg_schedule[i] >= 1.0) || !std::isfinite(reg_schedule[i]))
        throw std::invalid_argument("SolverConfig: finite schedule entries must be >= 1");
      if (!(reg_schedule[i] < reg_schedule[i + 1]))
        throw std::invalid_argument("SolverConfig: reg_schedule must be strictly increasing");
    }
    if (!(sigma_min > 0.0))
      throw std::invalid_argument("SolverConfig: sigma_min must be > 0");
  }
};

struct SolveReport {
  std::vector<int> iterations_per_stage;
  std::vector<double> residual_history;  // residuals of successive iterates, all stages
  double contraction_estimate = 0.0;     // max successive-residual ratio, final stage only
  bool converged = false;
  double final_residual = std::numeric_limits<double>::infinity();
  int clamped_final = 0;  // nodes clamped at the accepted iterate (0 on success)
  bool existence_only_regime = false;
  std::string regime_note;

  // index into residual_history where the final stage begins
  int final_stage_offset() const {
    int off = 0;
    for (size_t s = 0; s + 1 < iterations_per_stage.size(); ++s)
      off += iterations_per_stage[s];
    return off;
  }
};

class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& msg, SolveReport rep)
      : std::runtime_error(msg), report_(std::move(rep)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct Solution {
  std::vector<double> zeta;
  SolveReport report;
};

inline double residual(const PhiOperator& op, const std::vector<double>& zeta,
                       const FlowParams& p) {
  std::vector<double> img = op.apply(zeta, p);
  for (size_t j = 0; j < img.size(); ++j) img[j] -= zeta[j];
  return op.norm(img);
}

inline Solution solve(const PhiOperator& op, const FlowParams& p,
                      const SolverConfig& cfg,
                      const std::vector<double>* start = nullptr) {
  cfg.validate();
  SolveReport rep;
  if (!p.existence_guaranteed()) {
    rep.existence_only_regime = true;
    rep.regime_note =
        "alpha below the existence threshold; no solution is guaranteed";
  } else if (!p.uniqueness_guaranteed()) {
    rep.existence_only_regime = true;
    rep.regime_note =
        "existence-only regime; convergence and uniqueness not guaranteed";
  }

  std::vector<double> zeta;
  if (start != nullptr) {
    zeta = *start;
    for (double& z : zeta) z = std::max(z, 0.0);
  } else {
    std::vector<double> zero(op.grid().size(), 0.0);
    zeta = op.apply(zero, p, cfg.reg_schedule.front());
    for (double& z : zeta) z = std::max(z, 0.0);
  }

  int nstages = static_cast<int>(cfg.reg_schedule.size());
  for (int s = 0; s < nstages; ++s) {
    double k = cfg.reg_schedule[s];
    bool final_stage = (s == nstages - 1);
    int iters = 0;
    double prev_res = -1.0;
    bool stage_done = false;
    while (iters < cfg.max_iter) {
      std::vector<double> img = op.apply(zeta, p, k);
      double res = 0.0;
      int clamped = 0;
      for (size_t j = 0; j < img.size(); ++j) {
        double d = img[j] - zeta[j];
        res += op.grid().weights[j] * d * d;
        if (img[j] < 0.0) {
          img[j] = 0.0;
          ++clamped;
        }
      }
      res = std::sqrt(res);
      ++iters;
      rep.residual_history.push_back(res);
      if (!std::isfinite(res)) {
        rep.iterations_per_stage.push_back(iters);
        throw SolveFailure("divergence: non-finite iterate", rep);
      }
      if (final_stage && prev_res > 0.0)
        rep.contraction_estimate =
            std::max(rep.contraction_estimate, res / prev_res);
      prev_res = res;
      zeta = std::move(img);
      rep.clamped_final = clamped;
      if (res <= cfg.tol) {
        stage_done = true;
        break;
      }
    }
    rep.iterations_per_stage.push_back(iters);
    if (!stage_done) {
      rep.final_residual = rep.residual_history.back();
      throw SolveFailure(
          "no convergence within max_iter at regularization stage " +
              std::to_string(s),
          rep);
    }
  }

  // residual of the returned iterate against the uncapped operator
  std::vector<double> img = op.apply(zeta, p);
  double res = 0.0;
  for (size_t j = 0; j < img.size(); ++j) {
    double d = img[j] - zeta[j];
    res += op.grid().weights[j] * d * d;
  }
  rep.final_residual = std::sqrt(res);
  rep.residual_history.push_back(rep.final_residual);
  rep.converged = rep.final_residual <= cfg.tol;
  if (!rep.converged)
    throw SolveFailure("final residual above tolerance", rep);
  return {std::move(zeta), std::move(rep)};
}

inline Solution solve(const FlowParams& p, const SolverConfig& cfg) {
  cfg.validate();
  PhiOperator op(make_grid(cfg.nodes, cfg.sigma_min), cfg.modes);
  return solve(op, p, cfg);
}

struct SweepEntry {
  double alpha = 0.0;
  bool ok = false;
  Solution solution;
  std::string error;
};

// jobs == 1: sequential, warm-starting each alpha from the previous solution.
// jobs > 1: independent cold solves in a thread pool; results in input order.
inline std::vector<SweepEntry> sweep(const PhiOperator& op,
                                     const std::vector<double>& alphas,
                                     const SolverConfig& cfg, int jobs = 1) {
  cfg.validate();
  if (jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");
  std::vector<SweepEntry> out(alphas.size());
  for (size_t i = 0; i < alphas.size(); ++i) out[i].alpha = alphas[i];

  auto run_one = [&](size_t i, const std::vector<double>* warm) {
    try {
      FlowParams p(alphas[i]);
      out[i].solution = solve(op, p, cfg, warm);
      out[i].ok = true;
    } catch (const SolveFailure& e) {
      out[i].error = e.what();
      out[i].solution.report = e.report();
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  };

  if (jobs == 1 || alphas.size() <= 1) {
    const std::vector<double>* warm = nullptr;
    for (size_t i = 0; i < alphas.size(); ++i) {
      run_one(i, warm);
      if (out[i].ok) warm = &out[i].solution.zeta;
    }
  } else {
    std::atomic<size_t> next{0};
    int nthreads = std::min<int>(jobs, static_cast<int>(alphas.size()));
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < alphas.size();
             i = next.fetch_add(1))
          run_one(i, nullptr);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace sinkflow
