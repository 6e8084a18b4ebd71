#pragma once

// Per-process caches so test cases in one suite reuse operators and solves.

#include <map>
#include <memory>
#include <tuple>

#include "sinkflow/sinkflow.hpp"

namespace testutil {

inline const sinkflow::PhiOperator& shared_op(int nodes, int modes,
                                              double sigma_min = 1e-4) {
  static std::map<std::tuple<int, int, double>,
                  std::unique_ptr<sinkflow::PhiOperator>>
      cache;
  auto key = std::make_tuple(nodes, modes, sigma_min);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(key, std::make_unique<sinkflow::PhiOperator>(
                               sinkflow::make_grid(nodes, sigma_min), modes))
             .first;
  return *it->second;
}

struct SolvedFlow {
  sinkflow::Solution sol;
  sinkflow::SurfaceSolution surf;
};

inline const SolvedFlow& shared_solution(double alpha, int nodes = 2048,
                                         int modes = 256, double tol = 1e-10,
                                         double sigma_min = 1e-4) {
  static std::map<std::tuple<double, int, int, double, double>, SolvedFlow>
      cache;
  auto key = std::make_tuple(alpha, nodes, modes, tol, sigma_min);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const sinkflow::PhiOperator& op = shared_op(nodes, modes, sigma_min);
    sinkflow::SolverConfig cfg;
    cfg.nodes = nodes;
    cfg.modes = modes;
    cfg.tol = tol;
    cfg.sigma_min = sigma_min;
    cfg.max_iter = 2000;
    sinkflow::FlowParams p(alpha);
    SolvedFlow sf;
    sf.sol = sinkflow::solve(op, p, cfg);
    sf.surf = sinkflow::reconstruct_surface(op, sf.sol.zeta, p);
    it = cache.emplace(key, std::move(sf)).first;
  }
  return it->second;
}

}  // namespace testutil
