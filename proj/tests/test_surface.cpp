#include <cmath>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sinkflow/surface.hpp"

using namespace sinkflow;

namespace {
const testutil::SolvedFlow& flow3() { return testutil::shared_solution(3.0); }
}  // namespace

TEST_CASE("the zero field maps to the uniform-stream traces", "[surface]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  std::vector<double> zero(op.grid().size(), 0.0);
  auto [tau, theta] = tau_theta(op, zero);
  for (double t : tau) REQUIRE(t == bounds::tau_origin());
  for (double t : theta) REQUIRE(t == 0.0);
  std::vector<double> neg(op.grid().size(), -1.0);
  REQUIRE_THROWS_AS(tau_theta(op, neg), std::invalid_argument);
}

TEST_CASE("traces anchor at the origin limits", "[surface]") {
  const SurfaceSolution& s = flow3().surf;
  REQUIRE(std::abs(s.tau.front() - bounds::tau_origin()) < 1e-4);
  REQUIRE(s.theta.back() == 0.0);
  double theta_min = 0.0;
  for (double t : s.theta) theta_min = std::min(theta_min, t);
  REQUIRE(theta_min >= -1e-12);
}

TEST_CASE("inclination stays below vertical until the cusp", "[surface]") {
  InclinationResult r = inclination_check(flow3().surf.eta);
  REQUIRE(r.interior_ok);
  REQUIRE(r.endpoint_ok);
  REQUIRE(r.ok);
  REQUIRE(r.max_interior < half_pi);
  REQUIRE_THROWS_AS(inclination_check(std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("the boundary curve is strictly monotone", "[surface]") {
  const SurfaceSolution& s = flow3().surf;
  REQUIRE(s.monotone_x);
  REQUIRE(s.monotone_y);
  REQUIRE(s.x.back() == 0.0);
  REQUIRE(s.x.front() > 3.0);   // ~ -(2/pi) log(sigma_min)
  REQUIRE(s.x.front() < 10.0);
  REQUIRE(s.y.front() <= 1.0);
  REQUIRE(s.y.front() > 1.0 - 1e-3);
  REQUIRE(s.y0 > 0.0);
  REQUIRE(s.y0 < 1.0);
  REQUIRE(s.y0 == s.y.back());
}

TEST_CASE("the Bernoulli identity holds along the surface", "[surface]") {
  const SurfaceSolution& s = flow3().surf;
  FlowParams p(3.0);
  std::vector<double> r = bernoulli_residual(p, s.tau, s.y);
  double sup = 0.0;
  for (double v : r) sup = std::max(sup, std::abs(v));
  REQUIRE(sup <= 1e-4);
  // the cusp-height identity is the endpoint instance
  REQUIRE(std::abs(p.alpha * (4.0 / (pi * pi)) / (s.c0 * s.c0) + s.y0 -
                   (p.alpha + 1.0)) <= 1e-4);
  REQUIRE_THROWS_AS(bernoulli_residual(p, s.tau, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("mesh halving cuts the Bernoulli defect at least in half", "[surface]") {
  const testutil::SolvedFlow& coarse =
      testutil::shared_solution(3.0, 512, 64, 1e-12, 4e-4);
  const testutil::SolvedFlow& fine =
      testutil::shared_solution(3.0, 1024, 128, 1e-12, 2e-4);
  auto sup_defect = [](const testutil::SolvedFlow& sf) {
    std::vector<double> r =
        bernoulli_residual(FlowParams(3.0), sf.surf.tau, sf.surf.y);
    double sup = 0.0;
    for (double v : r) sup = std::max(sup, std::abs(v));
    return sup;
  };
  REQUIRE(sup_defect(coarse) >= 2.0 * sup_defect(fine));
}

TEST_CASE("reflection extension reproduces the symmetries exactly", "[surface]") {
  const SurfaceSolution& s = flow3().surf;
  ExtendedTraces e = extend_symmetry(s.sigma, s.tau, s.theta);
  int M = static_cast<int>(s.sigma.size());
  int half = 2 * M + 1;
  REQUIRE(static_cast<int>(e.sigma.size()) == 4 * M + 1);
  for (size_t i = 1; i < e.sigma.size(); ++i)
    REQUIRE(e.sigma[i] > e.sigma[i - 1]);
  REQUIRE(e.sigma.front() == 0.0);
  REQUIRE(e.tau.front() == bounds::tau_origin());
  REQUIRE(e.theta.front() == 0.0);
  REQUIRE(e.sigma[half - 1] == pi);
  REQUIRE(e.tau[half - 1] == bounds::tau_origin());
  // mirrored samples: tau even, theta odd about pi/2
  for (int j : {0, 7, M / 2}) {
    int mi = M + 1 + (M - 2 - j);
    REQUIRE(e.sigma[mi] == pi - s.sigma[j]);
    REQUIRE(e.tau[mi] == s.tau[j]);
    REQUIRE(e.theta[mi] == -s.theta[j]);
  }
  // the pi-shifted copy hits 3 pi/2 with theta = 0
  int i32 = half + M - 1;
  REQUIRE(e.sigma[i32] == half_pi + pi);
  REQUIRE(e.theta[i32] == 0.0);
  REQUIRE(e.tau[i32] == s.tau.back());
  REQUIRE(e.sigma.back() == 2.0 * pi);

  REQUIRE_THROWS_AS(extend_symmetry({0.3, 0.4}, {1.0}, {0.0, 0.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      extend_symmetry({0.3, 0.4}, {1.0, 1.0}, {0.0, 0.0}),  // last != pi/2
      std::invalid_argument);
}

TEST_CASE("the slope trace meets its smoothness bound", "[surface]") {
  const PhiOperator& op = testutil::shared_op(2048, 256);
  double n = smoothness_norm(op, flow3().sol.zeta, FlowParams(3.0));
  REQUIRE(n > 0.0);
  REQUIRE(n <= bounds::smoothness_bound(3.0) + 0.05);
}

TEST_CASE("near-cusp asymptotics follow the two-thirds law", "[surface]") {
  const SurfaceSolution& s = flow3().surf;
  FlowParams p(3.0);
  CuspFit fit = cusp_asymptotics(s, p);
  REQUIRE(fit.npoints >= 8);
  REQUIRE(std::abs(fit.exponent - 2.0 / 3.0) <= 0.05);
  REQUIRE(std::abs(fit.coefficient - fit.a) / fit.a <= 0.10);
  REQUIRE(fit.beta <= 1.02);
  REQUIRE(fit.beta >= 1.0 - bounds::cusp_threshold() / p.alpha - 0.02);
  REQUIRE(fit.c0 > 0.0);
  REQUIRE(fit.c0 < 1.0);
  REQUIRE(fit.a > 0.0);
}

TEST_CASE("weaker sinks flatten the cusp toward beta one", "[surface]") {
  const SurfaceSolution& s3 = flow3().surf;
  const SurfaceSolution& s10 = testutil::shared_solution(10.0).surf;
  REQUIRE(s10.beta > s3.beta);
  REQUIRE(s10.beta <= 1.02);
  REQUIRE(s10.y0 > 0.0);
  REQUIRE(s10.y0 < 1.0);
}

TEST_CASE("the cusp fit guards its domain and resolution", "[surface]") {
  REQUIRE_THROWS_AS(cusp_asymptotics(flow3().surf, FlowParams(1.5)),
                    std::domain_error);
  SurfaceSolution stub;
  stub.x = {0.5};
  stub.y = {0.9};
  stub.y0 = 0.8;
  stub.beta = 0.5;
  REQUIRE_THROWS_AS(cusp_asymptotics(stub, FlowParams(3.0)),
                    std::runtime_error);
}
