#include <cmath>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sinkflow/diagnostics.hpp"
#include "sinkflow/flow_params.hpp"
#include "sinkflow/nekrasov.hpp"

using namespace sinkflow;

TEST_CASE("flow parameters convert and validate", "[operator]") {
  FlowParams p = FlowParams::from_froude(std::sqrt(6.0));
  REQUIRE(std::abs(p.alpha - 3.0) < 1e-14);
  REQUIRE(std::abs(FlowParams(3.0).froude() - std::sqrt(6.0)) < 1e-15);
  REQUIRE_THROWS_AS(FlowParams(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(FlowParams(-1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(FlowParams(std::nan("")), std::invalid_argument);
  REQUIRE_THROWS_AS(FlowParams::from_froude(-2.0), std::invalid_argument);
}

TEST_CASE("regime predicates switch exactly at the thresholds", "[operator]") {
  double ex = bounds::existence_threshold();
  REQUIRE(FlowParams(ex).existence_guaranteed());             // closed at the bound
  REQUIRE_FALSE(FlowParams(ex * (1.0 - 1e-12)).existence_guaranteed());
  double un = bounds::uniqueness_threshold();
  REQUIRE_FALSE(FlowParams(un).uniqueness_guaranteed());      // open at the bound
  REQUIRE(FlowParams(un * (1.0 + 1e-12)).uniqueness_guaranteed());
  double cu = bounds::cusp_threshold();
  REQUIRE_FALSE(FlowParams(cu).cusp_asymptotics_guaranteed());
  REQUIRE(FlowParams(cu * (1.0 + 1e-12)).cusp_asymptotics_guaranteed());
}

TEST_CASE("the image of zero is the scaled cosine", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  FlowParams p(3.0);
  std::vector<double> zero(op.grid().size(), 0.0);
  std::vector<double> img = op.apply(zero, p);
  double amp = 3.0 / (p.alpha * pi);
  for (int j = 0; j < op.grid().size(); ++j)
    REQUIRE(std::abs(img[j] - amp * std::cos(op.grid().nodes[j])) < 1e-14);
  REQUIRE(img.back() == 0.0);
}

TEST_CASE("every image vanishes exactly at pi/2", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  FlowParams p(3.0);
  std::vector<double> zeta(op.grid().size());
  for (int j = 0; j < op.grid().size(); ++j)
    zeta[j] = 0.1 + 0.05 * std::sin(2.0 * op.grid().nodes[j]);
  REQUIRE(op.apply(zeta, p).back() == 0.0);
  REQUIRE(op.apply(zeta, p, 64.0).back() == 0.0);
}

TEST_CASE("capping replaces cot only below the cap point", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  const Grid& g = op.grid();
  FlowParams p(3.0);
  std::vector<double> zero(g.size(), 0.0);
  std::vector<double> capped = op.apply(zero, p, 100.0);
  std::vector<double> free = op.apply(zero, p);
  double amp = 3.0 / (p.alpha * pi);
  double cap_value = std::cos(0.01) / std::sin(0.01);
  int below = 0;
  for (int j = 0; j < g.size(); ++j) {
    if (g.nodes[j] <= 0.01) {
      ++below;
      REQUIRE(std::abs(capped[j] - amp * std::sin(g.nodes[j]) * cap_value) <
              1e-14);
    } else {
      REQUIRE(capped[j] == free[j]);  // identical arithmetic above the cap
    }
  }
  REQUIRE(below > 0);

  // a cap below the first node leaves the whole image untouched
  std::vector<double> hi = op.apply(zero, p, 1e6);
  for (int j = 0; j < g.size(); ++j) REQUIRE(hi[j] == free[j]);
}

TEST_CASE("images stay inside the invariant ball", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  double R = bounds::ball_radius();
  Rng rng(314159);
  for (double alpha : {1.0, 2.0, 3.0}) {
    FlowParams p(alpha);
    for (double k : {16.0, 1024.0, reg_unbounded}) {
      for (int t = 0; t < 10; ++t) {
        std::vector<double> zeta =
            random_nonneg(op, p, rng, rng.uniform(0.0, R));
        REQUIRE(op.norm(op.apply(zeta, p, k)) <= R + 1e-7);
      }
    }
  }
}

TEST_CASE("pairwise images contract by the Lipschitz factor", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  CheckResult c = check_contraction(op, FlowParams(3.0), 30, 2718);
  REQUIRE(c.passed);
  REQUIRE(c.observed < bounds::contraction_bound(3.0) + 0.02);
}

TEST_CASE("angle images follow the spectral eigenvalues", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  const Grid& g = op.grid();
  std::vector<double> zero(g.size(), 0.0), s2(g.size());
  for (int j = 0; j < g.size(); ++j) s2[j] = std::sin(2.0 * g.nodes[j]);
  std::vector<double> th0 = op.theta(zero);
  for (double v : th0) REQUIRE(v == 0.0);
  std::vector<double> eta0 = op.eta(zero);
  for (int j = 0; j < g.size(); ++j) REQUIRE(eta0[j] == g.nodes[j]);
  // zeta = sin(2s) has H-image sin(2s)/2, so theta = sin(2s)/6
  std::vector<double> th = op.theta(s2);
  for (int j = 0; j < g.size(); ++j)
    REQUIRE(std::abs(th[j] - std::sin(2.0 * g.nodes[j]) / 6.0) < 1e-10);
  SineSeries ts = op.theta_series(s2);
  REQUIRE(std::abs(ts.c[0] - 1.0 / 6.0) < 1e-10);
}

TEST_CASE("operator preconditions are enforced", "[operator]") {
  const PhiOperator& op = testutil::shared_op(1024, 128);
  FlowParams p(3.0);
  std::vector<double> wrong(11, 0.0);
  REQUIRE_THROWS_AS(op.apply(wrong, p), std::invalid_argument);
  std::vector<double> neg(op.grid().size(), 0.0);
  neg[5] = -1e-3;
  REQUIRE_THROWS_AS(op.apply(neg, p), std::invalid_argument);
  std::vector<double> ok(op.grid().size(), 0.0);
  REQUIRE_THROWS_AS(op.apply(ok, p, 0.5), std::invalid_argument);
}
