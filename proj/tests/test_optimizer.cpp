#include <Eigen/Dense>

#include "doctest.h"

#include "synergy/constraint_system.hpp"
#include "synergy/examples.hpp"
#include "synergy/optimizer.hpp"

using namespace synergy;

namespace {

// the probability simplex in R^d: one row of ones, rhs 1
ConstraintSystem simplex(Index d) {
  return ConstraintSystem(Eigen::MatrixXd::Ones(1, d), Eigen::VectorXd::Ones(1));
}

Objective squared_distance_to(Eigen::VectorXd c) {
  return {[c](const Eigen::VectorXd& x) { return (x - c).squaredNorm(); },
          [c](const Eigen::VectorXd& x) { return Eigen::VectorXd(2.0 * (x - c)); }};
}

}  // namespace

TEST_CASE("constraint reduction pins zero-rhs cells and prunes dependent rows") {
  const JointTableD rdn = build_example(ExampleId::Rdn);
  const ConstraintSystem cs = ConstraintSystem::marginal_preserving(rdn);

  CHECK(cs.dimension() == 8);
  // (r,*,R)-style cells sit under a zero marginal and are pinned
  int pinned = 0;
  for (const bool z : cs.forced_zero()) pinned += z;
  CHECK(pinned == 6);
  CHECK(cs.rank() <= 4);

  const Eigen::VectorXd projected = cs.project_affine(Eigen::VectorXd::Zero(8));
  CHECK(cs.equality_residual(projected) <= 1e-12);
  CHECK(cs.equality_residual(Eigen::VectorXd::Zero(8)) == doctest::Approx(0.5));

  // a repeated row is linearly dependent and must not inflate the rank
  const ConstraintSystem dup(Eigen::MatrixXd::Ones(2, 5), Eigen::VectorXd::Ones(2));
  CHECK(dup.rank() == 1);
}

TEST_CASE("projection lands on the feasible polytope") {
  const ConstraintSystem cs = simplex(4);
  Eigen::VectorXd far(4);
  far << 9.0, -3.0, 0.5, 2.0;
  const Eigen::VectorXd x = cs.project_feasible(far);
  CHECK(x.minCoeff() >= 0.0);
  // the projector promises the configured residual, not exactness
  CHECK(x.sum() == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(cs.project_feasible(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("descent reaches an interior minimum") {
  Eigen::VectorXd c(3);
  c << 0.2, 0.3, 0.5;  // already on the simplex: unconstrained optimum is feasible
  OptimizerConfig cfg;
  const MinimizeResult r =
      minimize(squared_distance_to(c), simplex(3), {Eigen::VectorXd::Constant(3, 1.0 / 3)}, cfg);
  CHECK(r.converged);
  CHECK(r.best_value == doctest::Approx(0.0));
  CHECK((r.best_point - c).norm() <= 1e-5);
}

TEST_CASE("descent reaches a vertex minimum and stops cleanly") {
  // linear objective over the simplex: minimized at the cheapest vertex
  Eigen::VectorXd cost(3);
  cost << 3.0, 1.0, 2.0;
  Objective linear{[cost](const Eigen::VectorXd& x) { return cost.dot(x); },
                   [cost](const Eigen::VectorXd&) { return cost; }};
  OptimizerConfig cfg;
  const MinimizeResult r =
      minimize(linear, simplex(3), {Eigen::VectorXd::Constant(3, 1.0 / 3)}, cfg);
  CHECK(r.converged);
  CHECK(r.best_value == doctest::Approx(1.0));
  CHECK(r.best_point[1] == doctest::Approx(1.0));
}

TEST_CASE("ties keep the earliest start and results are deterministic") {
  Eigen::VectorXd c(3);
  c << 0.2, 0.3, 0.5;
  const auto objective = squared_distance_to(c);
  const std::vector<Eigen::VectorXd> starts = {c, Eigen::VectorXd::Constant(3, 1.0 / 3),
                                               c};
  OptimizerConfig cfg;
  const MinimizeResult a = minimize(objective, simplex(3), starts, cfg);
  const MinimizeResult b = minimize(objective, simplex(3), starts, cfg);
  CHECK(a.best_start == 0);  // starts 0 and 2 reach exactly 0; the earliest wins
  CHECK(a.best_value == b.best_value);
  CHECK((a.best_point - b.best_point).cwiseAbs().maxCoeff() == 0.0);  // bitwise
  REQUIRE(a.traces.size() == 3);
  CHECK(a.traces[0].values.front() == doctest::Approx(0.0));
}

TEST_CASE("iteration cap leaves the run marked unconverged") {
  // a minimum at a far vertex cannot be reached in one iteration
  Eigen::VectorXd cost(6);
  cost << 6, 5, 4, 3, 2, 1;
  Objective linear{[cost](const Eigen::VectorXd& x) { return cost.dot(x); },
                   [cost](const Eigen::VectorXd&) { return cost; }};
  OptimizerConfig cfg;
  cfg.max_iterations = 1;
  const MinimizeResult r =
      minimize(linear, simplex(6), {Eigen::VectorXd::Constant(6, 1.0 / 6)}, cfg);
  CHECK_FALSE(r.converged);
}

TEST_CASE("configuration validation") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.restarts = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.tolerance_bits = 1e-3;  // too loose to trust the stall detector
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
