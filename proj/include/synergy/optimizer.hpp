#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "synergy/constraint_system.hpp"

namespace synergy {

struct OptimizerConfig {
  int restarts = 16;                    // random starts beyond the deterministic ones
  int max_iterations = 5000;            // per start
  double tolerance_bits = 1e-10;        // objective-change stopping threshold
  double feasibility_tolerance = 1e-10;
  std::uint64_t seed = 0;

  void validate() const {
    if (restarts < 0 || max_iterations <= 0 || tolerance_bits <= 0 ||
        feasibility_tolerance <= 0)
      throw std::invalid_argument("optimizer configuration values must be positive");
    if (tolerance_bits > 1e-6)
      throw std::invalid_argument("objective tolerance must be at most 1e-6 bits");
  }
};

/// Smooth objective in bits with its gradient (same scale).
struct Objective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// Objective values after each accepted step of one descent run.
struct DescentTrace {
  std::vector<double> values;
  bool converged = false;
};

struct MinimizeResult {
  Eigen::VectorXd best_point;
  double best_value = 0;
  int best_start = -1;
  bool converged = false;               // of the winning start
  std::vector<DescentTrace> traces;     // one per start, in start order
};

/// Projected gradient descent with Armijo backtracking from every start,
/// keeping the lowest objective found.  Ties keep the earliest start, so the
/// result does not depend on evaluation order.  Descent stops once the
/// objective change stays below tolerance for ten consecutive iterations or
/// the iteration cap is reached.
///
/// Each iteration projects a single gradient trial point and then backtracks
/// along the feasible segment towards it (both endpoints lie in the polytope,
/// so every trial is feasible without further projections).  The trial step
/// is the Barzilai-Borwein length from the previous accepted move, which
/// keeps the iteration count low on ill-conditioned tables.
inline MinimizeResult minimize(const Objective& objective,
                               const ConstraintSystem& cs,
                               const std::vector<Eigen::VectorXd>& starts,
                               const OptimizerConfig& cfg) {
  cfg.validate();
  if (starts.empty()) throw std::invalid_argument("minimize needs at least one start");
  constexpr double kArmijoSlope = 1e-4;
  constexpr double kMinStep = 1e-12;
  constexpr int kStallRounds = 10;
  constexpr double kTrialStepFloor = 1e-8;
  constexpr double kTrialStepCeil = 1e8;

  auto checked_value = [&](const Eigen::VectorXd& x) {
    const double v = objective.value(x);
    if (!std::isfinite(v))
      throw std::logic_error("objective is not finite at a feasible point");
    return v;
  };

  MinimizeResult result;
  for (size_t s = 0; s < starts.size(); ++s) {
    Eigen::VectorXd x = cs.project_feasible(starts[s]);
    double fx = checked_value(x);
    Eigen::VectorXd g = objective.gradient(x);

    DescentTrace trace;
    trace.values.push_back(fx);
    int stall = 0;
    int failed_searches = 0;
    double alpha = 1.0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      const Eigen::VectorXd d = cs.project_feasible(x - alpha * g) - x;
      const double slope = g.dot(d);
      double theta = 1.0;
      bool accepted = false;
      Eigen::VectorXd xn;
      double fn = fx;
      if (slope < 0.0) {
        while (theta >= kMinStep) {
          xn = (x + theta * d).cwiseMax(0.0);
          fn = checked_value(xn);
          if (fn < fx && fn <= fx + kArmijoSlope * theta * slope) {
            accepted = true;
            break;
          }
          theta *= 0.5;
        }
      }
      if (!accepted) {
        // The direction for this trial step is exhausted; re-project with a
        // shorter one before giving up, since the feasibility projection is
        // not exact and can swallow a descent direction at one length.
        if (++failed_searches >= 3) {
          trace.converged = true;  // no descent direction left along the gradient
          break;
        }
        alpha = std::max(alpha / 16.0, kTrialStepFloor);
        continue;
      }
      failed_searches = 0;
      const Eigen::VectorXd gn = objective.gradient(xn);
      const Eigen::VectorXd moved = xn - x;
      const double curvature = moved.dot(gn - g);
      alpha = curvature > 0.0
                  ? std::clamp(moved.squaredNorm() / curvature, kTrialStepFloor,
                               kTrialStepCeil)
                  : kTrialStepCeil;
      stall = std::abs(fx - fn) < cfg.tolerance_bits ? stall + 1 : 0;
      x = std::move(xn);
      fx = fn;
      g = gn;
      trace.values.push_back(fx);
      if (stall >= kStallRounds) {
        trace.converged = true;
        break;
      }
    }

    if (result.best_start < 0 || fx < result.best_value) {
      result.best_point = x;
      result.best_value = fx;
      result.best_start = static_cast<int>(s);
      result.converged = trace.converged;
    }
    result.traces.push_back(std::move(trace));
  }
  return result;
}

}  // namespace synergy
