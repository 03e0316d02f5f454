#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "synergy/classic_measures.hpp"
#include "synergy/info_measures.hpp"
#include "synergy/joint_table.hpp"
#include "synergy/optimizer.hpp"

namespace synergy {

/// Cells at or below this are frozen during gradient steps so the descent
/// never evaluates log(0); the projection is still free to lift them.
inline constexpr double kGradientZeroHold = 1e-12;

/// Mutual information (bits) between the joint predictor block and the target
/// for a raw mass vector laid out with the target axis fastest:
///   sum_{x,y} p(x,y) log2( p(x,y) / (p(x) p(y)) ).
inline double coalition_target_mi(const Eigen::VectorXd& mass, Index target_arity) {
  const Index nx = mass.size() / target_arity;
  Eigen::VectorXd px = Eigen::VectorXd::Zero(nx);
  Eigen::VectorXd py = Eigen::VectorXd::Zero(target_arity);
  for (Index i = 0; i < mass.size(); ++i) {
    const double m = std::max(mass[i], 0.0);
    px[i / target_arity] += m;
    py[i % target_arity] += m;
  }
  detail::CompensatedSum s;
  for (Index i = 0; i < mass.size(); ++i) {
    const double m = mass[i];
    if (m < kZeroMass) continue;
    s.add(m * std::log2(m / (px[i / target_arity] * py[i % target_arity])));
  }
  return detail::ensure_finite(s.value(), "coalition-target information");
}

/// Gradient of coalition_target_mi in bits:
///   log2( p(x,y) / (p(x) p(y)) ) - log2(e).
/// Frozen (near-zero) cells are evaluated at the hold threshold instead of
/// their true mass: the exact derivative there diverges to -inf, and cutting
/// it to zero would turn every face of the polytope into a spurious fixed
/// point the descent cannot leave.  Cells whose coalition row or target
/// column holds no more than threshold mass stay frozen: no meaningful
/// conditional exists there, and the raw ratio can overflow on subnormal
/// row sums.
inline Eigen::VectorXd coalition_target_mi_gradient(const Eigen::VectorXd& mass,
                                                    Index target_arity) {
  static const double kLog2e = std::log2(std::exp(1.0));
  const Index nx = mass.size() / target_arity;
  Eigen::VectorXd px = Eigen::VectorXd::Zero(nx);
  Eigen::VectorXd py = Eigen::VectorXd::Zero(target_arity);
  for (Index i = 0; i < mass.size(); ++i) {
    const double m = std::max(mass[i], 0.0);
    px[i / target_arity] += m;
    py[i % target_arity] += m;
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mass.size());
  for (Index i = 0; i < mass.size(); ++i) {
    const double row = px[i / target_arity];
    const double col = py[i % target_arity];
    if (row <= kGradientZeroHold || col <= kGradientZeroHold) continue;
    const double m = std::max(mass[i], kGradientZeroHold);
    g[i] = std::log2(m / (row * col)) - kLog2e;
  }
  return g;
}

/// The product-of-conditionals surrogate Pr(y) * prod_i Pr(x_i|y).  It keeps
/// every pairwise (X_i, target) marginal of the input, so it is always a
/// feasible point of the marginal-preserving polytope, and its coalition
/// information upper-bounds the constrained minimum reachable from it.
inline JointTableD analytic_upper_bound(const JointTableD& t) {
  DenseVector<double> q, z;
  detail::conditional_product_weights(t, q, z);
  return JointTableD(t.axes(), std::move(q));
}

namespace detail {

/// Predictors that are exact relabelings of an earlier predictor: rep[j] == j
/// marks a representative, otherwise rep[j] names it and relabel[j] maps the
/// representative's states onto the duplicate's (support states only, -1
/// elsewhere).
struct DuplicateGroups {
  std::vector<Index> rep;
  std::vector<std::vector<Index>> relabel;
  bool any = false;
};

inline DuplicateGroups find_duplicate_predictors(const JointTableD& t) {
  const Index n = t.predictor_count();
  DuplicateGroups g;
  g.rep.resize(std::size_t(n));
  g.relabel.resize(std::size_t(n));
  for (Index j = 0; j < n; ++j) g.rep[std::size_t(j)] = j;

  for (Index j = 1; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      if (g.rep[std::size_t(i)] != i) continue;
      const JointTableD pair = marginal(t, {t.axis(i).name, t.axis(j).name});
      const Index a = pair.axis(0).size();
      const Index b = pair.target_axis().size();
      std::vector<Index> to(std::size_t(a), -1);
      std::vector<Index> from(std::size_t(b), -1);
      bool bijective = true;
      for (Index s = 0; bijective && s < a; ++s) {
        for (Index u = 0; bijective && u < b; ++u) {
          if (pair.mass()[s * b + u] <= kZeroMass) continue;
          if (to[std::size_t(s)] == -1) to[std::size_t(s)] = u;
          if (from[std::size_t(u)] == -1) from[std::size_t(u)] = s;
          bijective = to[std::size_t(s)] == u && from[std::size_t(u)] == s;
        }
      }
      if (!bijective) continue;
      g.rep[std::size_t(j)] = i;
      g.relabel[std::size_t(j)] = std::move(to);
      g.any = true;
      break;
    }
  }
  return g;
}

/// The product-of-conditionals bound computed on the deduplicated predictor
/// core, with every duplicate re-attached as the deterministic relabeling of
/// its representative.  Treating copies as independent channels (the plain
/// product) leaks extra coalition information; coupling them keeps all
/// pairwise marginals while staying as tight as the deduplicated bound.
inline JointTableD analytic_upper_bound_coupled(const JointTableD& t,
                                                const DuplicateGroups& g) {
  const Index n = t.predictor_count();
  std::vector<std::string> core_names;
  for (Index k = 0; k < n; ++k)
    if (g.rep[std::size_t(k)] == k) core_names.push_back(t.axis(k).name);
  core_names.push_back(t.target_axis().name);
  const JointTableD core_ub = analytic_upper_bound(marginal(t, core_names));

  DenseVector<double> mass = DenseVector<double>::Zero(t.size());
  std::vector<Index> core_state(std::size_t(core_ub.axis_count()));
  std::vector<Index> full_state(std::size_t(t.axis_count()));
  for (Index c = 0; c < core_ub.size(); ++c) {
    const double m = core_ub.mass()[c];
    if (m <= 0) continue;
    core_ub.unflatten(c, core_state);
    Index ci = 0;
    for (Index k = 0; k < n; ++k)
      if (g.rep[std::size_t(k)] == k) full_state[std::size_t(k)] = core_state[std::size_t(ci++)];
    full_state[std::size_t(n)] = core_state[std::size_t(ci)];
    for (Index k = 0; k < n; ++k) {
      if (g.rep[std::size_t(k)] == k) continue;
      // zero-mass representative states never carry product mass
      full_state[std::size_t(k)] =
          g.relabel[std::size_t(k)][std::size_t(full_state[std::size_t(g.rep[std::size_t(k)])])];
    }
    mass[t.flat_index(full_state)] += m;
  }
  return JointTableD(t.axes(), std::move(mass));
}

}  // namespace detail

/// Result of minimizing the coalition-target information over all joint
/// distributions that preserve the pairwise (predictor, target) marginals.
struct UnionInfoResult {
  JointTableD upper_bound_table;   // best product-of-conditionals point found
  ScalarBits upper_bound_value;    // objective there
  ScalarBits best_value;           // lowest objective found
  JointTableD best_table;
  bool converged = false;
  int restarts_used = 0;           // descent runs executed
};

/// Interval bracketing the synergy I(whole) - min I*(union):
/// `lower` comes from the analytic upper bound on the union information,
/// `best` from the optimizer, `upper` from s_max.
struct SvkInterval {
  ScalarBits lower = 0;
  ScalarBits best = 0;
  ScalarBits upper = 0;
  bool converged = false;
};

/// The four components of the two-predictor decomposition.
struct Pid2 {
  ScalarBits redundancy = 0;
  ScalarBits unique1 = 0;
  ScalarBits unique2 = 0;
  ScalarBits synergy = 0;
};

/// Minimizes the coalition-target information subject to preserving every
/// (X_i, target) marginal.  The objective is a difference of concave terms,
/// hence non-convex in general: descent runs from the analytic upper bound,
/// from the input table itself, and from `cfg.restarts` random feasible
/// blends, and the lowest value found is reported.  Deterministic in
/// (table, cfg).
inline UnionInfoResult minimize_union_information(const JointTableD& t,
                                                  const OptimizerConfig& cfg = {}) {
  cfg.validate();
  const Index n = t.predictor_count();
  if (n < 1) throw std::invalid_argument("union information needs a predictor");
  const Index ny = t.target_axis().size();
  const std::vector<std::string> target{t.target_axis().name};

  if (n == 1) {
    // A single predictor's pairwise marginal pins the whole joint, so the
    // minimum is the plain mutual information; no optimization happens.
    JointTableD ub = analytic_upper_bound(t);
    const double ub_value = coalition_target_mi(ub.mass(), ny);
    UnionInfoResult r{std::move(ub), ub_value,
                      mutual_information(t, {t.axis(0).name}, target), t, true, 0};
    return r;
  }

  // Work on an exactly renormalized copy so the constraint right-hand sides
  // form probability groups summing to one.
  DenseVector<double> mass = t.mass() / t.total_mass();
  const JointTableD normalized(t.axes(), std::move(mass));

  if (ny == 1) {
    // A one-state target has nothing to inform: the objective is identically
    // zero everywhere on the polytope.
    JointTableD ub = analytic_upper_bound(normalized);
    const double ub_value = coalition_target_mi(ub.mass(), ny);
    return UnionInfoResult{std::move(ub), ub_value, 0.0, normalized, true, 0};
  }

  const ConstraintSystem cs =
      ConstraintSystem::marginal_preserving(normalized, cfg.feasibility_tolerance);
  JointTableD ub = analytic_upper_bound(normalized);
  double ub_value = coalition_target_mi(ub.mass(), ny);

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(ub.mass());

  // Exact duplicate predictors make the plain product needlessly loose
  // (independent copies leak information separately); the coupled variant
  // restores the deduplicated bound while staying feasible.
  const detail::DuplicateGroups duplicates = detail::find_duplicate_predictors(normalized);
  if (duplicates.any) {
    JointTableD coupled = detail::analytic_upper_bound_coupled(normalized, duplicates);
    const double coupled_value = coalition_target_mi(coupled.mass(), ny);
    starts.push_back(coupled.mass());
    if (coupled_value < ub_value) {
      ub = std::move(coupled);
      ub_value = coupled_value;
    }
  }

  starts.push_back(normalized.mass());

  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> exp_draw(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < cfg.restarts; ++k) {
    Eigen::VectorXd draw = Eigen::VectorXd::Zero(cs.dimension());
    double sum = 0.0;
    for (Index c = 0; c < cs.dimension(); ++c) {
      if (cs.forced_zero()[c]) continue;
      draw[c] = exp_draw(rng);
      sum += draw[c];
    }
    draw /= sum;  // uniform over the free-cell simplex
    const double blend = unif(rng);
    starts.push_back((1.0 - blend) * ub.mass() + blend * draw);
  }

  Objective objective{
      [ny](const Eigen::VectorXd& x) { return coalition_target_mi(x, ny); },
      [ny](const Eigen::VectorXd& x) { return coalition_target_mi_gradient(x, ny); }};
  const MinimizeResult opt = minimize(objective, cs, starts, cfg);

  // The search tolerates mass drift of the order of the projection residual;
  // the polytope proper only holds total-mass-one points, so renormalize
  // before the final evaluation (this also keeps the value nonnegative up to
  // rounding instead of up to the residual).
  DenseVector<double> best = opt.best_point.cwiseMax(0.0);
  best /= best.sum();
  const double best_value = coalition_target_mi(best, ny);

  UnionInfoResult r{std::move(ub), ub_value, best_value,
                    JointTableD(t.axes(), std::move(best)),
                    opt.converged, static_cast<int>(starts.size())};

  // Violations here indicate a constraint bug, not an unlucky descent.
  if (r.best_value > r.upper_bound_value + 1e-9)
    throw std::logic_error("union information exceeds its analytic upper bound");
  if (!cs.is_feasible(r.best_table.mass(), 1e-9))
    throw std::logic_error("optimizer returned an infeasible table");
  double i_max = 0;
  for (Index k = 0; k < n; ++k)
    i_max = std::max(i_max, mutual_information(normalized, {t.axis(k).name}, target));
  if (r.best_value < i_max - 1e-6)
    throw std::logic_error("union information fell below the single-predictor floor");
  // Every feasible point keeps each (X_i, Y) marginal, so the coalition
  // information can never sit below any single predictor's share; anything
  // smaller is evaluation noise and is clamped to this exact floor.
  if (r.best_value < i_max) r.best_value = i_max;
  return r;
}

/// Synergy bracket: whole-coalition information minus the union information,
/// reported as (lower, best-found, upper) with the s_max cap.
inline SvkInterval s_vk(const JointTableD& t, const OptimizerConfig& cfg = {}) {
  detail::require_predictors(t, 2);
  const UnionInfoResult u = minimize_union_information(t, cfg);
  const ScalarBits i_whole =
      mutual_information(t, t.predictor_names(), {t.target_axis().name});
  return SvkInterval{i_whole - u.upper_bound_value, i_whole - u.best_value,
                     s_max(t), u.converged};
}

/// Inclusion-exclusion over all non-empty predictor subsets:
///   sum_S (-1)^(|S|+1) * union_information(S).
/// Each subset costs one constrained minimization, so the predictor count is
/// capped at three; decompose larger systems pairwise instead.
inline ScalarBits intersection_information(const JointTableD& t,
                                           const OptimizerConfig& cfg = {}) {
  const Index n = t.predictor_count();
  if (n < 1) throw std::invalid_argument("intersection information needs a predictor");
  if (n > 3)
    throw std::invalid_argument(
        "intersection information is capped at three predictors (2^n - 1 "
        "minimizations); decompose larger systems into pairwise subsets");
  const auto names = t.predictor_names();
  detail::CompensatedSum total;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::string> keep;
    for (Index k = 0; k < n; ++k)
      if (mask & (1u << k)) keep.push_back(names[k]);
    keep.push_back(t.target_axis().name);
    const auto sub = marginal(t, keep);
    const double value = minimize_union_information(sub, cfg).best_value;
    const int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
    total.add(sign * value);
  }
  return total.value();
}

/// Two-predictor decomposition into redundancy, unique shares, and synergy,
/// all derived from one union-information minimization.
inline Pid2 pid2(const JointTableD& t, const OptimizerConfig& cfg = {}) {
  if (t.predictor_count() != 2)
    throw std::invalid_argument("the two-predictor decomposition needs exactly two predictors");
  const std::vector<std::string> target{t.target_axis().name};
  const ScalarBits i1 = mutual_information(t, {t.axis(0).name}, target);
  const ScalarBits i2 = mutual_information(t, {t.axis(1).name}, target);
  const ScalarBits i_whole =
      mutual_information(t, t.predictor_names(), target);
  const ScalarBits union_info = minimize_union_information(t, cfg).best_value;
  Pid2 p;
  p.redundancy = i1 + i2 - union_info;
  p.unique1 = i1 - p.redundancy;
  p.unique2 = i2 - p.redundancy;
  p.synergy = i_whole - union_info;
  return p;
}

}  // namespace synergy
