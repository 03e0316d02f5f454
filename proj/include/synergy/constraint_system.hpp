#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "synergy/joint_table.hpp"

namespace synergy {

/// Linear equalities A x = b over nonnegative coordinates, describing a
/// polytope of probability vectors.
///
/// Construction performs two reductions that keep projection well-posed:
///  - every coordinate touched by a zero right-hand side is pinned to 0 and
///    eliminated (its equality row is then vacuous);
///  - linearly dependent rows of the remaining system are detected by a
///    rank-revealing QR factorization and dropped.
/// The normal-equation factor of the pruned system is cached so that affine
/// projections cost one solve each.
class ConstraintSystem {
 public:
  ConstraintSystem(Eigen::MatrixXd rows, Eigen::VectorXd rhs,
                   double feasibility_tolerance = 1e-10)
      : full_rows_(std::move(rows)), full_rhs_(std::move(rhs)),
        tol_(feasibility_tolerance) {
    if (full_rows_.rows() != full_rhs_.size())
      throw std::invalid_argument("constraint rows and right-hand sides differ in count");
    if (full_rows_.rows() == 0)
      throw std::invalid_argument("constraint system needs at least one row");
    reduce();
  }

  /// The marginal-preservation constraints of a joint table: one equality per
  /// (predictor, predictor state, target state) cell,
  ///   sum over matching joint cells = Pr(x_i, y).
  /// Right-hand sides are rescaled by the table's total mass so each
  /// predictor group sums to exactly 1.
  static ConstraintSystem marginal_preserving(const JointTableD& t,
                                              double feasibility_tolerance = 1e-10) {
    const Index n = t.predictor_count();
    const Index ny = t.target_axis().size();
    const Index cells = t.size();
    if (n < 1) throw std::invalid_argument("constraints need at least one predictor");

    Index total_rows = 0;
    for (Index k = 0; k < n; ++k) total_rows += t.axis(k).size() * ny;

    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(total_rows, cells);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total_rows);
    const double scale = 1.0 / static_cast<double>(t.total_mass());

    std::vector<Index> st(t.axis_count());
    Index base = 0;
    for (Index k = 0; k < n; ++k) {
      const Index nk = t.axis(k).size();
      for (Index i = 0; i < cells; ++i) {
        t.unflatten(i, st);
        const Index r = base + st[k] * ny + st.back();
        rows(r, i) = 1.0;
        rhs[r] += t.mass()[i] * scale;
      }
      base += nk * ny;
    }
    return ConstraintSystem(std::move(rows), std::move(rhs), feasibility_tolerance);
  }

  Index dimension() const { return full_rows_.cols(); }
  Index rank() const { return pruned_rows_.rows(); }
  double feasibility_tolerance() const { return tol_; }
  const std::vector<bool>& forced_zero() const { return forced_zero_; }

  /// Least-squares projection onto the affine set {x : A x = b}, with all
  /// pinned coordinates set to zero.
  Eigen::VectorXd project_affine(const Eigen::VectorXd& x) const {
    check_size(x);
    Eigen::VectorXd xr(free_.size());
    for (size_t j = 0; j < free_.size(); ++j) xr[j] = x[free_[j]];
    xr -= pruned_rows_.transpose() * normal_.solve(pruned_rows_ * xr - pruned_rhs_);
    return expand(xr);
  }

  /// Largest violation of the original equalities (before pruning).
  double equality_residual(const Eigen::VectorXd& x) const {
    check_size(x);
    return (full_rows_ * x - full_rhs_).cwiseAbs().maxCoeff();
  }

  bool is_feasible(const Eigen::VectorXd& x, double tol) const {
    return x.minCoeff() >= -tol && equality_residual(x) <= tol;
  }

  /// Alternating projection between the affine set and the nonnegative
  /// orthant.  Throws if the feasibility tolerance is not reached within the
  /// round limit.
  Eigen::VectorXd project_feasible(const Eigen::VectorXd& x) const {
    constexpr int kMaxRounds = 5000;  // alternating projection converges linearly

    Eigen::VectorXd cur = x;
    for (int round = 0; round < kMaxRounds; ++round) {
      cur = project_affine(cur);
      if (cur.minCoeff() >= -tol_) {
        cur = cur.cwiseMax(0.0);
        if (equality_residual(cur) <= tol_) return cur;
      } else {
        cur = cur.cwiseMax(0.0);
      }
    }
    cur = project_affine(cur).cwiseMax(0.0);
    throw std::runtime_error("projection did not reach the feasible set: residual " +
                             detail::format_g(equality_residual(cur)));
  }

 private:
  void check_size(const Eigen::VectorXd& x) const {
    if (x.size() != dimension())
      throw std::invalid_argument("point has wrong dimension");
  }

  Eigen::VectorXd expand(const Eigen::VectorXd& xr) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dimension());
    for (size_t j = 0; j < free_.size(); ++j) x[free_[j]] = xr[j];
    return x;
  }

  void reduce() {
    const Index d = dimension();
    forced_zero_.assign(d, false);
    for (Index r = 0; r < full_rows_.rows(); ++r) {
      if (full_rhs_[r] > kZeroMass) continue;
      for (Index c = 0; c < d; ++c)
        if (full_rows_(r, c) != 0.0) forced_zero_[c] = true;
    }
    for (Index c = 0; c < d; ++c)
      if (!forced_zero_[c]) free_.push_back(c);
    if (free_.empty())
      throw std::invalid_argument("constraints pin every coordinate to zero");

    std::vector<Index> live_rows;
    for (Index r = 0; r < full_rows_.rows(); ++r)
      if (full_rhs_[r] > kZeroMass) live_rows.push_back(r);
    if (live_rows.empty())
      throw std::invalid_argument("constraint system has no nonzero right-hand side");

    Eigen::MatrixXd live(live_rows.size(), free_.size());
    Eigen::VectorXd live_rhs(live_rows.size());
    for (size_t r = 0; r < live_rows.size(); ++r) {
      for (size_t j = 0; j < free_.size(); ++j)
        live(r, j) = full_rows_(live_rows[r], free_[j]);
      live_rhs[r] = full_rhs_[live_rows[r]];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(live.transpose());
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    const auto& perm = qr.colsPermutation().indices();

    pruned_rows_.resize(rank, free_.size());
    pruned_rhs_.resize(rank);
    for (Index r = 0; r < rank; ++r) {
      pruned_rows_.row(r) = live.row(perm[r]);
      pruned_rhs_[r] = live_rhs[perm[r]];
    }
    normal_.compute(pruned_rows_ * pruned_rows_.transpose());
    if (normal_.info() != Eigen::Success)
      throw std::runtime_error("constraint normal equations could not be factored");
  }

  Eigen::MatrixXd full_rows_;
  Eigen::VectorXd full_rhs_;
  double tol_;
  std::vector<bool> forced_zero_;
  std::vector<Index> free_;
  Eigen::MatrixXd pruned_rows_;   // independent rows, free coordinates only
  Eigen::VectorXd pruned_rhs_;
  Eigen::LDLT<Eigen::MatrixXd> normal_;
};

/// Free-function form of the feasibility projection.
inline Eigen::VectorXd project_feasible(const Eigen::VectorXd& point,
                                        const ConstraintSystem& cs) {
  return cs.project_feasible(point);
}

}  // namespace synergy
