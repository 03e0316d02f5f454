#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace synergy {

using Index = Eigen::Index;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// All public information quantities are in bits (log base 2).
using ScalarBits = double;

/// Probability masses whose magnitude falls below this are exact zeros
/// for the purposes of 0*log(0) = 0 and absolute-continuity checks.
inline constexpr double kZeroMass = 1e-15;

/// A table's entries must sum to 1 within this tolerance at construction.
inline constexpr double kMassSumTolerance = 1e-9;

namespace detail {

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

/// One discrete variable: a non-empty name plus its ordered state labels.
struct VariableAxis {
  std::string name;
  std::vector<std::string> states;

  Index size() const { return static_cast<Index>(states.size()); }

  /// Position of `label` among the states, or -1 if absent.
  Index state_index(const std::string& label) const {
    auto it = std::find(states.begin(), states.end(), label);
    return it == states.end() ? -1 : static_cast<Index>(it - states.begin());
  }

  bool operator==(const VariableAxis&) const = default;
};

/// Dense joint probability table over one or more discrete variables.
///
/// Axes are ordered with the target variable last; every axis before it is a
/// predictor.  Cells are addressed in mixed radix with the last axis fastest,
/// so the target states of one predictor configuration sit contiguously.
/// Tables are immutable after construction and all operations on them are
/// pure functions.
template <typename Scalar>
class JointTable {
 public:
  /// Builds a predictors-then-target table.  Rejects malformed axes,
  /// negative entries, and masses that do not sum to 1 within tolerance.
  JointTable(std::vector<VariableAxis> predictors, VariableAxis target,
             DenseVector<Scalar> mass)
      : axes_(std::move(predictors)), mass_(std::move(mass)) {
    axes_.push_back(std::move(target));
    init();
  }

  /// Builds from a full axis list whose last axis plays the target slot.
  /// Marginal and conditional results use this form; they may legitimately
  /// end up with zero predictors.
  JointTable(std::vector<VariableAxis> axes, DenseVector<Scalar> mass)
      : axes_(std::move(axes)), mass_(std::move(mass)) {
    init();
  }

  Index axis_count() const { return static_cast<Index>(axes_.size()); }
  Index predictor_count() const { return axis_count() - 1; }

  const VariableAxis& axis(Index k) const { return axes_.at(k); }
  const std::vector<VariableAxis>& axes() const { return axes_; }
  const VariableAxis& target_axis() const { return axes_.back(); }

  std::vector<std::string> predictor_names() const {
    std::vector<std::string> names;
    for (Index i = 0; i + 1 < axis_count(); ++i) names.push_back(axes_[i].name);
    return names;
  }

  /// Position of the named axis; throws if the name is unknown.
  Index axis_position(const std::string& name) const {
    for (Index i = 0; i < axis_count(); ++i)
      if (axes_[i].name == name) return i;
    throw std::invalid_argument("unknown axis name '" + name + "'");
  }

  const DenseVector<Scalar>& mass() const { return mass_; }
  Index size() const { return mass_.size(); }

  Scalar total_mass() const { return mass_.sum(); }

  /// Flat cell index of one state per axis (mixed radix, last axis fastest).
  Index flat_index(std::span<const Index> states) const {
    Index flat = 0;
    for (Index k = 0; k < axis_count(); ++k) flat += states[k] * strides_[k];
    return flat;
  }

  /// Splits a flat cell index back into one state index per axis.
  void unflatten(Index flat, std::span<Index> out) const {
    for (Index k = 0; k < axis_count(); ++k) {
      out[k] = flat / strides_[k];
      flat %= strides_[k];
    }
  }

  /// Human-readable cell description, e.g. "X1=0, X2=1, Y=1".
  std::string cell_label(Index flat) const {
    std::vector<Index> st(axis_count());
    unflatten(flat, st);
    std::string out;
    for (Index k = 0; k < axis_count(); ++k) {
      if (k) out += ", ";
      out += axes_[k].name + "=" + axes_[k].states[st[k]];
    }
    return out;
  }

  bool operator==(const JointTable& other) const {
    return axes_ == other.axes_ && mass_.size() == other.mass_.size() &&
           mass_ == other.mass_;
  }

 private:
  void init() {
    if (axes_.empty()) throw std::invalid_argument("table needs at least one axis");
    for (const auto& ax : axes_) {
      if (ax.name.empty()) throw std::invalid_argument("axis name must be non-empty");
      if (ax.states.empty())
        throw std::invalid_argument("axis '" + ax.name + "' has no states");
      for (size_t a = 0; a < ax.states.size(); ++a)
        for (size_t b = a + 1; b < ax.states.size(); ++b)
          if (ax.states[a] == ax.states[b])
            throw std::invalid_argument("axis '" + ax.name +
                                        "' repeats state '" + ax.states[a] + "'");
    }
    for (size_t a = 0; a < axes_.size(); ++a)
      for (size_t b = a + 1; b < axes_.size(); ++b)
        if (axes_[a].name == axes_[b].name)
          throw std::invalid_argument("duplicate axis name '" + axes_[a].name + "'");

    strides_.assign(axes_.size(), 1);
    Index cells = 1;
    for (Index k = axis_count() - 1; k >= 0; --k) {
      strides_[k] = cells;
      cells *= axes_[k].size();
    }
    if (mass_.size() != cells)
      throw std::invalid_argument("mass has " + std::to_string(mass_.size()) +
                                  " entries but the axes span " +
                                  std::to_string(cells) + " cells");

    for (Index i = 0; i < mass_.size(); ++i) {
      if (mass_[i] < Scalar(0)) {
        if (mass_[i] > Scalar(-kZeroMass)) {
          mass_[i] = Scalar(0);  // rounding dust from upstream arithmetic
        } else {
          throw std::invalid_argument("negative mass at cell (" + cell_label(i) + ")");
        }
      }
    }
    const double sum = static_cast<double>(mass_.sum());
    if (std::abs(sum - 1.0) > kMassSumTolerance)
      throw std::invalid_argument("mass sums to " + detail::format_g(sum));
  }

  std::vector<VariableAxis> axes_;  // target last
  DenseVector<Scalar> mass_;
  std::vector<Index> strides_;
};

using JointTableD = JointTable<double>;

/// Sums the mass over all axes not named in `keep`, preserving axis order.
template <typename Scalar>
JointTable<Scalar> marginal(const JointTable<Scalar>& t,
                            const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("marginal requires at least one axis");
  std::vector<bool> kept(t.axis_count(), false);
  for (const auto& name : keep) kept[t.axis_position(name)] = true;

  std::vector<VariableAxis> axes;
  std::vector<Index> positions;
  for (Index k = 0; k < t.axis_count(); ++k) {
    if (kept[k]) {
      axes.push_back(t.axis(k));
      positions.push_back(k);
    }
  }

  Index cells = 1;
  for (const auto& ax : axes) cells *= ax.size();
  DenseVector<Scalar> mass = DenseVector<Scalar>::Zero(cells);

  std::vector<Index> st(t.axis_count());
  for (Index i = 0; i < t.size(); ++i) {
    t.unflatten(i, st);
    Index flat = 0;
    for (size_t k = 0; k < positions.size(); ++k)
      flat = flat * axes[k].size() + st[positions[k]];
    mass[flat] += t.mass()[i];
  }
  return JointTable<Scalar>(std::move(axes), std::move(mass));
}

/// Distribution over the remaining axes given that `given_axis` is observed
/// in state `given_state`.  The conditioning state must have positive mass.
template <typename Scalar>
JointTable<Scalar> conditional(const JointTable<Scalar>& t,
                               const std::string& given_axis,
                               const std::string& given_state) {
  const Index pos = t.axis_position(given_axis);
  const Index state = t.axis(pos).state_index(given_state);
  if (state < 0)
    throw std::invalid_argument("axis '" + given_axis + "' has no state '" +
                                given_state + "'");
  if (t.axis_count() < 2)
    throw std::invalid_argument("conditioning would leave no axes");

  std::vector<VariableAxis> axes;
  for (Index k = 0; k < t.axis_count(); ++k)
    if (k != pos) axes.push_back(t.axis(k));

  Index cells = 1;
  for (const auto& ax : axes) cells *= ax.size();
  DenseVector<Scalar> mass = DenseVector<Scalar>::Zero(cells);

  Scalar total = 0;
  std::vector<Index> st(t.axis_count());
  for (Index i = 0; i < t.size(); ++i) {
    t.unflatten(i, st);
    if (st[pos] != state) continue;
    total += t.mass()[i];
    Index flat = 0;
    Index a = 0;
    for (Index k = 0; k < t.axis_count(); ++k) {
      if (k == pos) continue;
      flat = flat * axes[a].size() + st[k];
      ++a;
    }
    mass[flat] += t.mass()[i];
  }
  if (static_cast<double>(total) < kZeroMass)
    throw std::invalid_argument("cannot condition on zero-probability state '" +
                                given_state + "' of axis '" + given_axis + "'");
  mass /= total;
  return JointTable<Scalar>(std::move(axes), std::move(mass));
}

/// True when both tables describe the same distribution: equal axis names and
/// state sets (order may differ) and cell masses equal within `tol`.
template <typename Scalar>
bool same_distribution(const JointTable<Scalar>& a, const JointTable<Scalar>& b,
                       double tol = 0.0) {
  if (a.axis_count() != b.axis_count()) return false;
  std::vector<std::vector<Index>> remap(a.axis_count());
  for (Index k = 0; k < a.axis_count(); ++k) {
    const auto& ax = a.axis(k);
    const auto& bx = b.axis(k);
    if (ax.name != bx.name || ax.size() != bx.size()) return false;
    remap[k].resize(ax.size());
    for (Index s = 0; s < ax.size(); ++s) {
      Index pos = bx.state_index(ax.states[s]);
      if (pos < 0) return false;
      remap[k][s] = pos;
    }
  }
  std::vector<Index> st(a.axis_count()), bt(a.axis_count());
  for (Index i = 0; i < a.size(); ++i) {
    a.unflatten(i, st);
    for (Index k = 0; k < a.axis_count(); ++k) bt[k] = remap[k][st[k]];
    const double diff =
        std::abs(static_cast<double>(a.mass()[i] - b.mass()[b.flat_index(bt)]));
    if (diff > tol) return false;
  }
  return true;
}

}  // namespace synergy
