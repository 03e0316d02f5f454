#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synergy/joint_table.hpp"

namespace synergy {

namespace detail {

/// Kahan compensated accumulator; the measure sums mix magnitudes freely.
class CompensatedSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double xlog2x(double p) {
  return p < kZeroMass ? 0.0 : p * std::log2(p);
}

inline double ensure_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw std::logic_error(std::string(what) + " produced a non-finite value");
  return v;
}

}  // namespace detail

/// Shannon entropy H of the marginal over `axes`:  -sum p log2 p.
template <typename Scalar>
ScalarBits entropy(const JointTable<Scalar>& t,
                   const std::vector<std::string>& axes) {
  const auto m = marginal(t, axes);
  detail::CompensatedSum h;
  for (Index i = 0; i < m.size(); ++i)
    h.add(-detail::xlog2x(static_cast<double>(m.mass()[i])));
  return detail::ensure_finite(h.value(), "entropy");
}

/// Mutual information I(A:B) = H(A) + H(B) - H(A,B) between two disjoint
/// axis groups of the same table.
template <typename Scalar>
ScalarBits mutual_information(const JointTable<Scalar>& t,
                              const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("mutual information needs two non-empty axis groups");
  for (const auto& name : a)
    for (const auto& other : b)
      if (name == other)
        throw std::invalid_argument("axis groups overlap on '" + name + "'");
  std::vector<std::string> both = a;
  both.insert(both.end(), b.begin(), b.end());
  return detail::ensure_finite(
      entropy(t, a) + entropy(t, b) - entropy(t, both), "mutual information");
}

/// Relative entropy D(p || q) = sum p log2(p/q) for tables with identical
/// axis structure.  Every q-zero must also be a p-zero.
template <typename Scalar>
ScalarBits kl_divergence(const JointTable<Scalar>& p, const JointTable<Scalar>& q) {
  if (p.axes() != q.axes())
    throw std::invalid_argument("divergence requires identical axis structure");
  detail::CompensatedSum d;
  for (Index i = 0; i < p.size(); ++i) {
    const double pi = static_cast<double>(p.mass()[i]);
    const double qi = static_cast<double>(q.mass()[i]);
    if (qi < kZeroMass) {
      if (pi >= kZeroMass)
        throw std::invalid_argument(
            "absolute continuity violated at cell (" + p.cell_label(i) +
            "): p=" + detail::format_g(pi) + " but q=0");
      continue;
    }
    if (pi < kZeroMass) continue;
    d.add(pi * std::log2(pi / qi));
  }
  return detail::ensure_finite(d.value(), "kl divergence");
}

/// How much observing target state `y_state` shifts the belief about one
/// predictor:  D( Pr(X_i | y) || Pr(X_i) ).  Its expectation over the target
/// states is I(X_i : target).
template <typename Scalar>
ScalarBits specific_surprise(const JointTable<Scalar>& t,
                             const std::string& predictor,
                             const std::string& y_state) {
  const auto given = conditional(t, t.target_axis().name, y_state);
  return kl_divergence(marginal(given, {predictor}), marginal(t, {predictor}));
}

/// Total correlation TC(axes) = sum_i H(X_i) - H(X_1,...,X_k); with
/// `conditioned_on` set, every entropy term is conditioned on that axis.
template <typename Scalar>
ScalarBits total_correlation(const JointTable<Scalar>& t,
                             const std::vector<std::string>& axes,
                             const std::optional<std::string>& conditioned_on = {}) {
  if (axes.size() < 2)
    throw std::invalid_argument("total correlation needs at least two axes");
  if (conditioned_on) {
    for (const auto& name : axes)
      if (name == *conditioned_on)
        throw std::invalid_argument("conditioning axis '" + name +
                                    "' is among the correlated axes");
  }
  detail::CompensatedSum tc;
  if (!conditioned_on) {
    for (const auto& name : axes) tc.add(entropy(t, {name}));
    tc.add(-entropy(t, axes));
  } else {
    // H(A|C) = H(A,C) - H(C)
    const double hc = entropy(t, {*conditioned_on});
    for (const auto& name : axes) {
      tc.add(entropy(t, {name, *conditioned_on}) - hc);
    }
    std::vector<std::string> with_c = axes;
    with_c.push_back(*conditioned_on);
    tc.add(-(entropy(t, with_c) - hc));
  }
  return detail::ensure_finite(tc.value(), "total correlation");
}

}  // namespace synergy
