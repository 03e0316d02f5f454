#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "synergy/info_measures.hpp"
#include "synergy/joint_table.hpp"

namespace synergy {

/// The whole-coalition mutual information together with the three
/// sum/max/divergence style synergy measures computed from one table.
struct ClassicReport {
  ScalarBits i_whole = 0;                 // I(X_1...X_n : Y)
  std::vector<ScalarBits> i_singletons;   // I(X_i : Y)
  ScalarBits i_max = 0;                   // max_i I(X_i : Y)
  ScalarBits s_max = 0;
  ScalarBits wms = 0;                     // signed; negative flags redundancy
  ScalarBits delta_i = 0;
};

namespace detail {

template <typename Scalar>
void require_predictors(const JointTable<Scalar>& t, Index minimum) {
  if (t.predictor_count() < minimum)
    throw std::invalid_argument("measure needs at least " +
                                std::to_string(minimum) + " predictors");
}

/// Per-cell weights of the conditional-independence surrogate
/// q(x,y) = Pr(y) * prod_i Pr(x_i|y), plus its x-marginal Z(x) = sum_y q(x,y).
/// q preserves every (X_i, Y) pairwise marginal of the input.
template <typename Scalar>
void conditional_product_weights(const JointTable<Scalar>& t,
                                 DenseVector<double>& q, DenseVector<double>& z) {
  const Index n = t.predictor_count();
  const Index ny = t.target_axis().size();
  const Index cells = t.size();

  DenseVector<double> py = DenseVector<double>::Zero(ny);
  for (Index i = 0; i < cells; ++i) py[i % ny] += static_cast<double>(t.mass()[i]);

  // cond[i](xi, y) = Pr(x_i, y) / Pr(y)
  std::vector<Eigen::MatrixXd> cond(n);
  std::vector<Index> st(t.axis_count());
  for (Index k = 0; k < n; ++k)
    cond[k] = Eigen::MatrixXd::Zero(t.axis(k).size(), ny);
  for (Index i = 0; i < cells; ++i) {
    t.unflatten(i, st);
    const double m = static_cast<double>(t.mass()[i]);
    for (Index k = 0; k < n; ++k) cond[k](st[k], st.back()) += m;
  }
  for (Index k = 0; k < n; ++k)
    for (Index y = 0; y < ny; ++y)
      if (py[y] >= kZeroMass) cond[k].col(y) /= py[y];

  q = DenseVector<double>::Zero(cells);
  z = DenseVector<double>::Zero(cells / ny);
  std::vector<CompensatedSum> zsum(cells / ny);
  for (Index i = 0; i < cells; ++i) {
    t.unflatten(i, st);
    const Index y = st.back();
    if (py[y] < kZeroMass) continue;
    double w = py[y];
    for (Index k = 0; k < n; ++k) w *= cond[k](st[k], y);
    q[i] = w;
    zsum[i / ny].add(w);
  }
  for (Index x = 0; x < z.size(); ++x) z[x] = zsum[x].value();
}

}  // namespace detail

/// Coalition information minus the expected per-target-state maximum of the
/// single-predictor specific surprises:
///   I(X_1...X_n : Y) - sum_y Pr(y) max_i D( Pr(X_i|y) || Pr(X_i) ).
template <typename Scalar>
ScalarBits s_max(const JointTable<Scalar>& t) {
  detail::require_predictors(t, 2);
  const auto predictors = t.predictor_names();
  const std::vector<std::string> target{t.target_axis().name};
  const ScalarBits i_whole = mutual_information(t, predictors, target);

  const auto py = marginal(t, target);
  detail::CompensatedSum expected_max;
  for (Index y = 0; y < py.size(); ++y) {
    const double w = static_cast<double>(py.mass()[y]);
    if (w < kZeroMass) continue;
    double best = 0.0;
    for (const auto& name : predictors)
      best = std::max(best,
                      specific_surprise(t, name, py.target_axis().states[y]));
    expected_max.add(w * best);
  }
  return detail::ensure_finite(i_whole - expected_max.value(), "s_max");
}

/// Both evaluations of the whole-minus-sum measure: directly as
/// I(X_1...X_n : Y) - sum_i I(X_i : Y), and as the difference of the
/// conditional and unconditional total correlations among the predictors.
template <typename Scalar>
std::pair<ScalarBits, ScalarBits> wms_forms(const JointTable<Scalar>& t) {
  detail::require_predictors(t, 2);
  const auto predictors = t.predictor_names();
  const std::vector<std::string> target{t.target_axis().name};

  detail::CompensatedSum direct;
  direct.add(mutual_information(t, predictors, target));
  for (const auto& name : predictors)
    direct.add(-mutual_information(t, {name}, target));

  const ScalarBits via_tc = total_correlation(t, predictors, target.front()) -
                            total_correlation(t, predictors);
  return {direct.value(), via_tc};
}

/// Whole-minus-sum synergy (signed).  The two forms are cross-checked; the
/// direct difference of mutual informations is returned.
template <typename Scalar>
ScalarBits wms(const JointTable<Scalar>& t) {
  const auto [direct, via_tc] = wms_forms(t);
  if (std::abs(direct - via_tc) > 1e-9)
    throw std::logic_error("whole-minus-sum evaluations disagree: " +
                           detail::format_g(direct) + " vs " +
                           detail::format_g(via_tc));
  return direct;
}

/// Both evaluations of correlational importance: the posterior divergence
///   sum_{x,y} Pr(x,y) log2( Pr(y|x) / q(y|x) )
/// against the conditional-independence posterior q(y|x) = q(x,y)/Z(x), and
/// the decomposition TC(X_1;...;X_n | Y) - D( Pr(X) || Z ).
template <typename Scalar>
std::pair<ScalarBits, ScalarBits> delta_i_forms(const JointTable<Scalar>& t) {
  detail::require_predictors(t, 2);
  const Index ny = t.target_axis().size();

  DenseVector<double> q, z;
  detail::conditional_product_weights(t, q, z);

  DenseVector<double> px = DenseVector<double>::Zero(t.size() / ny);
  for (Index i = 0; i < t.size(); ++i)
    px[i / ny] += static_cast<double>(t.mass()[i]);

  detail::CompensatedSum direct;
  for (Index i = 0; i < t.size(); ++i) {
    const double m = static_cast<double>(t.mass()[i]);
    if (m < kZeroMass) continue;
    const Index x = i / ny;
    direct.add(m * std::log2((m / px[x]) / (q[i] / z[x])));
  }

  std::vector<VariableAxis> paxes(t.axes().begin(), t.axes().end() - 1);
  const JointTable<double> z_table(paxes, DenseVector<double>(z));
  std::vector<VariableAxis> paxes_copy = paxes;
  const JointTable<double> px_table(std::move(paxes_copy), DenseVector<double>(px));
  const ScalarBits via_tc =
      total_correlation(t, t.predictor_names(), t.target_axis().name) -
      kl_divergence(px_table, z_table);

  return {detail::ensure_finite(direct.value(), "delta_i"), via_tc};
}

/// Correlational importance: divergence between the true posterior over the
/// target and the posterior of the conditional-independence surrogate.  The
/// two forms are cross-checked; the direct posterior divergence is returned.
template <typename Scalar>
ScalarBits delta_i(const JointTable<Scalar>& t) {
  const auto [direct, via_tc] = delta_i_forms(t);
  if (std::abs(direct - via_tc) > 1e-9)
    throw std::logic_error("correlational-importance evaluations disagree: " +
                           detail::format_g(direct) + " vs " +
                           detail::format_g(via_tc));
  return direct;
}

/// All classic quantities for one table.
template <typename Scalar>
ClassicReport classic_report(const JointTable<Scalar>& t) {
  detail::require_predictors(t, 2);
  ClassicReport r;
  const auto predictors = t.predictor_names();
  const std::vector<std::string> target{t.target_axis().name};
  r.i_whole = mutual_information(t, predictors, target);
  for (const auto& name : predictors)
    r.i_singletons.push_back(mutual_information(t, {name}, target));
  r.i_max = *std::max_element(r.i_singletons.begin(), r.i_singletons.end());
  r.s_max = s_max(t);
  r.wms = wms(t);
  r.delta_i = delta_i(t);
  return r;
}

}  // namespace synergy
