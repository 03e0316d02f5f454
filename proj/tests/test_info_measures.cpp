#include "doctest.h"

#include "synergy/examples.hpp"
#include "synergy/info_measures.hpp"

using namespace synergy;

namespace {

JointTableD one_axis(std::initializer_list<double> probs) {
  DenseVector<double> mass(Index(probs.size()));
  Index i = 0;
  std::vector<std::string> states;
  for (const double p : probs) {
    mass[i] = p;
    states.push_back(std::to_string(i));
    ++i;
  }
  return JointTableD({{"Y", states}}, std::move(mass));
}

}  // namespace

TEST_CASE("entropy of simple marginals") {
  CHECK(entropy(one_axis({0.25, 0.25, 0.25, 0.25}), {"Y"}) == doctest::Approx(2.0));
  CHECK(entropy(one_axis({0.5, 0.25, 0.125, 0.125}), {"Y"}) == doctest::Approx(1.75));
  CHECK(entropy(one_axis({1.0, 0.0}), {"Y"}) == 0.0);  // 0 log 0 contributes nothing

  const JointTableD t = build_example(ExampleId::And);
  CHECK(entropy(t, {"Y"}) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK(entropy(t, {"X1", "X2"}) == doctest::Approx(2.0));
}

TEST_CASE("mutual information on corpus tables") {
  const JointTableD x = build_example(ExampleId::Xor);
  CHECK(mutual_information(x, {"X1", "X2"}, {"Y"}) == doctest::Approx(1.0));
  CHECK(mutual_information(x, {"X1"}, {"Y"}) == doctest::Approx(0.0));

  const JointTableD a = build_example(ExampleId::And);
  CHECK(mutual_information(a, {"X1"}, {"Y"}) ==
        doctest::Approx(0.31127812445913283).epsilon(1e-12));
  CHECK(mutual_information(a, {"X1"}, {"X2"}) == doctest::Approx(0.0));  // independent inputs

  CHECK_THROWS_WITH_AS(mutual_information(x, {"X1"}, {"X1"}), "axis groups overlap on 'X1'",
                       std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(x, {}, {"Y"}), std::invalid_argument);
}

TEST_CASE("kl divergence and absolute continuity") {
  const JointTableD p = one_axis({0.25, 0.25, 0.25, 0.25});
  const JointTableD q = one_axis({0.5, 0.25, 0.125, 0.125});
  CHECK(kl_divergence(p, q) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(kl_divergence(p, p) == 0.0);

  const JointTableD gappy = one_axis({0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_WITH_AS(kl_divergence(p, gappy),
                       "absolute continuity violated at cell (Y=2): p=0.25 but q=0",
                       std::invalid_argument);
  CHECK(kl_divergence(gappy, p) == doctest::Approx(1.0));

  const JointTableD two = JointTableD({{"Z", {"0", "1"}}},
                                      (DenseVector<double>(2) << 0.5, 0.5).finished());
  CHECK_THROWS_AS(kl_divergence(p, two), std::invalid_argument);
}

TEST_CASE("specific surprise averages to the singleton information") {
  const JointTableD t = build_example(ExampleId::And);
  const double ss0 = specific_surprise(t, "X1", "0");
  const double ss1 = specific_surprise(t, "X1", "1");
  CHECK(ss1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ss0 == doctest::Approx(0.08170416594551039).epsilon(1e-9));
  CHECK(0.75 * ss0 + 0.25 * ss1 ==
        doctest::Approx(mutual_information(t, {"X1"}, {"Y"})).epsilon(1e-12));
}

TEST_CASE("total correlation, plain and conditioned") {
  const JointTableD a = build_example(ExampleId::And);
  CHECK(total_correlation(a, {"X1", "X2"}) == doctest::Approx(0.0));  // independent inputs
  CHECK(total_correlation(a, {"X1", "X2"}, "Y") ==
        doctest::Approx(0.18872187554086717).epsilon(1e-9));

  const JointTableD r = build_example(ExampleId::Rdn);
  CHECK(total_correlation(r, {"X1", "X2"}) == doctest::Approx(1.0));   // fully coupled
  CHECK(total_correlation(r, {"X1", "X2"}, "Y") == doctest::Approx(0.0));
}
