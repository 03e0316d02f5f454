#include "doctest.h"

#include <array>

#include "synergy/examples.hpp"
#include "synergy/union_info.hpp"

using namespace synergy;

namespace {

// Two fair bits and a target wired to their AND, as raw mass.
const double kAndWhole = 0.8112781244591328;   // I(X1,X2 : Y)
const double kAndSingle = 0.31127812445913283; // I(X1 : Y) = I(X2 : Y)
const double kAndProductBound = 0.5408520829727551;

OptimizerConfig quick() {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  return cfg;
}

}  // namespace

TEST_CASE("product-of-conditionals bound on a redundant table is the table") {
  const JointTableD rdn = build_example(ExampleId::Rdn);
  // Given y the predictors are deterministic, so the conditional product
  // reproduces the joint.
  CHECK(same_distribution(analytic_upper_bound(rdn), rdn, 1e-15));
}

TEST_CASE("product-of-conditionals bound for the AND gate") {
  const JointTableD and_table = build_example(ExampleId::And);
  const JointTableD ub = analytic_upper_bound(and_table);

  auto mass_at = [&](Index x1, Index x2, Index y) {
    const std::array<Index, 3> cell{x1, x2, y};
    return ub.mass()[ub.flat_index(cell)];
  };
  CHECK(mass_at(0, 0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(mass_at(0, 1, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(mass_at(1, 0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(mass_at(1, 1, 0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(mass_at(1, 1, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mass_at(0, 0, 1) == 0.0);
  CHECK(mass_at(0, 1, 1) == 0.0);
  CHECK(mass_at(1, 0, 1) == 0.0);

  // The bound keeps every (predictor, target) marginal of the input.
  for (const char* name : {"X1", "X2"}) {
    const auto pair = marginal(ub, {name, "Y"});
    CHECK(same_distribution(pair, marginal(and_table, {name, "Y"}), 1e-12));
  }
  CHECK(coalition_target_mi(ub.mass(), 2) ==
        doctest::Approx(kAndProductBound).epsilon(1e-12));
}

TEST_CASE("minimized union information on the corpus") {
  auto best = [&](ExampleId id) {
    const UnionInfoResult r = minimize_union_information(build_example(id), quick());
    CHECK(r.converged);
    CHECK(r.best_value <= r.upper_bound_value + 1e-9);
    return double(r.best_value);
  };
  CHECK(best(ExampleId::Xor) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(best(ExampleId::Rdn) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(best(ExampleId::Unq) == doctest::Approx(2.0).epsilon(1e-9));
  // AND has a one-parameter feasible family; the optimum sits at its edge,
  // strictly below the conditional-product value.
  CHECK(best(ExampleId::And) == doctest::Approx(kAndSingle).epsilon(1e-6));
}

TEST_CASE("minimizer output is feasible and reproducible") {
  const JointTableD t = build_example(ExampleId::And);
  const UnionInfoResult a = minimize_union_information(t, quick());
  const UnionInfoResult b = minimize_union_information(t, quick());

  CHECK(a.best_value == b.best_value);           // bitwise determinism
  CHECK(a.best_table == b.best_table);
  CHECK(a.restarts_used == b.restarts_used);

  for (const char* name : {"X1", "X2"}) {
    const auto pair = marginal(a.best_table, {name, "Y"});
    CHECK(same_distribution(pair, marginal(t, {name, "Y"}), 1e-8));
  }
}

TEST_CASE("single predictor skips optimization") {
  const JointTableD pair = marginal(build_example(ExampleId::And), {"X1", "Y"});
  const UnionInfoResult r = minimize_union_information(pair);
  CHECK(r.restarts_used == 0);
  CHECK(r.converged);
  // The one pairwise marginal pins the joint, so the answer is exact.
  CHECK(r.best_value == mutual_information(pair, {"X1"}, {"Y"}));
}

TEST_CASE("synergy interval on the corpus") {
  const SvkInterval rx = s_vk(build_example(ExampleId::RdnXor), quick());
  CHECK(rx.best == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rx.upper == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rx.converged);

  const SvkInterval xl = s_vk(build_example(ExampleId::XorLoses), quick());
  CHECK(xl.best == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(xl.upper == doctest::Approx(0.0).epsilon(1e-9));

  const SvkInterval ad = s_vk(build_example(ExampleId::And), quick());
  CHECK(ad.lower == doctest::Approx(kAndWhole - kAndProductBound).epsilon(1e-9));
  CHECK(ad.best == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(ad.upper == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ad.lower <= ad.best);
  CHECK(ad.best <= ad.upper + 1e-9);
}

TEST_CASE("duplicate predictors keep the deduplicated bound") {
  // A verbatim copy of a predictor adds no information, so the analytic bound
  // must not loosen; the naive independent product would.
  const UnionInfoResult dup =
      minimize_union_information(build_example(ExampleId::AndDuplicate), quick());
  CHECK(dup.upper_bound_value == doctest::Approx(kAndProductBound).epsilon(1e-9));
  CHECK(dup.best_value == doctest::Approx(kAndSingle).epsilon(1e-6));

  const SvkInterval plain = s_vk(build_example(ExampleId::And), quick());
  const SvkInterval doubled = s_vk(build_example(ExampleId::AndDuplicate), quick());
  CHECK(std::abs(double(plain.best - doubled.best)) < 1e-6);
}

TEST_CASE("intersection information") {
  CHECK(intersection_information(build_example(ExampleId::Rdn), quick()) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(intersection_information(build_example(ExampleId::Unq), quick()) ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK(intersection_information(build_example(ExampleId::And), quick()) ==
        doctest::Approx(kAndSingle).epsilon(1e-5));

  // Four predictors would need fifteen minimizations; refused.
  DenseVector<double> mass = DenseVector<double>::Constant(32, 1.0 / 32.0);
  const JointTableD wide({{"A", {"0", "1"}},
                          {"B", {"0", "1"}},
                          {"C", {"0", "1"}},
                          {"D", {"0", "1"}},
                          {"Y", {"0", "1"}}},
                         std::move(mass));
  CHECK_THROWS_WITH_AS(intersection_information(wide),
                       doctest::Contains("capped at three"), std::invalid_argument);
}

TEST_CASE("two-predictor decomposition") {
  auto check_parts = [&](ExampleId id, double red, double u1, double u2, double syn) {
    const JointTableD t = build_example(id);
    const Pid2 p = pid2(t, quick());
    CHECK(p.redundancy == doctest::Approx(red).epsilon(1e-6));
    CHECK(p.unique1 == doctest::Approx(u1).epsilon(1e-6));
    CHECK(p.unique2 == doctest::Approx(u2).epsilon(1e-6));
    CHECK(p.synergy == doctest::Approx(syn).epsilon(1e-6));

    // The parts reassemble the mutual informations they came from.
    const double i1 = mutual_information(t, {t.axis(0).name}, {"Y"});
    const double i2 = mutual_information(t, {t.axis(1).name}, {"Y"});
    const double iw = mutual_information(t, t.predictor_names(), {"Y"});
    CHECK(p.redundancy + p.unique1 == doctest::Approx(i1).epsilon(1e-9));
    CHECK(p.redundancy + p.unique2 == doctest::Approx(i2).epsilon(1e-9));
    CHECK(p.redundancy + p.unique1 + p.unique2 + p.synergy ==
          doctest::Approx(iw).epsilon(1e-9));
  };
  check_parts(ExampleId::Rdn, 1, 0, 0, 0);
  check_parts(ExampleId::Unq, 0, 1, 1, 0);
  check_parts(ExampleId::RdnXor, 1, 0, 0, 1);
  check_parts(ExampleId::Xor, 0, 0, 0, 1);

  CHECK_THROWS_AS(pid2(build_example(ExampleId::XorMultiCoal)), std::invalid_argument);
}
