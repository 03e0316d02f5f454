#include <cmath>

#include "doctest.h"

#include "synergy/classic_measures.hpp"
#include "synergy/examples.hpp"

using namespace synergy;

TEST_CASE("s_max across the corpus") {
  CHECK(s_max(build_example(ExampleId::Rdn)) == doctest::Approx(0.0));
  CHECK(s_max(build_example(ExampleId::Unq)) == doctest::Approx(1.0));
  CHECK(s_max(build_example(ExampleId::Xor)) == doctest::Approx(1.0));
  CHECK(s_max(build_example(ExampleId::And)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s_max(build_example(ExampleId::RdnUnqXor)) == doctest::Approx(2.0));
  CHECK(s_max(build_example(ExampleId::XorLoses)) == doctest::Approx(0.0));
}

TEST_CASE("whole-minus-sum is signed") {
  CHECK(wms(build_example(ExampleId::Rdn)) == doctest::Approx(-1.0));
  CHECK(wms(build_example(ExampleId::Xor)) == doctest::Approx(1.0));
  CHECK(wms(build_example(ExampleId::And)) ==
        doctest::Approx(0.18872187554086717).epsilon(1e-12));
  CHECK(wms(build_example(ExampleId::AndDuplicate)) ==
        doctest::Approx(-0.12255624891826566).epsilon(1e-9));

  const auto [direct, via_tc] = wms_forms(build_example(ExampleId::RdnXor));
  CHECK(direct == doctest::Approx(via_tc).epsilon(1e-12));
  CHECK(direct == doctest::Approx(0.0));
}

TEST_CASE("correlational importance") {
  CHECK(delta_i(build_example(ExampleId::Rdn)) == doctest::Approx(0.0));
  CHECK(delta_i(build_example(ExampleId::Xor)) == doctest::Approx(1.0));
  // 1/4 * log2(4/3): only the (1,1) input has an uncertain surrogate posterior
  CHECK(delta_i(build_example(ExampleId::And)) ==
        doctest::Approx(std::log2(4.0 / 3.0) / 4).epsilon(1e-12));
  // 1/4 * log2(10/9), the duplicated analogue
  CHECK(delta_i(build_example(ExampleId::AndDuplicate)) ==
        doctest::Approx(std::log2(10.0 / 9.0) / 4).epsilon(1e-12));

  const auto [direct, via_tc] = delta_i_forms(build_example(ExampleId::XorMultiCoal));
  CHECK(direct == doctest::Approx(via_tc).epsilon(1e-9));
}

TEST_CASE("the two evaluation routes agree on a lopsided table") {
  // deliberately non-uniform, non-deterministic so neither route simplifies
  DenseVector<double> mass(12);
  mass << 0.05, 0.10, 0.02, 0.18, 0.07, 0.08, 0.16, 0.04, 0.09, 0.01, 0.14, 0.06;
  const JointTableD t({{"A", {"0", "1"}}, {"B", {"0", "1", "2"}}}, {"Y", {"0", "1"}},
                      std::move(mass));

  const auto [wd, wt] = wms_forms(t);
  CHECK(wd == doctest::Approx(wt).epsilon(1e-12));
  const auto [dd, dt] = delta_i_forms(t);
  CHECK(dd == doctest::Approx(dt).epsilon(1e-12));
  CHECK(delta_i(t) >= 0.0);
}

TEST_CASE("classic_report bundles every quantity consistently") {
  const ClassicReport r = classic_report(build_example(ExampleId::And));
  CHECK(r.i_whole == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  REQUIRE(r.i_singletons.size() == 2);
  CHECK(r.i_singletons[0] == doctest::Approx(0.31127812445913283).epsilon(1e-12));
  CHECK(r.i_singletons[1] == doctest::Approx(r.i_singletons[0]).epsilon(1e-12));
  CHECK(r.i_max == doctest::Approx(r.i_singletons[0]).epsilon(1e-12));
  CHECK(r.s_max == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.wms == doctest::Approx(r.i_whole - 2 * r.i_singletons[0]).epsilon(1e-12));

  const JointTableD single({{"X", {"0", "1"}}}, {"Y", {"0", "1"}},
                           DenseVector<double>::Constant(4, 0.25));
  CHECK_THROWS_AS(classic_report(single), std::invalid_argument);
}
