#include <doctest.h>

#include <vector>

#include "cpaudit/stats.hpp"

using namespace cpaudit;

// Reference interval values were frozen from an independent implementation
// of the exact binomial interval (incomplete beta inversion).
TEST_CASE("clopper-pearson matches frozen references") {
  const auto ci1 = clopper_pearson(2, 10, 0.95);
  CHECK(ci1.lo == doctest::Approx(0.025210726327).epsilon(1e-9));
  CHECK(ci1.hi == doctest::Approx(0.556095462308).epsilon(1e-9));

  const auto ci2 = clopper_pearson(45, 50);
  CHECK(ci2.lo == doctest::Approx(0.781864633566).epsilon(1e-9));
  CHECK(ci2.hi == doctest::Approx(0.966724906411).epsilon(1e-9));

  const auto ci3 = clopper_pearson(90, 100);
  CHECK(ci3.lo == doctest::Approx(0.823777402260).epsilon(1e-9));
  CHECK(ci3.hi == doctest::Approx(0.950995310779).epsilon(1e-9));
}

TEST_CASE("clopper-pearson boundary cases") {
  const auto zero = clopper_pearson(0, 7);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == doctest::Approx(0.409616397225).epsilon(1e-9));

  const auto all = clopper_pearson(7, 7);
  CHECK(all.lo == doctest::Approx(0.590383602775).epsilon(1e-9));
  CHECK(all.hi == 1.0);

  const auto one = clopper_pearson(1, 1);
  CHECK(one.lo == doctest::Approx(0.025).epsilon(1e-9));
  CHECK(one.hi == 1.0);
}

TEST_CASE("clopper-pearson lower bound matches frozen references") {
  CHECK(clopper_pearson_lower(45, 50, 0.1) ==
        doctest::Approx(0.822381872383).epsilon(1e-9));
  CHECK(clopper_pearson_lower(90, 100, 0.05) ==
        doctest::Approx(0.836282376724).epsilon(1e-9));
  CHECK(clopper_pearson_lower(0, 10, 0.05) == 0.0);
}

TEST_CASE("clopper-pearson rejects bad inputs") {
  CHECK_THROWS_AS(clopper_pearson(1, 0), ValidationError);
  CHECK_THROWS_AS(clopper_pearson(5, 4), ValidationError);
  CHECK_THROWS_AS(clopper_pearson_lower(1, 0, 0.1), ValidationError);
}

TEST_CASE("moment helpers") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(xs) == doctest::Approx(2.5));
  // Sample variance of 1..4 is 5/3.
  CHECK(sample_sd(xs) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(mc_standard_error(xs) == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(mean({}), ValidationError);
  CHECK_THROWS_AS(sample_sd({1.0}), ValidationError);
}
