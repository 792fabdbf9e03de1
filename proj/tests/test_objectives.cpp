#include <cmath>
#include <random>

#include "doctest.h"
#include "ofl/objectives.hpp"
#include "test_util.hpp"

using namespace ofl;
using test_util::random_profile;
using test_util::u01;

TEST_SUITE("objectives") {

TEST_CASE("names parse and round-trip") {
  CHECK(ObjectiveSpec::parse("su:2") == ObjectiveSpec::su(2.0));
  CHECK(ObjectiveSpec::parse("su:0.5") == ObjectiveSpec::su(0.5));
  CHECK(ObjectiveSpec::parse("su:max") == ObjectiveSpec::su_max());
  CHECK(ObjectiveSpec::parse("su:inf") == ObjectiveSpec::su_max());
  CHECK(ObjectiveSpec::parse("su:min") == ObjectiveSpec::su_min());
  CHECK(ObjectiveSpec::parse("su:geomean") == ObjectiveSpec::su_geomean());
  CHECK(ObjectiveSpec::parse("sc:1") == ObjectiveSpec::sc(1.0));
  CHECK(ObjectiveSpec::parse("sc:max") == ObjectiveSpec::sc_max());

  CHECK(ObjectiveSpec::su(0.5).name() == "su:0.5");
  CHECK(ObjectiveSpec::sc_max().name() == "sc:max");
  for (const char* name :
       {"su:2", "su:max", "su:min", "su:geomean", "sc:1", "sc:max"}) {
    CHECK(ObjectiveSpec::parse(name).name() == name);
  }

  CHECK_THROWS_AS(ObjectiveSpec::parse("su:0"), ConfigError);
  CHECK_THROWS_AS(ObjectiveSpec::parse("su:-1"), ConfigError);
  CHECK_THROWS_AS(ObjectiveSpec::parse("sc:0.5"), ConfigError);
  CHECK_THROWS_AS(ObjectiveSpec::parse("sc:min"), ConfigError);
  CHECK_THROWS_AS(ObjectiveSpec::parse("xx:1"), ConfigError);
  CHECK_THROWS_AS(ObjectiveSpec::su(1e7), ConfigError);
}

TEST_CASE("point evaluation across the objective families") {
  const Profile x = Profile::make({0.2, 0.8});
  CHECK(std::abs(eval_at_point(ObjectiveSpec::su(1.0), x, 0.5) - 0.6) <=
        1e-15);
  CHECK(std::abs(eval_at_point(ObjectiveSpec::su(2.0), x, 0.5) -
                 std::sqrt(0.18)) <= 1e-15);
  CHECK(std::abs(eval_at_point(ObjectiveSpec::su_max(), x, 0.5) - 0.3) <=
        1e-15);
  CHECK(std::abs(eval_at_point(ObjectiveSpec::su_min(), x, 0.5) - 0.3) <=
        1e-15);
  CHECK(std::abs(eval_at_point(ObjectiveSpec::su_geomean(), x, 0.5) - 0.3) <=
        1e-15);
  CHECK(std::abs(eval_at_point(ObjectiveSpec::sc(1.0), x, 0.5) - 1.4) <=
        1e-15);
  CHECK(std::abs(eval_at_point(ObjectiveSpec::sc_max(), x, 0.5) - 0.7) <=
        1e-15);

  // An agent at the facility zeroes the geometric mean.
  CHECK(eval_at_point(ObjectiveSpec::su_geomean(), Profile::make({0.5, 0.9}),
                      0.5) == 0.0);
}

TEST_CASE("kernel and root are consistent") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const Profile x = random_profile(rng, 1 + static_cast<int>(rng() % 5));
    const double y = u01(rng);
    for (const ObjectiveSpec& spec :
         {ObjectiveSpec::su(0.5), ObjectiveSpec::su(1.0),
          ObjectiveSpec::su(3.0), ObjectiveSpec::su_max(),
          ObjectiveSpec::su_min(), ObjectiveSpec::su_geomean(),
          ObjectiveSpec::sc(2.0), ObjectiveSpec::sc_max()}) {
      const double direct = eval_at_point(spec, x, y);
      const double rooted =
          from_kernel(spec, kernel_at(spec, x.span(), y), x.n());
      CHECK(std::abs(direct - rooted) <= 1e-12);
    }
  }
}

TEST_CASE("expected kernels are exact for finite lotteries") {
  const Profile x = Profile::make({0.5, 1.0});
  const auto half = FacilityDistribution::endpoint_lottery(0.5);
  // 0.5 * (0.5 + 1) + 0.5 * (0.5 + 0) = 1.
  CHECK(std::abs(expected_kernel(ObjectiveSpec::su(1.0), x.span(), half) -
                 1.0) <= 1e-15);
  // max terms: 0.5 * 1 + 0.5 * 0.5 = 0.75.
  CHECK(std::abs(expected_kernel(ObjectiveSpec::su_max(), x.span(), half) -
                 0.75) <= 1e-15);
}

TEST_CASE("uniform-lottery kernels match hand integrals") {
  const auto uni = FacilityDistribution::uniform_unit();

  // sum of (y - x_i)^2 integrates to sum of [x^3 + (1-x)^3]/3.
  const Profile a = Profile::make({0.3, 0.7});
  CHECK(std::abs(expected_kernel(ObjectiveSpec::su(2.0), a.span(), uni) -
                 37.0 / 150.0) <= 1e-9);

  // sum of (1 - |y - x_i|)^2 integrates to 11/12 on (0.2, 0.9).
  const Profile b = Profile::make({0.2, 0.9});
  CHECK(std::abs(expected_kernel(ObjectiveSpec::sc(2.0), b.span(), uni) -
                 11.0 / 12.0) <= 1e-9);

  // Nearest-agent distance closed form: x1^2/2 + gap^2/4 + (1-xn)^2/2.
  CHECK(std::abs(expected_kernel(ObjectiveSpec::su_min(), a.span(), uni) -
                 0.13) <= 1e-12);
}

TEST_CASE("conventions: defaults and the p=1 coincidence") {
  CHECK(default_convention(ObjectiveSpec::su(2.0)) ==
        Convention::ExpectedAggregate);
  CHECK(default_convention(ObjectiveSpec::su_geomean()) ==
        Convention::AggregateOfExpectations);
  CHECK(convention_name(Convention::ExpectedAggregate) ==
        "expected-aggregate");
  CHECK(convention_name(Convention::AggregateOfExpectations) ==
        "aggregate-of-expectations");

  // The uniform lottery on a duplicated location: per-agent closed form.
  const Profile x = Profile::make({0.75, 0.75});
  const ObjectiveValue v = eval_default(ObjectiveSpec::su_geomean(), x,
                                        FacilityDistribution::uniform_unit());
  CHECK(v.convention == Convention::AggregateOfExpectations);
  CHECK(std::abs(v.value - 0.3125) <= 1e-12);

  // For exponent 1 both conventions agree by linearity.
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const Profile r = random_profile(rng, 2 + static_cast<int>(rng() % 3));
    const auto lot = FacilityDistribution::endpoint_lottery(u01(rng));
    const double ea =
        eval_expected_aggregate(ObjectiveSpec::su(1.0), r, lot).value;
    const double ae =
        eval_aggregate_of_expectations(ObjectiveSpec::su(1.0), r, lot).value;
    CHECK(std::abs(ea - ae) <= 1e-12);
  }
}

TEST_CASE("power-mean monotonicity in the exponent") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 25; ++t) {
    const Profile x = random_profile(rng, 2 + static_cast<int>(rng() % 6));
    const double y = u01(rng);
    const double v1 = eval_at_point(ObjectiveSpec::su(1.0), x, y);
    const double v2 = eval_at_point(ObjectiveSpec::su(2.0), x, y);
    const double v4 = eval_at_point(ObjectiveSpec::su(4.0), x, y);
    const double v64 = eval_at_point(ObjectiveSpec::su(64.0), x, y);
    const double vmax = eval_at_point(ObjectiveSpec::su_max(), x, y);
    CHECK(v1 >= v2 - 1e-12);
    CHECK(v2 >= v4 - 1e-12);
    CHECK(v4 >= v64 - 1e-12);
    CHECK(v64 >= vmax - 1e-12);
    CHECK(v64 - vmax <= 0.05);  // n <= 8 keeps the high-p gap tiny
  }
}

TEST_CASE("reflection symmetry of every objective") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 25; ++t) {
    const Profile x = random_profile(rng, 1 + static_cast<int>(rng() % 5));
    const Profile r = x.reflected();
    const double y = u01(rng);
    for (const ObjectiveSpec& spec :
         {ObjectiveSpec::su(0.7), ObjectiveSpec::su(2.0),
          ObjectiveSpec::su_max(), ObjectiveSpec::su_min(),
          ObjectiveSpec::su_geomean(), ObjectiveSpec::sc(1.5),
          ObjectiveSpec::sc_max()}) {
      CHECK(std::abs(eval_at_point(spec, x, y) -
                     eval_at_point(spec, r, 1.0 - y)) <= 1e-12);
    }
  }
}

TEST_CASE("the adaptive quadrature helper integrates polynomials") {
  const std::vector<double> breaks{0.5};
  const double val = integrate_unit_interval(
      [](double y) { return y * y; }, breaks, 1e-10);
  CHECK(std::abs(val - 1.0 / 3.0) <= 1e-10);
}

}  // TEST_SUITE
