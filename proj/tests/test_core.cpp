#include <cmath>
#include <limits>

#include "doctest.h"
#include "ofl/core.hpp"

using namespace ofl;

TEST_SUITE("core") {

TEST_CASE("profiles sort on construction and validate the domain") {
  const Profile x = Profile::make({0.7, 0.2, 0.2});
  CHECK(x.n() == 3);
  CHECK(x[0] == 0.2);
  CHECK(x[1] == 0.2);
  CHECK(x[2] == 0.7);

  CHECK_THROWS_AS(Profile::make({}), EmptyProfileError);
  CHECK_THROWS_AS(Profile::make({1.1}), OutOfRangeError);
  CHECK_THROWS_AS(Profile::make({-0.01, 0.5}), OutOfRangeError);
  CHECK_THROWS_AS(Profile::make({0.5, std::nan("")}), OutOfRangeError);
}

TEST_CASE("reflection mirrors and re-sorts") {
  const Profile x = Profile::make({0.25, 0.25, 0.75});
  const Profile r = x.reflected();
  CHECK(r[0] == 0.25);
  CHECK(r[1] == 0.75);
  CHECK(r[2] == 0.75);
  CHECK(r.reflected() == x);
}

TEST_CASE("side counts treat 1/2 as the left side") {
  const SideCounts mid = side_counts(Profile::make({0.5}));
  CHECK(mid.n1 == 1);
  CHECK(mid.n2 == 0);

  const SideCounts c = side_counts(Profile::make({0.2, 0.5, 0.9}));
  CHECK(c.n1 == 2);
  CHECK(c.n2 == 1);

  const SideCounts just_right = side_counts(Profile::make({0.500000001}));
  CHECK(just_right.n1 == 0);
  CHECK(just_right.n2 == 1);
}

TEST_CASE("discrete distributions merge, validate, and collapse") {
  // Duplicate atoms merge; a single remaining atom collapses to a Point.
  const auto merged =
      FacilityDistribution::discrete({{0.3, 0.5}, {0.3, 0.5}});
  CHECK(merged.is_point());
  CHECK(merged.point_location() == 0.3);

  // Zero-probability atoms are dropped.
  const auto dropped =
      FacilityDistribution::discrete({{0.5, 0.0}, {0.2, 1.0}});
  CHECK(dropped.is_point());
  CHECK(dropped.point_location() == 0.2);

  // Probabilities must sum to 1 within the shared tolerance.
  CHECK_THROWS_AS(FacilityDistribution::discrete({{0.0, 0.5}, {1.0, 0.4}}),
                  ConfigError);
  // Support must live on [0,1]; probabilities cannot be negative.
  CHECK_THROWS_AS(FacilityDistribution::discrete({{1.5, 1.0}}), ConfigError);
  CHECK_THROWS_AS(FacilityDistribution::discrete({{0.0, -0.2}, {1.0, 1.2}}),
                  ConfigError);
}

TEST_CASE("endpoint lotteries cover the degenerate corners") {
  const auto half = FacilityDistribution::endpoint_lottery(0.5);
  CHECK(half.kind() == FacilityDistribution::Kind::Discrete);
  CHECK(half.support() == std::vector<double>{0.0, 1.0});
  CHECK(half.prob() == std::vector<double>{0.5, 0.5});

  const auto all_zero = FacilityDistribution::endpoint_lottery(1.0);
  CHECK(all_zero.is_point());
  CHECK(all_zero.point_location() == 0.0);

  const auto all_one = FacilityDistribution::endpoint_lottery(0.0);
  CHECK(all_one.is_point());
  CHECK(all_one.point_location() == 1.0);

  CHECK_THROWS_AS(FacilityDistribution::endpoint_lottery(-0.1), ConfigError);
  CHECK_THROWS_AS(FacilityDistribution::endpoint_lottery(1.1), ConfigError);
}

TEST_CASE("agent utility is expected distance; cost is its complement") {
  CHECK(agent_utility(0.25, FacilityDistribution::point(1.0)) == 0.75);
  CHECK(agent_cost(0.25, FacilityDistribution::point(1.0)) == 0.25);

  const auto half = FacilityDistribution::endpoint_lottery(0.5);
  CHECK(std::abs(agent_utility(0.25, half) - 0.5) <= 1e-15);

  // Uniform lottery closed form (2x^2 - 2x + 1)/2.
  const auto uni = FacilityDistribution::uniform_unit();
  CHECK(std::abs(agent_utility(0.0, uni) - 0.5) <= 1e-15);
  CHECK(std::abs(agent_utility(0.5, uni) - 0.25) <= 1e-15);
  CHECK(std::abs(agent_utility(0.75, uni) - 0.3125) <= 1e-15);
}

TEST_CASE("report formatting is fixed at 12 significant digits") {
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("the evaluation budget has a positive default") {
  CHECK(default_eval_budget() > 0);
}

}  // TEST_SUITE
