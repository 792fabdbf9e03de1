#include <cmath>
#include <limits>

#include "doctest.h"
#include "ofl/adversary.hpp"

using namespace ofl;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("adversary") {

TEST_CASE("pointwise ratios match hand calculations") {
  // Majority vote on (0, 0.501): facility at 0, optimum at 1.
  const double mv = ratio_at(MechanismSpec::majority_vote(),
                             ObjectiveSpec::su(1.0),
                             Profile::make({0.0, 0.501}));
  CHECK(std::abs(mv - (1.0 + (1.0 - 0.501)) / 0.501) <= 1e-15);

  // Power-weighted fair coin on (0.5, 1) under the max objective.
  const double pw = ratio_at(MechanismSpec::power_weighted(kInf),
                             ObjectiveSpec::su_max(),
                             Profile::make({0.5, 1.0}));
  CHECK(std::abs(pw - 4.0 / 3.0) <= 1e-15);

  // Endpoint-lottery ratio for the matched exponent 1.
  const double pw1 = ratio_at(MechanismSpec::power_weighted(1.0),
                              ObjectiveSpec::su(1.0),
                              Profile::make({0.5, 1.0}));
  CHECK(std::abs(pw1 - 1.5) <= 1e-15);

  // A facility placed on top of an agent zeroes min/geomean utility while
  // the optimum stays positive: the ratio is +inf, not an error.
  CHECK(ratio_at(MechanismSpec::majority_vote(), ObjectiveSpec::su_geomean(),
                 Profile::make({0.0, 1.0})) == kInf);
  CHECK(ratio_at(MechanismSpec::majority_vote(), ObjectiveSpec::su_min(),
                 Profile::make({0.0, 1.0})) == kInf);
}

TEST_CASE("claimed-bound catalog") {
  const auto mv = MechanismSpec::majority_vote();
  CHECK(std::abs(claimed_bound(mv, ObjectiveSpec::su(2.0))->value -
                 std::sqrt(5.0)) <= 1e-14);
  CHECK(claimed_bound(mv, ObjectiveSpec::sc(1.0))->value == 3.0);
  CHECK(claimed_bound(mv, ObjectiveSpec::su_max())->value == 2.0);
  CHECK(claimed_bound(mv, ObjectiveSpec::sc_max())->value == 2.0);
  CHECK_FALSE(claimed_bound(mv, ObjectiveSpec::su_min()).has_value());
  CHECK_FALSE(claimed_bound(mv, ObjectiveSpec::su_geomean()).has_value());

  CHECK(std::abs(claimed_bound(MechanismSpec::power_weighted(2.0),
                               ObjectiveSpec::su(2.0))
                     ->value -
                 std::sqrt(5.0 / 3.0)) <= 1e-14);
  CHECK(claimed_bound(MechanismSpec::power_weighted(0.5),
                      ObjectiveSpec::su(0.5))
            ->value == 4.0);
  CHECK(std::abs(claimed_bound(MechanismSpec::power_weighted(kInf),
                               ObjectiveSpec::su_max())
                     ->value -
                 4.0 / 3.0) <= 1e-15);
  // The guarantee is tied to the matched exponent.
  CHECK_FALSE(claimed_bound(MechanismSpec::power_weighted(2.0),
                            ObjectiveSpec::su(1.0))
                  .has_value());
  CHECK_FALSE(claimed_bound(MechanismSpec::power_weighted(kInf),
                            ObjectiveSpec::su(2.0))
                  .has_value());

  const auto sw = MechanismSpec::square_weighted();
  CHECK(claimed_bound(sw, ObjectiveSpec::sc(1.0))->value == 2.0);
  CHECK_FALSE(claimed_bound(sw, ObjectiveSpec::sc(1.0))->conjecture);
  CHECK(claimed_bound(sw, ObjectiveSpec::sc(2.0))->conjecture);
  CHECK(claimed_bound(sw, ObjectiveSpec::sc_max())->value == 2.0);
  CHECK_FALSE(claimed_bound(sw, ObjectiveSpec::su(1.0)).has_value());

  CHECK(std::abs(claimed_bound(MechanismSpec::uniform(),
                               ObjectiveSpec::su_geomean())
                     ->value -
                 (std::sqrt(2.0) + 1.0)) <= 1e-15);
  CHECK_FALSE(claimed_bound(MechanismSpec::uniform(), ObjectiveSpec::su_min())
                  .has_value());
}

TEST_CASE("search validation and budget") {
  SearchConfig cfg;
  cfg.n_min = 0;
  CHECK_THROWS_AS(search_worst_ratio(MechanismSpec::majority_vote(),
                                     ObjectiveSpec::su(1.0), cfg),
                  OutOfRangeError);
  cfg = SearchConfig{};
  cfg.grid_step = 1e-7;
  CHECK_THROWS_AS(search_worst_ratio(MechanismSpec::majority_vote(),
                                     ObjectiveSpec::su(1.0), cfg),
                  OutOfRangeError);
  cfg = SearchConfig{};
  cfg.restarts = -1;
  CHECK_THROWS_AS(search_worst_ratio(MechanismSpec::majority_vote(),
                                     ObjectiveSpec::su(1.0), cfg),
                  OutOfRangeError);
  cfg = SearchConfig{};
  cfg.max_evals = 10;  // C(1002,2) grid evaluations cannot fit
  CHECK_THROWS_AS(search_worst_ratio(MechanismSpec::majority_vote(),
                                     ObjectiveSpec::su(1.0), cfg),
                  BudgetExceeded);
}

TEST_CASE("coarse search climbs to the majority-vote boundary") {
  SearchConfig cfg;
  cfg.grid_step = 0.01;
  const RatioReport rep = search_worst_ratio(MechanismSpec::majority_vote(),
                                             ObjectiveSpec::su(1.0), cfg);
  CHECK(rep.worst_ratio >= 2.97);
  CHECK(rep.worst_ratio <= 3.0 + 1e-7);
  REQUIRE(rep.witness.n() == 2);
  CHECK(rep.witness[0] == 0.0);
  CHECK(rep.witness[1] > 0.5);
  CHECK(rep.witness[1] < 0.51);
  REQUIRE(rep.claimed.has_value());
  CHECK(*rep.claimed == 3.0);
  CHECK_FALSE(rep.falsification);
  CHECK_FALSE(rep.conjecture);
  CHECK_FALSE(rep.unbounded);
  CHECK(std::abs(*rep.slack - (3.0 - rep.worst_ratio)) <= 1e-15);
}

TEST_CASE("unbounded ratios surface as witnesses, not errors") {
  SearchConfig cfg;
  cfg.grid_step = 0.25;
  const RatioReport rep = search_worst_ratio(MechanismSpec::majority_vote(),
                                             ObjectiveSpec::su_min(), cfg);
  CHECK(rep.unbounded);
  CHECK(rep.worst_ratio == kInf);
  // Lexicographically first unbounded grid profile on the 1/4 grid.
  CHECK(rep.witness == Profile::make({0.0, 0.75}));
  CHECK_FALSE(rep.claimed.has_value());
}

TEST_CASE("searches are deterministic and policy-independent") {
  SearchConfig base;
  base.grid_step = 0.01;
  base.restarts = 3;
  base.seed = 42;

  const auto a = search_worst_ratio(MechanismSpec::square_weighted(),
                                    ObjectiveSpec::sc(2.0), base);
  const auto b = search_worst_ratio(MechanismSpec::square_weighted(),
                                    ObjectiveSpec::sc(2.0), base);
  CHECK(a.worst_ratio == b.worst_ratio);
  CHECK(a.witness == b.witness);

  SearchConfig serial = base;
  serial.policy = ExecPolicy::Serial;
  const auto c = search_worst_ratio(MechanismSpec::square_weighted(),
                                    ObjectiveSpec::sc(2.0), serial);
  CHECK(a.worst_ratio == c.worst_ratio);
  CHECK(a.witness == c.witness);
  CHECK_FALSE(a.falsification);
  CHECK(a.conjecture);  // the square-weighted sc(2) bound is conjectured
}

TEST_CASE("bound curves sweep the exponent axis") {
  SearchConfig cfg;
  cfg.grid_step = 0.05;
  const auto curve = bound_curve(MechanismSpec::majority_vote(), "su",
                                 {1.0, 2.0, kInf}, cfg);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].objective == ObjectiveSpec::su(1.0));
  CHECK(curve[1].objective == ObjectiveSpec::su(2.0));
  CHECK(curve[2].objective == ObjectiveSpec::su_max());
  for (const auto& rep : curve) CHECK_FALSE(rep.falsification);

  CHECK_THROWS_AS(bound_curve(MechanismSpec::majority_vote(), "utility",
                              {1.0}, cfg),
                  ConfigError);
}

}  // TEST_SUITE
