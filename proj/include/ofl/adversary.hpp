#pragma once
// Worst-case approximation-ratio machinery: pointwise ratio evaluation, a
// two-phase supremum search (exhaustive small-n grid, then hill-climbing
// with random restarts), and the catalog of claimed bounds the searches are
// compared against. Search only certifies lower estimates of the worst case
// and checks non-violation of claimed bounds; it never proves upper bounds.

#include <optional>
#include <vector>

#include "ofl/mechanisms.hpp"
#include "ofl/objectives.hpp"
#include "ofl/optima.hpp"

namespace ofl {

// Approximation ratio at one profile: OPT/ALG for utility objectives,
// ALG/OPT for cost objectives. A zero denominator with nonzero numerator
// yields +inf (unboundedness is a first-class result here); 0/0 yields 1.
double ratio_at(const MechanismSpec& mech, const ObjectiveSpec& spec,
                const Profile& x);

// Known worst-case guarantee for a (mechanism, objective) pair, when one
// exists. `conjecture` marks the square-weighted sc bound for exponents
// where 2 is conjectured rather than proven.
struct ClaimedBound {
  double value = 0.0;
  bool conjecture = false;
};

std::optional<ClaimedBound> claimed_bound(const MechanismSpec& mech,
                                          const ObjectiveSpec& spec);

struct SearchConfig {
  int n_min = 2;
  int n_max = 2;
  double grid_step = 1e-3;  // phase-1 resolution and initial climb step
  int restarts = 0;         // random starts per n (phase 2)
  uint64_t seed = 0;        // required for reproducibility when restarts > 0
  ExecPolicy policy = ExecPolicy::Parallel;
  uint64_t max_evals = default_eval_budget();
};

struct RatioReport {
  MechanismSpec mechanism;
  ObjectiveSpec objective;
  double worst_ratio = 1.0;
  Profile witness;
  std::optional<double> claimed;  // from the catalog, when present
  std::optional<double> slack;    // claimed - worst_ratio
  bool conjecture = false;        // claimed bound is a conjecture
  bool falsification = false;     // worst_ratio > claimed + 1e-7
  bool unbounded = false;         // +inf ratio exhibited
  SearchConfig config;
};

// Phase 1: exhaustive grid over sorted profiles for n <= 2 (n = 3 too when
// the grid is coarse, 1/step <= 20). Phase 2: coordinate hill-climbing with
// the step halving from grid_step down to 1e-6, started from the phase-1
// best and from `restarts` seeded random profiles per n. Deterministic for
// fixed config regardless of thread schedule (ratio, then lexicographic
// witness, decides every merge). Throws BudgetExceeded past max_evals.
RatioReport search_worst_ratio(const MechanismSpec& mech,
                               const ObjectiveSpec& spec,
                               const SearchConfig& config);

// One report per exponent; family is "su" or "sc"; +inf entries map to the
// max variant of the family.
std::vector<RatioReport> bound_curve(const MechanismSpec& mech,
                                     const std::string& family,
                                     const std::vector<double>& p_values,
                                     const SearchConfig& config);

}  // namespace ofl
