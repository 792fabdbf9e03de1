#pragma once
// Exhaustive strategyproofness checks on discretized profile spaces.
//
// The check covers both the utility and the cost side at once: utility is
// distance and cost = 1 - distance, so a deviation strictly raises expected
// distance iff it strictly lowers expected cost. "No witness" means only
// that the grid holds no witness; the grid is part of the result's meaning.

#include <cstdint>
#include <optional>
#include <vector>

#include "ofl/mechanisms.hpp"

namespace ofl {

struct DeviationWitness {
  Profile profile;                    // true (sorted) profile
  std::vector<int> agent_set;         // deviating agents, 0-based ascending
  std::vector<double> misreports;     // one report per listed agent
  std::vector<double> gain_per_agent; // strict increase in expected distance
};

struct TruthCheckConfig {
  ExecPolicy policy = ExecPolicy::Parallel;
  uint64_t max_evals = default_eval_budget();
};

// Single-agent check: all profiles on the grid {0, step, ..., 1}^n (as sorted
// multisets; every mechanism here is anonymous) times all single-agent grid
// misreports. Returns the lexicographically first witness (profile, agent,
// misreport), or nullopt. Requires n in [1,4] and step = 1/k with k <= 200.
// Throws BudgetExceeded when the enumeration would exceed cfg.max_evals.
std::optional<DeviationWitness> check_sp(const MechanismSpec& mech, int n,
                                         double grid_step,
                                         const TruthCheckConfig& cfg = {});

// Coalition check: every coalition of size 1..max_coalition and every joint
// grid misreport; a witness needs every member to strictly gain. n <= 3.
std::optional<DeviationWitness> check_gsp(const MechanismSpec& mech, int n,
                                          double grid_step, int max_coalition,
                                          const TruthCheckConfig& cfg = {});

// Recompute each member's gain by replaying the witness through the
// mechanism; independent of the search that produced it.
std::vector<double> replay_witness_gains(const MechanismSpec& mech,
                                         const DeviationWitness& w);

// Number of mechanism evaluations the corresponding check will charge
// against the budget (exposed so callers can size budgets and tests can pin
// the arithmetic).
uint64_t sp_eval_count(int n, double grid_step);
uint64_t gsp_eval_count(int n, double grid_step, int max_coalition);

}  // namespace ofl
