#pragma once
// The mechanism zoo: majority vote, the uniform lottery, the square-weighted
// and power-weighted endpoint lotteries, the two-candidate threshold family,
// and a registry for custom profile->distribution rules (used by tests to
// exercise deliberately manipulable mechanisms).

#include <functional>
#include <string>

#include "ofl/core.hpp"

namespace ofl {

// ---------------------------------------------------------------------------
// Individual mechanisms.
// ---------------------------------------------------------------------------

// Point(0) iff n1 <= n2 (agents at 1/2 count left), else Point(1).
FacilityDistribution run_majority_vote(const Profile& x);

// The uniform lottery on [0,1]; ignores the profile.
FacilityDistribution run_uniform(const Profile& x);

// Endpoint lottery {0: n2^2/(n1^2+n2^2), 1: n1^2/(n1^2+n2^2)}.
FacilityDistribution run_square_weighted(const Profile& x);

// Endpoint lottery with P0 = (n2^2 + 2^p n1 n2) / (n1^2 + n2^2 + 2^{p+1} n1 n2),
// evaluated in a 2^{-p}-scaled form so p up to 1e6 and p = +inf (P0 = 1/2
// when both sides are nonempty) stay exact. Accepts any p > 0: the guarantee
// for the L_p objective with 0 < p < 1 uses the same formula. One-sided
// profiles collapse to the far endpoint: n1 = 0 -> Point(0), n2 = 0 -> Point(1).
FacilityDistribution run_power_weighted(const Profile& x, double p);

// Two candidates a < b with a cutoff on k = #{i : |x_i - a| < |x_i - b|}
// (equidistant agents count toward b): Point(a) iff k >= cutoff.
FacilityDistribution run_two_candidate_threshold(const Profile& x, double a,
                                                 double b, int cutoff);

// ---------------------------------------------------------------------------
// MechanismSpec: parseable description + dispatcher.
// ---------------------------------------------------------------------------

enum class MechanismVariant {
  MajorityVote,
  UniformUnit,
  SquareWeighted,
  PowerWeighted,
  TwoCandidateThreshold,
  Custom,
};

struct MechanismSpec {
  MechanismVariant variant = MechanismVariant::MajorityVote;
  double p = 1.0;                   // PowerWeighted (may be +inf)
  double a = 0.0, b = 1.0;          // TwoCandidateThreshold
  int cutoff = 0;                   // TwoCandidateThreshold
  std::string custom_name;          // Custom

  static MechanismSpec majority_vote();
  static MechanismSpec uniform();
  static MechanismSpec square_weighted();
  static MechanismSpec power_weighted(double p);  // p in (0,1e6] or +inf
  static MechanismSpec threshold(double a, double b, int cutoff);
  static MechanismSpec custom(const std::string& registered_name);

  // "majority-vote", "uniform", "square-weighted", "power-weighted:<p|inf>",
  // "threshold:<a>,<b>,<cutoff>", or a registered custom name.
  static MechanismSpec parse(const std::string& name);
  std::string name() const;
};

FacilityDistribution run_mechanism(const MechanismSpec& spec,
                                   const Profile& x);

// ---------------------------------------------------------------------------
// Custom registry. Handles must be pure (no observable state across calls);
// the truthfulness checks treat them as black boxes.
// ---------------------------------------------------------------------------

using CustomMechanismFn = std::function<FacilityDistribution(const Profile&)>;

void register_custom_mechanism(const std::string& name, CustomMechanismFn fn);
bool custom_mechanism_exists(const std::string& name);

// Built-ins available from the start:
//   "dictator-at-x1" — Point at the lowest report (manipulable; test fodder)
//   "average"        — Point at the mean report (manipulable; test fodder)
void register_builtin_custom_mechanisms();

}  // namespace ofl
