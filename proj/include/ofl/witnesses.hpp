#pragma once
// Executable lower-bound constructions: extremal distributions under a
// moment constraint (the engine behind the randomized lower bounds), the
// closed-form su lower-bound curve, the n=2 min-utility optimization, the
// max-cost chain, and the two-candidate sc bounds.

#include <vector>

#include "ofl/objectives.hpp"
#include "ofl/optima.hpp"

namespace ofl {

// ---------------------------------------------------------------------------
// Extremal distribution under E|y - anchor| <= budget.
// ---------------------------------------------------------------------------

struct ConstrainedDistProblem {
  enum class Sense { Max, Min };

  Profile profile;
  ObjectiveSpec objective;
  double anchor = 0.0;   // in [0,1]
  double budget = 0.0;   // requires budget <= max(anchor, 1-anchor)
  Sense sense = Sense::Max;
  std::vector<double> support_grid;  // empty -> default_support_grid
};

// 201 equally spaced points plus the agent locations and the anchor.
std::vector<double> default_support_grid(const Profile& x, double anchor);

struct ExtremalSolution {
  FacilityDistribution distribution;
  double kernel_value = 0.0;  // E[aggregation kernel], linear in the lottery
  double value = 0.0;         // the rooted objective value
};

// The expected kernel is linear in the lottery, so this is an LP with a
// normalization and one moment inequality. Optimal vertices are single
// support points within budget, or two-point mixtures with the moment
// constraint tight; enumerate both families and keep the first strictly
// best (deterministic under value ties). Throws InfeasibleError when even
// the nearest support point violates the budget.
ExtremalSolution solve_extremal_distribution(const ConstrainedDistProblem& prob);

// ---------------------------------------------------------------------------
// The su lower-bound curve on profile (1/3, 1).
// ---------------------------------------------------------------------------

struct SuLowerBoundRow {
  double p = 0.0;              // +inf row = the max-utility analog
  double r_formula = 0.0;      // (4(3^p+1)/(3(3^p+1)+2))^{1/p}; 6/5 at +inf
  double r_lp = 0.0;           // OPT / extremal value via the LP
  double r_rooted_mixture = 0.0;  // OPT / (3/4 su_p(0) + 1/4 su_p(2/3));
                                  // rises monotonically to 6/5 as p grows
};

// For each p: the closed form and its LP reproduction (anchor 2/3, budget
// 1/2, sense Max); the two agree within 1e-9. Accepts +inf entries.
std::vector<SuLowerBoundRow> lower_bound_curve_su(
    const std::vector<double>& p_values);

// ---------------------------------------------------------------------------
// Scalar optimizations behind the n=2 bounds.
// ---------------------------------------------------------------------------

struct MinUtilityN2Bound {
  double delta = 0.0;    // ~0.065153
  double epsilon = 0.0;  // ~0.025909: no ratio better than 1 + epsilon
};

// Maximizes eps(d) = A/(A-B) - 1 with A = (2+2d)/3, B = 2d(1-8d)/(4-8d)
// over d in (0, 1/8) by golden section to 1e-9.
MinUtilityN2Bound min_utility_n2_bound();

struct MaxCostLowerBound {
  double reference_ratio = 0.0;  // chain at delta = 0.026, ~1.008
  double optimized_ratio = 0.0;    // chain maximized over delta
  double optimized_delta = 0.0;
};

// Cost-side chain r(d) = 1 + 3d(1-8d)/((4-8d)(2-d)); reports both the fixed
// reference point and the re-optimized value (which sits slightly higher).
MaxCostLowerBound max_cost_lower_bound();

// ---------------------------------------------------------------------------
// Two-candidate sc bounds.
// ---------------------------------------------------------------------------

struct TwoCandidateScBound {
  double p = 1.0;
  double p_power_bound = 0.0;    // 1 + 2^{p-1}
  double ratio_bound = 0.0;      // (1 + 2^{p-1})^{1/p}
  Profile witness;               // (1/2 - 1e-4, 1)
  double achieved_p_power = 0.0; // E[kernel]/OPT^p under the 1/2-1/2 lottery
};

// Evaluates the 1/2-1/2 endpoint lottery on the witness; achieved_p_power
// lands within 0.01 of p_power_bound.
TwoCandidateScBound two_candidate_sc_bound(double p);

// Max-cost analog: the 1/2-1/2 lottery on profile (0,1) pays expected max
// cost 1 against OPT 1/2, giving ratio 2.
double two_candidate_sc_max_bound();

// ---------------------------------------------------------------------------
// The min-utility family with ratio growing as sqrt(n) under the uniform
// lottery: x_1 = 1/sqrt(n), then x_{i+1} = x_1 + i (1 - x_1)/n.
// ---------------------------------------------------------------------------

Profile sqrt_family_profile(int n);  // requires n >= 2

struct FamilyRatioPoint {
  int n = 0;
  double alg = 0.0;    // E_uniform[min_i |x_i - y|]
  double opt = 0.0;    // closed-form optimal minimum distance (= 1/sqrt(n))
  double ratio = 0.0;  // opt / alg
};

std::vector<FamilyRatioPoint> min_utility_family_curve(
    const std::vector<int>& ns);

// Least-squares slope of log(ratio) against log(n); ~0.5 for the family
// above. Requires at least two points.
double loglog_slope(const std::vector<FamilyRatioPoint>& pts);

// ---------------------------------------------------------------------------
// Uniform-lottery per-agent guarantee: the worst ratio between an agent's
// best possible distance max(x, 1-x) and the uniform expectation
// (2x^2 - 2x + 1)/2, scanned over x in {0, step, ...} u {1/sqrt(2)}.
// Peaks at x = 1/sqrt(2) with value sqrt(2) + 1.
// ---------------------------------------------------------------------------

struct PerAgentRatioBound {
  double worst_x = 0.0;
  double worst_ratio = 0.0;
};

PerAgentRatioBound uniform_per_agent_bound(double grid_step);

// ---------------------------------------------------------------------------
// Geometric-mean extremal scan (profile (1/3,1), atoms {0, 2/3}).
// ---------------------------------------------------------------------------

struct GeoMeanScanResult {
  double q = 0.0;         // weight on y=0 at the constrained optimum (3/4)
  double alg_sq = 0.0;    // product of expected agent utilities (5/18)
  double opt_sq = 0.0;    // max over y of the utility product (1/3)
  double ratio_sq = 0.0;  // opt_sq / alg_sq = 6/5
};

// The product of expected utilities is nonlinear in the lottery, so instead
// of the LP this scans the mixture weight q on {0: q, 2/3: 1-q} subject to
// E|y - 2/3| <= 1/2 (grid plus the constraint-tight weight).
GeoMeanScanResult geomean_extremal_scan();

}  // namespace ofl
