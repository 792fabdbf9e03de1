#pragma once
// L_p-aggregated social objectives over a profile:
//
//   su_p(y, x) = (sum_i |x_i - y|^p)^(1/p)        social utility, p > 0
//   SuMax / SuMin = max_i / min_i |x_i - y|        the p -> +/-inf limits
//   SuGeoMean = (prod_i |x_i - y|)^(1/n)           the p -> 0+ limit
//   sc_p(y, x) = (sum_i (1-|x_i - y|)^p)^(1/p)     social cost, p >= 1
//   ScMax = max_i (1 - |x_i - y|)
//
// Randomized outputs are evaluated under two conventions:
//  * ExpectedAggregate: expectation of the aggregation kernel (the power sum,
//    extreme value, or product) over the lottery, mapped back through the
//    outer root. The kernel is linear in the distribution, which is what
//    makes mixture values compose and mixture optimization a linear program.
//    At p = 1 and for max/min this is literally the expected aggregate.
//  * AggregateOfExpectations: aggregate the per-agent expected utilities
//    (costs). This is the convention the geometric-mean analysis uses, and
//    the default for SuGeoMean only.

#include <functional>
#include <string>

#include "ofl/core.hpp"

namespace ofl {

// ---------------------------------------------------------------------------
// ObjectiveSpec
// ---------------------------------------------------------------------------

enum class ObjectiveKind { Su, SuMax, SuMin, SuGeoMean, Sc, ScMax };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::Su;
  double p = 1.0;  // meaningful for Su/Sc only

  static ObjectiveSpec su(double p);        // requires 0 < p <= 1e6
  static ObjectiveSpec su_max();
  static ObjectiveSpec su_min();
  static ObjectiveSpec su_geomean();
  static ObjectiveSpec sc(double p);        // requires 1 <= p <= 1e6
  static ObjectiveSpec sc_max();

  // "su:<p>", "su:max", "su:min", "su:geomean", "sc:<p>", "sc:max".
  static ObjectiveSpec parse(const std::string& name);
  std::string name() const;

  // true = social utility (maximize), false = social cost (minimize).
  bool is_utility() const {
    return kind != ObjectiveKind::Sc && kind != ObjectiveKind::ScMax;
  }

  friend bool operator==(const ObjectiveSpec& a, const ObjectiveSpec& b) {
    return a.kind == b.kind && a.p == b.p;
  }
};

enum class Convention { ExpectedAggregate, AggregateOfExpectations };

std::string convention_name(Convention c);

// Default convention per objective: AggregateOfExpectations for SuGeoMean,
// ExpectedAggregate otherwise.
Convention default_convention(const ObjectiveSpec& spec);

struct ObjectiveValue {
  double value = 0.0;
  Convention convention = Convention::ExpectedAggregate;
};

// ---------------------------------------------------------------------------
// Point evaluation and the aggregation kernel.
// ---------------------------------------------------------------------------

// Deterministic objective value at facility location y.
double eval_at_point(const ObjectiveSpec& spec, std::span<const double> xs,
                     double y);
inline double eval_at_point(const ObjectiveSpec& spec, const Profile& x,
                            double y) {
  return eval_at_point(spec, x.span(), y);
}

// The additive/multiplicative kernel before the outer root: power sum for
// Su/Sc, extreme value for the max/min variants, distance product for
// SuGeoMean. eval_at_point == from_kernel(kernel_at).
double kernel_at(const ObjectiveSpec& spec, std::span<const double> xs,
                 double y);
double from_kernel(const ObjectiveSpec& spec, double kernel_value, int n);

// Expected kernel under a lottery: exact sums for Point/Discrete, kink-aware
// adaptive quadrature for UniformUnit (abs error target kQuadratureAbsTol;
// throws QuadratureFailure when the refinement cap is hit).
double expected_kernel(const ObjectiveSpec& spec, std::span<const double> xs,
                       const FacilityDistribution& dist);

// ---------------------------------------------------------------------------
// Randomized evaluation under both conventions.
// ---------------------------------------------------------------------------

ObjectiveValue eval_expected_aggregate(const ObjectiveSpec& spec,
                                       const Profile& x,
                                       const FacilityDistribution& dist);

ObjectiveValue eval_aggregate_of_expectations(const ObjectiveSpec& spec,
                                              const Profile& x,
                                              const FacilityDistribution& dist);

// Evaluate under the objective's default convention (see above).
ObjectiveValue eval_default(const ObjectiveSpec& spec, const Profile& x,
                            const FacilityDistribution& dist);

// ---------------------------------------------------------------------------
// Quadrature utility (exposed for tests): integrate f over [0,1] splitting at
// the given breakpoints, adaptive Simpson per panel.
// ---------------------------------------------------------------------------
double integrate_unit_interval(const std::function<double(double)>& f,
                               std::span<const double> breakpoints,
                               double abs_tol);

}  // namespace ofl
