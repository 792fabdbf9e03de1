#pragma once
// Optimal deterministic facility values OPT(x): closed forms where the
// objective admits them, finite candidate sets for the piecewise-convex
// cases, and a bracketing grid oracle for everything else (and as a
// cross-check for everything).

#include <string>

#include "ofl/objectives.hpp"

namespace ofl {

enum class OptMethod { ClosedForm, CandidateSet, GridRefined };

std::string opt_method_name(OptMethod m);

struct OptResult {
  double value = 0.0;
  double argmax_or_argmin = 0.0;  // an optimal facility location
  OptMethod method = OptMethod::GridRefined;
};

// SuMin closed form: value = max(x_1, 1 - x_n, max_i (x_{i+1}-x_i)/2),
// attained at 0, 1, or a midpoint; ties resolve to the smallest y.
OptResult opt_su_min(const Profile& x);

// Finite candidate evaluation for the piecewise-convex objectives:
//   Su(p>=1), SuMax -> {0, 1}  (convex in y, max at an endpoint)
//   Sc(1)           -> {0, 1} u {x_i}  (piecewise linear, min at a kink)
//   ScMax           -> {0, 1} u {x_i} u midpoints (minimizer of max cost is
//                      the maximizer of the nearest-agent distance)
//   Sc(p>1)         -> breakpoint set above plus a convex golden-section
//                      refinement inside each segment (the power sum has
//                      interior minima between kinks)
// Throws SpecNotSupported for Su(0<p<1), SuMin, SuGeoMean.
OptResult opt_convex_candidates(const ObjectiveSpec& spec, const Profile& x);

// Grid oracle: evaluates the uniform grid (step in (0, 0.01]) plus all x_i
// and all pairwise midpoints, then golden-section refines every segment
// between consecutive breakpoints to tolerance 1e-10 before the global
// comparison. Works for every objective; ties resolve to the smallest y.
OptResult opt_grid(const ObjectiveSpec& spec, const Profile& x,
                   double grid_step);

// Preferred route per objective: closed form for SuMin, candidate sets for
// the convex cases, per-segment golden refinement for Su(0<p<1)/SuGeoMean.
OptResult opt_best(const ObjectiveSpec& spec, const Profile& x);

}  // namespace ofl
