#include "ofl/optima.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ofl {

std::string opt_method_name(OptMethod m) {
  switch (m) {
    case OptMethod::ClosedForm: return "closed-form";
    case OptMethod::CandidateSet: return "candidate-set";
    case OptMethod::GridRefined: return "grid-refined";
  }
  return "?";
}

namespace {

// Golden-section search for a unimodal maximum of f on [a,b] to the given
// interval tolerance. Returns the bracketing midpoint.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = (1.0 + std::sqrt(5.0)) / 2.0;
  double c = b - (b - a) / gr;
  double d = a + (b - a) / gr;
  double fc = f(c);
  double fd = f(d);
  while (std::abs(c - d) > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) / gr;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) / gr;
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Tracks the best (max or min) value seen, breaking exact ties toward the
// smallest y. Candidates must therefore be offered in ascending-y order
// when the tie rule matters.
struct BestTracker {
  bool maximize;
  double value;
  double arg;
  bool seeded = false;

  void offer(double y, double v) {
    if (!seeded || (maximize ? v > value : v < value)) {
      value = v;
      arg = y;
      seeded = true;
    }
  }
};

// Segment breakpoints: 0, 1, and every agent location.
std::vector<double> segment_cuts(std::span<const double> xs) {
  std::vector<double> cuts{0.0, 1.0};
  for (double x : xs) {
    if (x > 0.0 && x < 1.0) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// Golden-refine every segment between consecutive cuts (the objective is
// unimodal there for every spec we handle) and offer the refined points.
void refine_segments(const ObjectiveSpec& spec, std::span<const double> xs,
                     const std::vector<double>& cuts, BestTracker& best) {
  const bool maximize = spec.is_utility();
  auto f = [&](double y) {
    const double v = eval_at_point(spec, xs, y);
    return maximize ? v : -v;
  };
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (b - a < 1e-12) continue;
    const double y = golden_max(f, a, b, 1e-10);
    best.offer(y, eval_at_point(spec, xs, y));
  }
}

}  // namespace

OptResult opt_su_min(const Profile& x) {
  const auto xs = x.span();
  // Candidates in ascending-y order so the smallest-y tie rule falls out of
  // first-strictly-better comparison.
  BestTracker best{true, 0.0, 0.0};
  best.offer(0.0, xs.front());
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    const double mid = 0.5 * (xs[i] + xs[i + 1]);
    best.offer(mid, 0.5 * (xs[i + 1] - xs[i]));
  }
  best.offer(1.0, 1.0 - xs.back());
  return {best.value, best.arg, OptMethod::ClosedForm};
}

OptResult opt_convex_candidates(const ObjectiveSpec& spec, const Profile& x) {
  const auto xs = x.span();
  std::vector<double> cands;
  bool refine = false;
  switch (spec.kind) {
    case ObjectiveKind::Su:
      if (spec.p < 1.0) {
        throw SpecNotSupported(
            "opt_convex_candidates: su with p<1 is not piecewise convex; "
            "use opt_grid or opt_best");
      }
      cands = {0.0, 1.0};
      break;
    case ObjectiveKind::SuMax:
      cands = {0.0, 1.0};
      break;
    case ObjectiveKind::Sc:
      cands = segment_cuts(xs);
      refine = spec.p > 1.0;  // interior minima between kinks
      break;
    case ObjectiveKind::ScMax:
      cands = segment_cuts(xs);
      for (size_t i = 0; i + 1 < xs.size(); ++i) {
        cands.push_back(0.5 * (xs[i] + xs[i + 1]));
      }
      std::sort(cands.begin(), cands.end());
      break;
    default:
      throw SpecNotSupported("opt_convex_candidates supports Su(p>=1), "
                             "SuMax, Sc(p>=1), ScMax only; got " + spec.name());
  }
  BestTracker best{spec.is_utility(), 0.0, 0.0};
  for (double y : cands) best.offer(y, eval_at_point(spec, xs, y));
  if (refine) refine_segments(spec, xs, segment_cuts(xs), best);
  return {best.value, best.arg, OptMethod::CandidateSet};
}

OptResult opt_grid(const ObjectiveSpec& spec, const Profile& x,
                   double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.01)) {
    throw OutOfRangeError("grid_step must lie in (0, 0.01]; got " +
                          format_real(grid_step));
  }
  const auto xs = x.span();
  std::vector<double> pts;
  const int cells = static_cast<int>(std::ceil(1.0 / grid_step));
  pts.reserve(static_cast<size_t>(cells) + 1 + xs.size() * xs.size());
  for (int k = 0; k <= cells; ++k) {
    pts.push_back(std::min(1.0, k * grid_step));
  }
  // Kinks and balance points can sit off-grid; include them always.
  for (double v : xs) pts.push_back(v);
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = i + 1; j < xs.size(); ++j) {
      pts.push_back(0.5 * (xs[i] + xs[j]));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  BestTracker best{spec.is_utility(), 0.0, 0.0};
  for (double y : pts) best.offer(y, eval_at_point(spec, xs, y));
  // Refine each inter-breakpoint segment separately before the global
  // comparison; a single basin around the grid best can miss a near tie.
  refine_segments(spec, xs, segment_cuts(xs), best);
  return {best.value, best.arg, OptMethod::GridRefined};
}

OptResult opt_best(const ObjectiveSpec& spec, const Profile& x) {
  switch (spec.kind) {
    case ObjectiveKind::SuMin:
      return opt_su_min(x);
    case ObjectiveKind::SuMax:
    case ObjectiveKind::Sc:
    case ObjectiveKind::ScMax:
      return opt_convex_candidates(spec, x);
    case ObjectiveKind::Su:
      if (spec.p >= 1.0) return opt_convex_candidates(spec, x);
      [[fallthrough]];
    case ObjectiveKind::SuGeoMean: {
      // Concave between consecutive agent locations: evaluate the segment
      // cuts and golden-refine each segment.
      const auto xs = x.span();
      const auto cuts = segment_cuts(xs);
      BestTracker best{true, 0.0, 0.0};
      for (double y : cuts) best.offer(y, eval_at_point(spec, xs, y));
      refine_segments(spec, xs, cuts, best);
      return {best.value, best.arg, OptMethod::GridRefined};
    }
  }
  return opt_grid(spec, x, 1e-3);  // unreachable
}

}  // namespace ofl
