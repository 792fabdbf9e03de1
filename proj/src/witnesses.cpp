#include "ofl/witnesses.hpp"

#include <algorithm>
#include <cmath>

namespace ofl {

namespace {

// Golden-section maximum of f on [a,b] (interval tolerance `tol`).
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

constexpr double kBudgetSlack = 1e-12;  // absorbs float noise in |y - anchor|

}  // namespace

std::vector<double> default_support_grid(const Profile& x, double anchor) {
  std::vector<double> grid;
  grid.reserve(201 + x.locations().size() + 1);
  for (int i = 0; i <= 200; ++i) grid.push_back(i / 200.0);
  for (double v : x.locations()) grid.push_back(v);
  grid.push_back(anchor);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ExtremalSolution solve_extremal_distribution(
    const ConstrainedDistProblem& prob) {
  if (!(prob.anchor >= 0.0 && prob.anchor <= 1.0)) {
    throw OutOfRangeError("anchor must lie in [0,1]");
  }
  if (!(prob.budget >= 0.0 &&
        prob.budget <= std::max(prob.anchor, 1.0 - prob.anchor))) {
    throw ConfigError("budget must lie in [0, max(anchor, 1-anchor)]");
  }
  const std::vector<double> grid =
      prob.support_grid.empty()
          ? default_support_grid(prob.profile, prob.anchor)
          : prob.support_grid;
  if (grid.empty()) throw ConfigError("empty support grid");

  const auto xs = prob.profile.span();
  const size_t m = grid.size();
  std::vector<double> cost(m), moment(m);
  for (size_t j = 0; j < m; ++j) {
    cost[j] = kernel_at(prob.objective, xs, grid[j]);
    moment[j] = std::abs(grid[j] - prob.anchor);
  }

  const bool maximize = prob.sense == ConstrainedDistProblem::Sense::Max;
  const auto better = [&](double v, double best) {
    return maximize ? v > best : v < best;
  };

  bool seeded = false;
  double best_value = 0.0;
  std::vector<std::pair<double, double>> best_atoms;

  // Vertices of the LP: feasible single points first, then mixtures that
  // make the moment constraint tight (one point inside the budget, one
  // outside). First-strictly-better keeps the earliest optimum, making the
  // returned support deterministic under exact value ties.
  for (size_t j = 0; j < m; ++j) {
    if (moment[j] > prob.budget + kBudgetSlack) continue;
    if (!seeded || better(cost[j], best_value)) {
      seeded = true;
      best_value = cost[j];
      best_atoms = {{grid[j], 1.0}};
    }
  }
  if (!seeded) {
    throw InfeasibleError(
        "no support point satisfies E|y-anchor| <= " +
        format_real(prob.budget));
  }
  for (size_t j = 0; j < m; ++j) {
    for (size_t l = j + 1; l < m; ++l) {
      size_t in = j, out = l;  // inside/outside the budget
      if (moment[in] > prob.budget) std::swap(in, out);
      if (moment[in] > prob.budget || moment[out] <= prob.budget) continue;
      // lambda on the outside point makes the constraint tight
      const double lam =
          (prob.budget - moment[in]) / (moment[out] - moment[in]);
      const double v = lam * cost[out] + (1.0 - lam) * cost[in];
      if (better(v, best_value)) {
        best_value = v;
        best_atoms = {{grid[out], lam}, {grid[in], 1.0 - lam}};
      }
    }
  }

  ExtremalSolution sol{FacilityDistribution::discrete(best_atoms), best_value,
                       from_kernel(prob.objective, best_value,
                                   prob.profile.n())};
  return sol;
}

// ---------------------------------------------------------------------------
// su lower-bound curve.
// ---------------------------------------------------------------------------

std::vector<SuLowerBoundRow> lower_bound_curve_su(
    const std::vector<double>& p_values) {
  const Profile x = Profile::make({1.0 / 3.0, 1.0});
  std::vector<SuLowerBoundRow> rows;
  rows.reserve(p_values.size());
  for (double p : p_values) {
    const bool limit = std::isinf(p);
    if (!limit && !(p > 0.0)) {
      throw OutOfRangeError("lower_bound_curve_su needs p > 0 or +inf");
    }
    const ObjectiveSpec spec =
        limit ? ObjectiveSpec::su_max() : ObjectiveSpec::su(p);

    ConstrainedDistProblem prob{x, spec, 2.0 / 3.0, 0.5,
                                ConstrainedDistProblem::Sense::Max, {}};
    const ExtremalSolution sol = solve_extremal_distribution(prob);
    const double opt = opt_best(spec, x).value;

    SuLowerBoundRow row;
    row.p = p;
    if (limit) {
      row.r_formula = 6.0 / 5.0;
    } else {
      const double t = std::pow(3.0, p);
      row.r_formula = std::pow(4.0 * (t + 1.0) / (3.0 * (t + 1.0) + 2.0),
                               1.0 / p);
    }
    row.r_lp = opt / sol.value;
    const double rooted_mixture = 0.75 * eval_at_point(spec, x.span(), 0.0) +
                                  0.25 * eval_at_point(spec, x.span(), 2.0 / 3.0);
    row.r_rooted_mixture = opt / rooted_mixture;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// n=2 scalar chains.
// ---------------------------------------------------------------------------

namespace {

double min_utility_eps(double d) {
  const double a = (2.0 + 2.0 * d) / 3.0;
  const double b = 2.0 * d * (1.0 - 8.0 * d) / (4.0 - 8.0 * d);
  return a / (a - b) - 1.0;
}

double max_cost_chain(double d) {
  return 1.0 + 3.0 * d * (1.0 - 8.0 * d) / ((4.0 - 8.0 * d) * (2.0 - d));
}

}  // namespace

MinUtilityN2Bound min_utility_n2_bound() {
  const double lo = 1e-9, hi = 0.125 - 1e-9;
  const double d = golden_max(min_utility_eps, lo, hi, 1e-9);
  return {d, min_utility_eps(d)};
}

MaxCostLowerBound max_cost_lower_bound() {
  const double lo = 1e-9, hi = 0.125 - 1e-9;
  const double d = golden_max(max_cost_chain, lo, hi, 1e-9);
  return {max_cost_chain(0.026), max_cost_chain(d), d};
}

// ---------------------------------------------------------------------------
// Two-candidate sc bounds.
// ---------------------------------------------------------------------------

TwoCandidateScBound two_candidate_sc_bound(double p) {
  if (!(p >= 1.0)) throw OutOfRangeError("two_candidate_sc_bound needs p >= 1");
  const double eps = 1e-4;
  Profile witness = Profile::make({0.5 - eps, 1.0});
  const ObjectiveSpec spec = ObjectiveSpec::sc(p);
  const FacilityDistribution half = FacilityDistribution::endpoint_lottery(0.5);
  const double expected = expected_kernel(spec, witness.span(), half);
  const double opt = opt_best(spec, witness).value;

  TwoCandidateScBound out{p,
                          1.0 + std::exp2(p - 1.0),
                          std::pow(1.0 + std::exp2(p - 1.0), 1.0 / p),
                          std::move(witness),
                          expected / std::pow(opt, p)};
  return out;
}

double two_candidate_sc_max_bound() {
  const Profile x = Profile::make({0.0, 1.0});
  const ObjectiveSpec spec = ObjectiveSpec::sc_max();
  const FacilityDistribution half = FacilityDistribution::endpoint_lottery(0.5);
  const double alg = expected_kernel(spec, x.span(), half);
  const double opt = opt_best(spec, x).value;
  return alg / opt;
}

// ---------------------------------------------------------------------------
// Geometric-mean extremal scan.
// ---------------------------------------------------------------------------

Profile sqrt_family_profile(int n) {
  if (n < 2) throw OutOfRangeError("sqrt_family_profile requires n >= 2");
  const double x1 = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> xs;
  xs.reserve(static_cast<size_t>(n));
  xs.push_back(x1);
  for (int i = 1; i < n; ++i) {
    xs.push_back(x1 + i * (1.0 - x1) / n);
  }
  return Profile::make(std::move(xs));
}

std::vector<FamilyRatioPoint> min_utility_family_curve(
    const std::vector<int>& ns) {
  std::vector<FamilyRatioPoint> out;
  out.reserve(ns.size());
  const ObjectiveSpec spec = ObjectiveSpec::su_min();
  for (int n : ns) {
    const Profile x = sqrt_family_profile(n);
    FamilyRatioPoint pt;
    pt.n = n;
    pt.alg = eval_default(spec, x, FacilityDistribution::uniform_unit()).value;
    pt.opt = opt_su_min(x).value;
    pt.ratio = pt.opt / pt.alg;
    out.push_back(pt);
  }
  return out;
}

double loglog_slope(const std::vector<FamilyRatioPoint>& pts) {
  if (pts.size() < 2) {
    throw OutOfRangeError("loglog_slope requires at least two points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const FamilyRatioPoint& pt : pts) {
    const double lx = std::log(static_cast<double>(pt.n));
    const double ly = std::log(pt.ratio);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(pts.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

PerAgentRatioBound uniform_per_agent_bound(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.01)) {
    throw OutOfRangeError("uniform_per_agent_bound: grid_step in (0, 0.01]");
  }
  const auto ratio = [](double x) {
    const double best = std::max(x, 1.0 - x);
    const double expected = (2.0 * x * x - 2.0 * x + 1.0) / 2.0;
    return best / expected;
  };
  PerAgentRatioBound out{0.0, ratio(0.0)};
  const long long steps = std::llround(1.0 / grid_step);
  for (long long i = 1; i <= steps; ++i) {
    const double x = std::min(1.0, i * grid_step);
    const double r = ratio(x);
    if (r > out.worst_ratio) {
      out.worst_ratio = r;
      out.worst_x = x;
    }
  }
  const double peak = 1.0 / std::sqrt(2.0);
  if (ratio(peak) > out.worst_ratio) {
    out.worst_ratio = ratio(peak);
    out.worst_x = peak;
  }
  return out;
}

GeoMeanScanResult geomean_extremal_scan() {
  const Profile x = Profile::make({1.0 / 3.0, 1.0});
  const double anchor = 2.0 / 3.0;
  const double budget = 0.5;
  const double atom0 = 0.0, atom1 = 2.0 / 3.0;
  const double m0 = std::abs(atom0 - anchor);
  const double m1 = std::abs(atom1 - anchor);

  const auto product_at = [&](double q) {
    const FacilityDistribution dist =
        q == 0.0 ? FacilityDistribution::point(atom1)
                 : FacilityDistribution::discrete({{atom0, q}, {atom1, 1 - q}});
    double prod = 1.0;
    for (double xi : x.span()) prod *= agent_utility(xi, dist);
    return prod;
  };
  const auto feasible = [&](double q) {
    return q * m0 + (1.0 - q) * m1 <= budget + kBudgetSlack;
  };

  // Scan the mixture weight; include the constraint-tight weight exactly.
  std::vector<double> qs;
  for (int i = 0; i <= 1000; ++i) qs.push_back(i / 1000.0);
  if (m0 != m1) {
    const double tight = (budget - m1) / (m0 - m1);
    if (tight >= 0.0 && tight <= 1.0) qs.push_back(tight);
  }
  std::sort(qs.begin(), qs.end());

  GeoMeanScanResult out;
  bool seeded = false;
  for (double q : qs) {
    if (!feasible(q)) continue;
    const double v = product_at(q);
    if (!seeded || v > out.alg_sq) {
      seeded = true;
      out.q = q;
      out.alg_sq = v;
    }
  }
  if (!seeded) throw InfeasibleError("no feasible mixture weight");

  // OPT of the squared geometric mean = max over y of the distance product.
  const OptResult opt = opt_best(ObjectiveSpec::su_geomean(), x);
  const double prod_opt =
      kernel_at(ObjectiveSpec::su_geomean(), x.span(), opt.argmax_or_argmin);
  out.opt_sq = prod_opt;
  out.ratio_sq = out.opt_sq / out.alg_sq;
  return out;
}

}  // namespace ofl
