#include "ofl/objectives.hpp"

#include <algorithm>
#include <cmath>

namespace ofl {

namespace {

double parse_positive_real(const std::string& s, const std::string& what) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
  if (used != s.size()) {
    throw ConfigError("trailing characters in " + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// ObjectiveSpec
// ---------------------------------------------------------------------------

ObjectiveSpec ObjectiveSpec::su(double p) {
  if (!(p > 0.0 && p <= kMaxFiniteP)) {
    throw OutOfRangeError("su exponent must satisfy 0 < p <= 1e6 (use su:max "
                          "for the limit); got " + format_real(p));
  }
  return {ObjectiveKind::Su, p};
}

ObjectiveSpec ObjectiveSpec::su_max() { return {ObjectiveKind::SuMax, 0.0}; }
ObjectiveSpec ObjectiveSpec::su_min() { return {ObjectiveKind::SuMin, 0.0}; }
ObjectiveSpec ObjectiveSpec::su_geomean() {
  return {ObjectiveKind::SuGeoMean, 0.0};
}

ObjectiveSpec ObjectiveSpec::sc(double p) {
  if (!(p >= 1.0 && p <= kMaxFiniteP)) {
    throw OutOfRangeError("sc exponent must satisfy 1 <= p <= 1e6 (use sc:max "
                          "for the limit); got " + format_real(p));
  }
  return {ObjectiveKind::Sc, p};
}

ObjectiveSpec ObjectiveSpec::sc_max() { return {ObjectiveKind::ScMax, 0.0}; }

ObjectiveSpec ObjectiveSpec::parse(const std::string& name) {
  auto colon = name.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("objective must look like su:<p>, su:max, su:min, "
                      "su:geomean, sc:<p>, or sc:max; got '" + name + "'");
  }
  const std::string family = name.substr(0, colon);
  const std::string arg = name.substr(colon + 1);
  if (family == "su") {
    if (arg == "max" || arg == "inf") return su_max();
    if (arg == "min") return su_min();
    if (arg == "geomean") return su_geomean();
    return su(parse_positive_real(arg, "su exponent"));
  }
  if (family == "sc") {
    if (arg == "max" || arg == "inf") return sc_max();
    return sc(parse_positive_real(arg, "sc exponent"));
  }
  throw ConfigError("unknown objective family '" + family + "'");
}

std::string ObjectiveSpec::name() const {
  switch (kind) {
    case ObjectiveKind::Su: return "su:" + format_real(p);
    case ObjectiveKind::SuMax: return "su:max";
    case ObjectiveKind::SuMin: return "su:min";
    case ObjectiveKind::SuGeoMean: return "su:geomean";
    case ObjectiveKind::Sc: return "sc:" + format_real(p);
    case ObjectiveKind::ScMax: return "sc:max";
  }
  return "?";
}

std::string convention_name(Convention c) {
  return c == Convention::ExpectedAggregate ? "expected-aggregate"
                                            : "aggregate-of-expectations";
}

Convention default_convention(const ObjectiveSpec& spec) {
  return spec.kind == ObjectiveKind::SuGeoMean
             ? Convention::AggregateOfExpectations
             : Convention::ExpectedAggregate;
}

// ---------------------------------------------------------------------------
// Point evaluation.
// ---------------------------------------------------------------------------

namespace {

// (sum_i t_i^p)^(1/p) for t_i in [0,1], factored through max(t) so huge p
// neither underflows the sum to 0 nor loses the correct max-limit.
double scaled_power_mean_sum(std::span<const double> t, double p) {
  double m = 0.0;
  for (double v : t) m = std::max(m, v);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : t) s += std::pow(v / m, p);
  return m * std::pow(s, 1.0 / p);
}

}  // namespace

double eval_at_point(const ObjectiveSpec& spec, std::span<const double> xs,
                     double y) {
  const size_t n = xs.size();
  if (n == 0) throw EmptyProfileError("eval_at_point on empty profile");
  switch (spec.kind) {
    case ObjectiveKind::Su: {
      std::vector<double> d(n);
      for (size_t i = 0; i < n; ++i) d[i] = std::abs(xs[i] - y);
      return scaled_power_mean_sum(d, spec.p);
    }
    case ObjectiveKind::SuMax: {
      double m = 0.0;
      for (double x : xs) m = std::max(m, std::abs(x - y));
      return m;
    }
    case ObjectiveKind::SuMin: {
      double m = 2.0;
      for (double x : xs) m = std::min(m, std::abs(x - y));
      return m;
    }
    case ObjectiveKind::SuGeoMean: {
      double log_sum = 0.0;
      for (double x : xs) {
        const double d = std::abs(x - y);
        if (d == 0.0) return 0.0;
        log_sum += std::log(d);
      }
      return std::exp(log_sum / static_cast<double>(n));
    }
    case ObjectiveKind::Sc: {
      std::vector<double> c(n);
      for (size_t i = 0; i < n; ++i) c[i] = 1.0 - std::abs(xs[i] - y);
      return scaled_power_mean_sum(c, spec.p);
    }
    case ObjectiveKind::ScMax: {
      double m = 0.0;
      for (double x : xs) m = std::max(m, 1.0 - std::abs(x - y));
      return m;
    }
  }
  return 0.0;  // unreachable
}

// ---------------------------------------------------------------------------
// Kernel machinery.
// ---------------------------------------------------------------------------

double kernel_at(const ObjectiveSpec& spec, std::span<const double> xs,
                 double y) {
  if (xs.empty()) throw EmptyProfileError("kernel_at on empty profile");
  switch (spec.kind) {
    case ObjectiveKind::Su: {
      double s = 0.0;
      for (double x : xs) s += std::pow(std::abs(x - y), spec.p);
      return s;
    }
    case ObjectiveKind::SuMax:
    case ObjectiveKind::SuMin:
      return eval_at_point(spec, xs, y);
    case ObjectiveKind::SuGeoMean: {
      double prod = 1.0;
      for (double x : xs) prod *= std::abs(x - y);
      return prod;
    }
    case ObjectiveKind::Sc: {
      double s = 0.0;
      for (double x : xs) s += std::pow(1.0 - std::abs(x - y), spec.p);
      return s;
    }
    case ObjectiveKind::ScMax:
      return eval_at_point(spec, xs, y);
  }
  return 0.0;  // unreachable
}

double from_kernel(const ObjectiveSpec& spec, double kernel_value, int n) {
  switch (spec.kind) {
    case ObjectiveKind::Su:
    case ObjectiveKind::Sc:
      return kernel_value <= 0.0 ? 0.0 : std::pow(kernel_value, 1.0 / spec.p);
    case ObjectiveKind::SuMax:
    case ObjectiveKind::SuMin:
    case ObjectiveKind::ScMax:
      return kernel_value;
    case ObjectiveKind::SuGeoMean:
      return kernel_value <= 0.0
                 ? 0.0
                 : std::pow(kernel_value, 1.0 / static_cast<double>(n));
  }
  return 0.0;  // unreachable
}

// ---------------------------------------------------------------------------
// Quadrature.
// ---------------------------------------------------------------------------

namespace {

struct SimpsonEval {
  const std::function<double(double)>& f;
  int max_depth;

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
    const double right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || (b - a) < 1e-14) {
      return left + right + err;
    }
    if (depth >= max_depth) {
      throw QuadratureFailure("adaptive Simpson hit depth cap on [" +
                              format_real(a) + "," + format_real(b) + "]");
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double panel(double a, double b, double tol) const {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (fa + 4.0 * fm + fb) * (b - a) / 6.0;
    return recurse(a, b, fa, fm, fb, whole, tol, 0);
  }
};

}  // namespace

double integrate_unit_interval(const std::function<double(double)>& f,
                               std::span<const double> breakpoints,
                               double abs_tol) {
  std::vector<double> cuts{0.0, 1.0};
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  SimpsonEval ev{f, 48};
  double total = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (b - a < 1e-15) continue;
    total += ev.panel(a, b, abs_tol * (b - a));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Expectations.
// ---------------------------------------------------------------------------

namespace {

// E_{y~U[0,1]} min_i |x_i - y| in closed form: the nearest-agent distance is
// a sawtooth over the sorted profile, so each region integrates to a square.
double uniform_expected_min_distance(std::span<const double> xs) {
  const double lo = xs.front();
  const double hi = xs.back();
  double total = 0.5 * lo * lo + 0.5 * (1.0 - hi) * (1.0 - hi);
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    const double gap = xs[i + 1] - xs[i];
    total += 0.25 * gap * gap;
  }
  return total;
}

std::vector<double> kink_breakpoints(std::span<const double> xs) {
  // Kernel kinks sit at the agent locations; min/max selections also switch
  // at midpoints between consecutive agents.
  std::vector<double> cuts(xs.begin(), xs.end());
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    cuts.push_back(0.5 * (xs[i] + xs[i + 1]));
  }
  return cuts;
}

}  // namespace

double expected_kernel(const ObjectiveSpec& spec, std::span<const double> xs,
                       const FacilityDistribution& dist) {
  if (xs.empty()) throw EmptyProfileError("expected_kernel on empty profile");
  switch (dist.kind()) {
    case FacilityDistribution::Kind::Point:
      return kernel_at(spec, xs, dist.point_location());
    case FacilityDistribution::Kind::Discrete: {
      double e = 0.0;
      const auto& s = dist.support();
      const auto& q = dist.prob();
      for (size_t k = 0; k < s.size(); ++k) {
        e += q[k] * kernel_at(spec, xs, s[k]);
      }
      return e;
    }
    case FacilityDistribution::Kind::UniformUnit: {
      if (spec.kind == ObjectiveKind::SuMin) {
        return uniform_expected_min_distance(xs);
      }
      const auto cuts = kink_breakpoints(xs);
      return integrate_unit_interval(
          [&](double y) { return kernel_at(spec, xs, y); }, cuts,
          kQuadratureAbsTol);
    }
  }
  return 0.0;  // unreachable
}

ObjectiveValue eval_expected_aggregate(const ObjectiveSpec& spec,
                                       const Profile& x,
                                       const FacilityDistribution& dist) {
  // Point lotteries short-circuit to the deterministic evaluator so that the
  // randomized and deterministic paths coincide exactly.
  if (dist.is_point()) {
    return {eval_at_point(spec, x.span(), dist.point_location()),
            Convention::ExpectedAggregate};
  }
  const double ek = expected_kernel(spec, x.span(), dist);
  return {from_kernel(spec, ek, x.n()), Convention::ExpectedAggregate};
}

ObjectiveValue eval_aggregate_of_expectations(
    const ObjectiveSpec& spec, const Profile& x,
    const FacilityDistribution& dist) {
  const auto xs = x.span();
  std::vector<double> eu(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) eu[i] = agent_utility(xs[i], dist);
  double v = 0.0;
  switch (spec.kind) {
    case ObjectiveKind::Su:
      v = scaled_power_mean_sum(eu, spec.p);
      break;
    case ObjectiveKind::SuMax:
      v = *std::max_element(eu.begin(), eu.end());
      break;
    case ObjectiveKind::SuMin:
      v = *std::min_element(eu.begin(), eu.end());
      break;
    case ObjectiveKind::SuGeoMean: {
      double log_sum = 0.0;
      bool zero = false;
      for (double u : eu) {
        if (u == 0.0) { zero = true; break; }
        log_sum += std::log(u);
      }
      v = zero ? 0.0 : std::exp(log_sum / static_cast<double>(xs.size()));
      break;
    }
    case ObjectiveKind::Sc: {
      for (double& u : eu) u = 1.0 - u;
      v = scaled_power_mean_sum(eu, spec.p);
      break;
    }
    case ObjectiveKind::ScMax: {
      double m = 0.0;
      for (double u : eu) m = std::max(m, 1.0 - u);
      v = m;
      break;
    }
  }
  return {v, Convention::AggregateOfExpectations};
}

ObjectiveValue eval_default(const ObjectiveSpec& spec, const Profile& x,
                            const FacilityDistribution& dist) {
  return default_convention(spec) == Convention::ExpectedAggregate
             ? eval_expected_aggregate(spec, x, dist)
             : eval_aggregate_of_expectations(spec, x, dist);
}

}  // namespace ofl
