#include "ofl/mechanisms.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace ofl {

FacilityDistribution run_majority_vote(const Profile& x) {
  const SideCounts c = side_counts(x);
  return FacilityDistribution::point(c.n1 <= c.n2 ? 0.0 : 1.0);
}

FacilityDistribution run_uniform(const Profile&) {
  return FacilityDistribution::uniform_unit();
}

FacilityDistribution run_square_weighted(const Profile& x) {
  const SideCounts c = side_counts(x);
  const double n1 = c.n1, n2 = c.n2;
  const double p0 = n2 * n2 / (n1 * n1 + n2 * n2);
  return FacilityDistribution::endpoint_lottery(p0);
}

FacilityDistribution run_power_weighted(const Profile& x, double p) {
  if (!(p > 0.0 && (p <= kMaxFiniteP || std::isinf(p)))) {
    throw OutOfRangeError("power-weighted exponent must be in (0,1e6] or inf");
  }
  const SideCounts c = side_counts(x);
  if (c.n1 == 0) return FacilityDistribution::point(0.0);
  if (c.n2 == 0) return FacilityDistribution::point(1.0);
  // P0 = (n2^2 + 2^p n1 n2) / (n1^2 + n2^2 + 2^{p+1} n1 n2). Multiplying
  // through by t = 2^{-p} keeps every term finite for huge p and lands on
  // the analytic limit P0 = 1/2 at t = 0.
  const double t = std::isinf(p) ? 0.0 : std::exp2(-p);
  const double n1 = c.n1, n2 = c.n2;
  const double p0 = (n2 * n2 * t + n1 * n2) /
                    ((n1 * n1 + n2 * n2) * t + 2.0 * n1 * n2);
  return FacilityDistribution::endpoint_lottery(p0);
}

FacilityDistribution run_two_candidate_threshold(const Profile& x, double a,
                                                 double b, int cutoff) {
  if (!(a >= 0.0 && a < b && b <= 1.0)) {
    throw ConfigError("threshold candidates need 0 <= a < b <= 1");
  }
  if (cutoff < 0 || cutoff > x.n() + 1) {
    throw OutOfRangeError("threshold cutoff must lie in [0, n+1]");
  }
  int k = 0;
  for (double v : x.span()) {
    if (std::abs(v - a) < std::abs(v - b)) ++k;  // equidistant counts to b
  }
  return FacilityDistribution::point(k >= cutoff ? a : b);
}

// ---------------------------------------------------------------------------
// Custom registry.
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, CustomMechanismFn>& custom_registry() {
  static std::map<std::string, CustomMechanismFn> reg;
  return reg;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_custom_mechanism(const std::string& name,
                               CustomMechanismFn fn) {
  if (name.empty() || !fn) throw ConfigError("bad custom mechanism");
  std::lock_guard<std::mutex> lock(registry_mutex());
  custom_registry()[name] = std::move(fn);
}

bool custom_mechanism_exists(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return custom_registry().count(name) > 0;
}

void register_builtin_custom_mechanisms() {
  register_custom_mechanism("dictator-at-x1", [](const Profile& x) {
    return FacilityDistribution::point(x[0]);
  });
  register_custom_mechanism("average", [](const Profile& x) {
    const auto& v = x.locations();
    const double mean =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return FacilityDistribution::point(mean);
  });
}

// ---------------------------------------------------------------------------
// MechanismSpec.
// ---------------------------------------------------------------------------

MechanismSpec MechanismSpec::majority_vote() {
  MechanismSpec s;
  s.variant = MechanismVariant::MajorityVote;
  return s;
}
MechanismSpec MechanismSpec::uniform() {
  MechanismSpec s;
  s.variant = MechanismVariant::UniformUnit;
  return s;
}
MechanismSpec MechanismSpec::square_weighted() {
  MechanismSpec s;
  s.variant = MechanismVariant::SquareWeighted;
  return s;
}

MechanismSpec MechanismSpec::power_weighted(double p) {
  if (!(p > 0.0 && (p <= kMaxFiniteP || std::isinf(p)))) {
    throw OutOfRangeError("power-weighted exponent must be in (0,1e6] or inf");
  }
  MechanismSpec s;
  s.variant = MechanismVariant::PowerWeighted;
  s.p = p;
  return s;
}

MechanismSpec MechanismSpec::threshold(double a, double b, int cutoff) {
  if (!(a >= 0.0 && a < b && b <= 1.0)) {
    throw ConfigError("threshold candidates need 0 <= a < b <= 1");
  }
  if (cutoff < 0) throw OutOfRangeError("threshold cutoff must be >= 0");
  MechanismSpec s;
  s.variant = MechanismVariant::TwoCandidateThreshold;
  s.a = a;
  s.b = b;
  s.cutoff = cutoff;
  return s;
}

MechanismSpec MechanismSpec::custom(const std::string& registered_name) {
  if (!custom_mechanism_exists(registered_name)) {
    throw ConfigError("unknown custom mechanism '" + registered_name + "'");
  }
  MechanismSpec s;
  s.variant = MechanismVariant::Custom;
  s.custom_name = registered_name;
  return s;
}

namespace {

double parse_real_or_inf(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
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

MechanismSpec MechanismSpec::parse(const std::string& name) {
  if (name == "majority-vote") return majority_vote();
  if (name == "uniform") return uniform();
  if (name == "square-weighted") return square_weighted();
  if (name.rfind("power-weighted:", 0) == 0) {
    return power_weighted(parse_real_or_inf(name.substr(15), "exponent"));
  }
  if (name.rfind("threshold:", 0) == 0) {
    std::istringstream in(name.substr(10));
    std::string fa, fb, fc;
    if (!std::getline(in, fa, ',') || !std::getline(in, fb, ',') ||
        !std::getline(in, fc)) {
      throw ConfigError("threshold mechanism needs threshold:<a>,<b>,<cutoff>");
    }
    const double a = parse_real_or_inf(fa, "candidate a");
    const double b = parse_real_or_inf(fb, "candidate b");
    const double c = parse_real_or_inf(fc, "cutoff");
    if (c != std::floor(c) || c < 0) {
      throw ConfigError("threshold cutoff must be a nonnegative integer");
    }
    return threshold(a, b, static_cast<int>(c));
  }
  if (custom_mechanism_exists(name)) return custom(name);
  throw ConfigError(
      "unknown mechanism '" + name +
      "' (expected majority-vote, uniform, square-weighted, "
      "power-weighted:<p|inf>, threshold:<a>,<b>,<cutoff>, or a registered "
      "custom name)");
}

std::string MechanismSpec::name() const {
  switch (variant) {
    case MechanismVariant::MajorityVote: return "majority-vote";
    case MechanismVariant::UniformUnit: return "uniform";
    case MechanismVariant::SquareWeighted: return "square-weighted";
    case MechanismVariant::PowerWeighted:
      return "power-weighted:" + format_real(p);
    case MechanismVariant::TwoCandidateThreshold:
      return "threshold:" + format_real(a) + "," + format_real(b) + "," +
             std::to_string(cutoff);
    case MechanismVariant::Custom: return custom_name;
  }
  return "?";
}

FacilityDistribution run_mechanism(const MechanismSpec& spec,
                                   const Profile& x) {
  switch (spec.variant) {
    case MechanismVariant::MajorityVote: return run_majority_vote(x);
    case MechanismVariant::UniformUnit: return run_uniform(x);
    case MechanismVariant::SquareWeighted: return run_square_weighted(x);
    case MechanismVariant::PowerWeighted: return run_power_weighted(x, spec.p);
    case MechanismVariant::TwoCandidateThreshold:
      return run_two_candidate_threshold(x, spec.a, spec.b, spec.cutoff);
    case MechanismVariant::Custom: {
      CustomMechanismFn fn;
      {
        std::lock_guard<std::mutex> lock(registry_mutex());
        auto it = custom_registry().find(spec.custom_name);
        if (it == custom_registry().end()) {
          throw ConfigError("custom mechanism '" + spec.custom_name +
                            "' is not registered");
        }
        fn = it->second;  // call outside the lock; handles may recurse
      }
      return fn(x);
    }
  }
  throw ConfigError("unhandled mechanism variant");
}

}  // namespace ofl
