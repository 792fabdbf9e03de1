#include "ofl/core.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace ofl {

Profile Profile::make(std::vector<double> raw) {
  if (raw.empty()) throw EmptyProfileError("profile must contain at least one location");
  for (double v : raw) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw OutOfRangeError("profile location " + std::to_string(v) +
                            " outside [0,1]");
    }
  }
  std::sort(raw.begin(), raw.end());
  return Profile(std::move(raw));
}

Profile Profile::reflected() const {
  std::vector<double> r(xs_.size());
  for (size_t i = 0; i < xs_.size(); ++i) r[xs_.size() - 1 - i] = 1.0 - xs_[i];
  // 1-x of a sorted vector, reversed, is sorted again; no re-validation needed.
  return Profile(std::move(r));
}

SideCounts side_counts(std::span<const double> xs) {
  SideCounts c;
  for (double v : xs) {
    if (v <= 0.5) {
      ++c.n1;
    } else {
      ++c.n2;
    }
  }
  return c;
}

FacilityDistribution FacilityDistribution::point(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw OutOfRangeError("facility location outside [0,1]");
  }
  return FacilityDistribution(Kind::Point, {y}, {1.0});
}

FacilityDistribution FacilityDistribution::discrete(
    std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw ConfigError("discrete distribution needs atoms");
  std::map<double, double> merged;
  double sum = 0.0;
  for (auto& [y, p] : atoms) {
    if (!(y >= 0.0 && y <= 1.0)) {
      throw OutOfRangeError("support point outside [0,1]");
    }
    if (!(p >= 0.0)) throw ConfigError("negative probability");
    merged[y] += p;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbNormalizeTol) {
    throw ConfigError("probabilities sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  std::vector<double> s, p;
  s.reserve(merged.size());
  p.reserve(merged.size());
  for (auto& [y, q] : merged) {
    if (q == 0.0) continue;  // drop dead atoms so Point collapse is exact
    s.push_back(y);
    p.push_back(q / sum);
  }
  if (s.empty()) throw ConfigError("all probabilities zero");
  if (s.size() == 1) return point(s[0]);
  return FacilityDistribution(Kind::Discrete, std::move(s), std::move(p));
}

FacilityDistribution FacilityDistribution::uniform_unit() {
  return FacilityDistribution(Kind::UniformUnit, {}, {});
}

FacilityDistribution FacilityDistribution::endpoint_lottery(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw ConfigError("p0 outside [0,1]");
  if (p0 == 1.0) return point(0.0);
  if (p0 == 0.0) return point(1.0);
  return discrete({{0.0, p0}, {1.0, 1.0 - p0}});
}

double agent_utility(double x_i, const FacilityDistribution& dist) {
  switch (dist.kind()) {
    case FacilityDistribution::Kind::Point:
      return std::abs(x_i - dist.point_location());
    case FacilityDistribution::Kind::Discrete: {
      double e = 0.0;
      const auto& s = dist.support();
      const auto& p = dist.prob();
      for (size_t k = 0; k < s.size(); ++k) e += p[k] * std::abs(x_i - s[k]);
      return e;
    }
    case FacilityDistribution::Kind::UniformUnit:
      // int_0^1 |x - y| dy = x^2/2 + (1-x)^2/2 = (2x^2 - 2x + 1)/2.
      return (2.0 * x_i * x_i - 2.0 * x_i + 1.0) / 2.0;
  }
  return 0.0;  // unreachable
}

double agent_cost(double x_i, const FacilityDistribution& dist) {
  return 1.0 - agent_utility(x_i, dist);
}

uint64_t default_eval_budget() {
  if (const char* env = std::getenv("OFL_EVAL_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 4'000'000'000ULL;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace ofl
