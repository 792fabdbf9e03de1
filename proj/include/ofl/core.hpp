#pragma once
// Core domain types for obnoxious facility location on the unit interval:
// sorted location profiles, facility distributions (deterministic point,
// finite-support lottery, or uniform), and per-agent utility/cost.
//
// Utility is distance: u(x_i, y) = |x_i - y|; cost is c = 1 - u. All values
// live in [0,1]. Every type here is an immutable value after construction and
// safe to share across threads.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ofl {

// ---------------------------------------------------------------------------
// Errors. Each maps to a CLI exit class (see tools/): config errors exit 2,
// numeric failures exit 3, budget exhaustion exit 4.
// ---------------------------------------------------------------------------

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct OutOfRangeError : ConfigError {
  using ConfigError::ConfigError;
};
struct EmptyProfileError : ConfigError {
  using ConfigError::ConfigError;
};
struct SpecNotSupported : ConfigError {
  using ConfigError::ConfigError;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureFailure : NumericError {
  using NumericError::NumericError;
};
struct InfeasibleError : NumericError {
  using NumericError::NumericError;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Profile: agent locations on [0,1], kept sorted ascending.
// ---------------------------------------------------------------------------

class Profile {
 public:
  // Validates entries against [0,1] and sorts. Throws OutOfRangeError /
  // EmptyProfileError.
  static Profile make(std::vector<double> raw);

  int n() const { return static_cast<int>(xs_.size()); }
  double operator[](int i) const { return xs_[static_cast<size_t>(i)]; }
  const std::vector<double>& locations() const { return xs_; }
  std::span<const double> span() const { return xs_; }

  // Mirror image 1 - x, re-sorted. Used by reflection-symmetry properties.
  Profile reflected() const;

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.xs_ == b.xs_;
  }

 private:
  explicit Profile(std::vector<double> sorted) : xs_(std::move(sorted)) {}
  std::vector<double> xs_;
};

// Agents on each side of 1/2; the boundary point 1/2 itself counts to the
// left (n1). Majority-style mechanisms depend on this closed-left rule.
struct SideCounts {
  int n1 = 0;
  int n2 = 0;
};

SideCounts side_counts(std::span<const double> xs);
inline SideCounts side_counts(const Profile& x) { return side_counts(x.span()); }

// ---------------------------------------------------------------------------
// FacilityDistribution: the (possibly randomized) mechanism output.
// ---------------------------------------------------------------------------

class FacilityDistribution {
 public:
  enum class Kind { Point, Discrete, UniformUnit };

  static FacilityDistribution point(double y);
  // Atoms (y, prob). Duplicate support points are merged; probabilities are
  // renormalized when |sum - 1| <= 1e-9 and rejected beyond that.
  static FacilityDistribution discrete(
      std::vector<std::pair<double, double>> atoms);
  static FacilityDistribution uniform_unit();
  // Two-point lottery on the endpoints {0: p0, 1: 1-p0}; collapses to a
  // Point when p0 is 0 or 1.
  static FacilityDistribution endpoint_lottery(double p0);

  Kind kind() const { return kind_; }
  bool is_point() const { return kind_ == Kind::Point; }
  // Valid for Point only.
  double point_location() const { return support_[0]; }
  // Valid for Point/Discrete.
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& prob() const { return prob_; }

  friend bool operator==(const FacilityDistribution& a,
                         const FacilityDistribution& b) {
    return a.kind_ == b.kind_ && a.support_ == b.support_ &&
           a.prob_ == b.prob_;
  }

 private:
  FacilityDistribution(Kind k, std::vector<double> s, std::vector<double> p)
      : kind_(k), support_(std::move(s)), prob_(std::move(p)) {}
  Kind kind_;
  std::vector<double> support_;  // empty for UniformUnit
  std::vector<double> prob_;
};

// ---------------------------------------------------------------------------
// Per-agent utility/cost.
// ---------------------------------------------------------------------------

// Expected distance E_{y~dist} |x_i - y|. Under UniformUnit this is the
// closed form (2 x_i^2 - 2 x_i + 1) / 2.
double agent_utility(double x_i, const FacilityDistribution& dist);

// 1 - agent_utility; always in [0,1].
double agent_cost(double x_i, const FacilityDistribution& dist);

// ---------------------------------------------------------------------------
// Execution policy and work budget for the exhaustive searches.
// ---------------------------------------------------------------------------

// Serial runs the reference single-thread path; Parallel enables the OpenMP
// kernels. Results are bit-identical across policies (reductions resolve to
// the lexicographically smallest result, never the first thread to finish).
enum class ExecPolicy { Serial, Parallel };

// Cap on deviation/ratio evaluations for one exhaustive call. Defaults to
// 4e9, overridable through the OFL_EVAL_BUDGET environment variable.
uint64_t default_eval_budget();

// ---------------------------------------------------------------------------
// Shared numeric conventions.
// ---------------------------------------------------------------------------

inline constexpr double kProbNormalizeTol = 1e-9;   // Discrete prob sum slack
inline constexpr double kStrictGainTol = 1e-9;      // deviation counts as gain
inline constexpr double kQuadratureAbsTol = 1e-10;  // uniform-expectation target
inline constexpr double kMaxFiniteP = 1e6;          // p cap for Su/Sc

// Fixed float formatting for machine-readable reports: 12 significant digits,
// lowercase "inf" sentinel. Keeps CSV byte-stable across runs.
std::string format_real(double v);

}  // namespace ofl
