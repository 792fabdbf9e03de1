#include "ofl/adversary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

namespace ofl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double alg_value(const MechanismSpec& mech, const ObjectiveSpec& spec,
                 const Profile& x) {
  return eval_default(spec, x, run_mechanism(mech, x)).value;
}

}  // namespace

double ratio_at(const MechanismSpec& mech, const ObjectiveSpec& spec,
                const Profile& x) {
  const double alg = alg_value(mech, spec, x);
  const double opt = opt_best(spec, x).value;
  const double num = spec.is_utility() ? opt : alg;
  const double den = spec.is_utility() ? alg : opt;
  if (den <= 0.0) return num <= 0.0 ? 1.0 : kInf;
  return num / den;
}

std::optional<ClaimedBound> claimed_bound(const MechanismSpec& mech,
                                          const ObjectiveSpec& spec) {
  switch (mech.variant) {
    case MechanismVariant::MajorityVote:
      if (spec.kind == ObjectiveKind::Su || spec.kind == ObjectiveKind::Sc) {
        return ClaimedBound{std::pow(std::exp2(spec.p) + 1.0, 1.0 / spec.p),
                            false};
      }
      if (spec.kind == ObjectiveKind::SuMax ||
          spec.kind == ObjectiveKind::ScMax) {
        return ClaimedBound{2.0, false};
      }
      return std::nullopt;  // min utility / geometric mean: unbounded
    case MechanismVariant::PowerWeighted:
      if (spec.kind == ObjectiveKind::Su && mech.p == spec.p) {
        if (spec.p >= 1.0) {
          return ClaimedBound{
              std::pow((std::exp2(spec.p) + 1.0) /
                           (std::exp2(spec.p - 1.0) + 1.0),
                       1.0 / spec.p),
              false};
        }
        return ClaimedBound{std::exp2(1.0 / spec.p), false};
      }
      if (spec.kind == ObjectiveKind::SuMax && std::isinf(mech.p)) {
        return ClaimedBound{4.0 / 3.0, false};
      }
      return std::nullopt;
    case MechanismVariant::SquareWeighted:
      if (spec.kind == ObjectiveKind::Sc) {
        // proven for p = 1; conjectured to stay 2 for every other p >= 1
        return ClaimedBound{2.0, spec.p != 1.0};
      }
      if (spec.kind == ObjectiveKind::ScMax) return ClaimedBound{2.0, false};
      return std::nullopt;
    case MechanismVariant::UniformUnit:
      if (spec.kind == ObjectiveKind::SuGeoMean) {
        return ClaimedBound{std::sqrt(2.0) + 1.0, false};
      }
      return std::nullopt;  // min utility guarantee grows with n
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Worst-ratio search.
// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  double ratio = -1.0;
  std::vector<double> xs;  // sorted

  bool beats(const Candidate& o) const {
    if (xs.empty()) return false;
    if (o.xs.empty()) return true;
    if (ratio != o.ratio) return ratio > o.ratio;
    return xs < o.xs;  // deterministic tie-break
  }
};

uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  uint64_t v = 1;
  for (int i = 1; i <= r; ++i) v = v * static_cast<uint64_t>(n - r + i) / i;
  return v;
}

// Throws on exhaustion; OpenMP loop bodies catch and set the flag so the
// exception never unwinds across a parallel region, then the caller rethrows
// via throw_if_exceeded().
class EvalCounter {
 public:
  explicit EvalCounter(uint64_t cap) : cap_(cap) {}
  void charge(uint64_t k = 1) {
    if (used_.fetch_add(k, std::memory_order_relaxed) + k > cap_) {
      tripped_.store(true, std::memory_order_relaxed);
      throw BudgetExceeded("ratio search exceeded its evaluation budget of " +
                           std::to_string(cap_));
    }
  }
  void mark_tripped() { tripped_.store(true, std::memory_order_relaxed); }
  bool tripped() const { return tripped_.load(std::memory_order_relaxed); }
  void throw_if_tripped() const {
    if (tripped()) {
      throw BudgetExceeded("ratio search exceeded its evaluation budget of " +
                           std::to_string(cap_));
    }
  }

 private:
  std::atomic<uint64_t> used_{0};
  std::atomic<bool> tripped_{false};
  uint64_t cap_;
};

double eval_ratio(const MechanismSpec& mech, const ObjectiveSpec& spec,
                  const std::vector<double>& xs, EvalCounter& counter) {
  counter.charge();
  return ratio_at(mech, spec, Profile::make(xs));
}

// Greedy coordinate ascent with step halving from `step0` down to 1e-6.
Candidate hill_climb(const MechanismSpec& mech, const ObjectiveSpec& spec,
                     std::vector<double> xs, double step0,
                     EvalCounter& counter) {
  constexpr int kClimbEvalCap = 100000;
  double r = eval_ratio(mech, spec, xs, counter);
  int evals = 1;
  double s = step0;
  while (s >= 1e-6 && evals < kClimbEvalCap && !std::isinf(r)) {
    bool improved = false;
    for (size_t i = 0; i < xs.size() && evals < kClimbEvalCap; ++i) {
      for (double dir : {+1.0, -1.0}) {
        const double moved = std::clamp(xs[i] + dir * s, 0.0, 1.0);
        if (moved == xs[i]) continue;
        const double keep = xs[i];
        xs[i] = moved;
        const double rc = eval_ratio(mech, spec, xs, counter);
        ++evals;
        if (rc > r) {
          r = rc;
          improved = true;
        } else {
          xs[i] = keep;
        }
        if (std::isinf(r)) break;
      }
    }
    if (!improved) s *= 0.5;
  }
  std::sort(xs.begin(), xs.end());
  return {r, std::move(xs)};
}

// Exhaustive sorted-multiset sweep on the grid {0, 1/k, ..., 1}^n,
// parallelized over the first coordinate. Returns the per-n best.
Candidate grid_phase(const MechanismSpec& mech, const ObjectiveSpec& spec,
                     int n, int k, ExecPolicy policy, EvalCounter& counter) {
  std::vector<Candidate> block_best(static_cast<size_t>(k) + 1);
  const bool par = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(dynamic, 1) if (par)
  for (int v0 = 0; v0 <= k; ++v0) {
    if (counter.tripped()) continue;
    try {
      std::vector<int> idx(static_cast<size_t>(n), v0);
      std::vector<double> xs(static_cast<size_t>(n));
      Candidate local;
      while (true) {
        for (int j = 0; j < n; ++j) xs[j] = static_cast<double>(idx[j]) / k;
        Candidate cur{eval_ratio(mech, spec, xs, counter), xs};
        if (cur.beats(local)) local = std::move(cur);
        int j = n - 1;
        while (j >= 1 && idx[j] == k) --j;
        if (j < 1) break;
        const int v = ++idx[j];
        for (int t = j + 1; t < n; ++t) idx[t] = v;
      }
      block_best[v0] = std::move(local);
    } catch (const BudgetExceeded&) {
      counter.mark_tripped();
    }
  }
  counter.throw_if_tripped();
  Candidate best;
  for (auto& c : block_best) {
    if (c.beats(best)) best = std::move(c);
  }
  return best;
}

std::vector<double> random_profile(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> xs(static_cast<size_t>(n));
  for (double& v : xs) {
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // uniform in [0,1)
  }
  return xs;
}

}  // namespace

RatioReport search_worst_ratio(const MechanismSpec& mech,
                               const ObjectiveSpec& spec,
                               const SearchConfig& config) {
  if (config.n_min < 1 || config.n_max > 8 || config.n_min > config.n_max) {
    throw OutOfRangeError("search n range must satisfy 1 <= n_min <= n_max <= 8");
  }
  if (!(config.grid_step >= 1e-6 && config.grid_step <= 0.5)) {
    throw OutOfRangeError("grid_step must lie in [1e-6, 0.5]");
  }
  if (config.restarts < 0) throw OutOfRangeError("restarts must be >= 0");
  const int k = static_cast<int>(std::llround(1.0 / config.grid_step));

  EvalCounter counter(config.max_evals);

  // Phase-1 cost precheck so absurd grids fail fast instead of mid-run.
  uint64_t phase1 = 0;
  for (int n = config.n_min; n <= config.n_max; ++n) {
    if (n <= 2 || (n == 3 && k <= 20)) phase1 += binomial(k + n, n);
  }
  if (phase1 > config.max_evals) {
    throw BudgetExceeded("exhaustive phase needs " + std::to_string(phase1) +
                         " evaluations, budget " +
                         std::to_string(config.max_evals));
  }

  std::vector<Candidate> seeds;  // climb starting points, deterministic order
  for (int n = config.n_min; n <= config.n_max; ++n) {
    if (n <= 2 || (n == 3 && k <= 20)) {
      seeds.push_back(grid_phase(mech, spec, n, k, config.policy, counter));
    } else {
      // no exhaustive pass at this n; seed the climb from a fixed profile
      std::vector<double> xs(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) {
        xs[j] = n == 1 ? 0.5 : static_cast<double>(j) / (n - 1);
      }
      seeds.push_back(Candidate{-1.0, std::move(xs)});
    }
    for (int r = 0; r < config.restarts; ++r) {
      const uint64_t mix = config.seed ^
                           (0x9e3779b97f4a7c15ULL *
                            (static_cast<uint64_t>(r) * 16 +
                             static_cast<uint64_t>(n) + 1));
      seeds.push_back(Candidate{-1.0, random_profile(n, mix)});
    }
  }

  std::vector<Candidate> climbed(seeds.size());
  const bool par = config.policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(dynamic, 1) if (par)
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (counter.tripped()) continue;
    try {
      climbed[i] =
          hill_climb(mech, spec, seeds[i].xs, config.grid_step, counter);
    } catch (const BudgetExceeded&) {
      counter.mark_tripped();
    }
  }
  counter.throw_if_tripped();

  Candidate best;
  for (auto& c : seeds) {
    if (c.ratio >= 0.0 && c.beats(best)) best = c;
  }
  for (auto& c : climbed) {
    if (c.beats(best)) best = std::move(c);
  }

  RatioReport report{mech,
                     spec,
                     best.ratio,
                     Profile::make(best.xs),
                     std::nullopt,
                     std::nullopt,
                     false,
                     false,
                     std::isinf(best.ratio),
                     config};
  if (auto cb = claimed_bound(mech, spec)) {
    report.claimed = cb->value;
    report.slack = cb->value - best.ratio;
    report.conjecture = cb->conjecture;
    report.falsification = best.ratio > cb->value + 1e-7;
  }
  return report;
}

std::vector<RatioReport> bound_curve(const MechanismSpec& mech,
                                     const std::string& family,
                                     const std::vector<double>& p_values,
                                     const SearchConfig& config) {
  if (family != "su" && family != "sc") {
    throw ConfigError("bound_curve family must be 'su' or 'sc'");
  }
  std::vector<RatioReport> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    ObjectiveSpec spec =
        family == "su"
            ? (std::isinf(p) ? ObjectiveSpec::su_max() : ObjectiveSpec::su(p))
            : (std::isinf(p) ? ObjectiveSpec::sc_max() : ObjectiveSpec::sc(p));
    out.push_back(search_worst_ratio(mech, spec, config));
  }
  return out;
}

}  // namespace ofl
