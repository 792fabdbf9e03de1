#include "ofl/truthfulness.hpp"

#include <atomic>
#include <bit>
#include <cmath>

namespace ofl {

namespace {

// grid_step must be 1/k for an integer k <= 200; returns k.
int grid_denominator(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw OutOfRangeError("grid step must lie in (0,1]");
  }
  const double inv = 1.0 / grid_step;
  const long long k = std::llround(inv);
  if (k < 1 || k > 200 || std::abs(inv - static_cast<double>(k)) > 1e-6) {
    throw OutOfRangeError(
        "grid step must be 1/k for an integer k <= 200; got " +
        format_real(grid_step));
  }
  return static_cast<int>(k);
}

uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  uint64_t v = 1;
  for (int i = 1; i <= r; ++i) v = v * static_cast<uint64_t>(n - r + i) / i;
  return v;
}

// Sorted multisets of size n over {0..k} = combinations with repetition.
uint64_t multiset_count(int k, int n) { return binomial(k + n, n); }

// Iterates grid-index vectors i_0 <= i_1 <= ... <= i_{n-1} with i_0 fixed,
// in lexicographic order.
struct MultisetIter {
  int k;
  std::vector<int> idx;

  MultisetIter(int k_, int n, int first) : k(k_), idx(n, first) {}

  bool advance() {
    for (int j = static_cast<int>(idx.size()) - 1; j >= 1; --j) {
      if (idx[j] < k) {
        const int v = ++idx[j];
        for (size_t t = j + 1; t < idx.size(); ++t) idx[t] = v;
        return true;
      }
    }
    return false;
  }
};

// Parallel-over-first-coordinate driver. Each block is scanned serially in
// lexicographic order, so the per-block result is that block's first
// witness; the global answer is the first non-empty block slot. That makes
// the outcome independent of thread schedule.
template <typename ScanFn>
std::optional<DeviationWitness> block_search(int k, int n, ExecPolicy policy,
                                             const ScanFn& scan) {
  std::vector<std::optional<DeviationWitness>> slot(k + 1);
  std::atomic<int> best_block{k + 1};
  const bool par = policy == ExecPolicy::Parallel;
#pragma omp parallel for schedule(dynamic, 1) if (par)
  for (int v0 = 0; v0 <= k; ++v0) {
    if (v0 > best_block.load(std::memory_order_relaxed)) continue;
    MultisetIter it(k, n, v0);
    std::vector<double> values(n);
    do {
      for (int j = 0; j < n; ++j) {
        values[j] = static_cast<double>(it.idx[j]) / k;
      }
      auto w = scan(values, it.idx);
      if (w) {
        slot[v0] = std::move(w);
        int cur = best_block.load();
        while (v0 < cur && !best_block.compare_exchange_weak(cur, v0)) {
        }
        break;
      }
    } while (it.advance());
  }
  for (auto& s : slot) {
    if (s) return std::move(s);
  }
  return std::nullopt;
}

}  // namespace

uint64_t sp_eval_count(int n, double grid_step) {
  const int k = grid_denominator(grid_step);
  return multiset_count(k, n) * static_cast<uint64_t>(n) *
         static_cast<uint64_t>(k + 1);
}

uint64_t gsp_eval_count(int n, double grid_step, int max_coalition) {
  const int k = grid_denominator(grid_step);
  uint64_t per_profile = 0;
  uint64_t pow = 1;
  for (int s = 1; s <= max_coalition; ++s) {
    pow *= static_cast<uint64_t>(k + 1);
    per_profile += binomial(n, s) * pow;
  }
  return multiset_count(k, n) * per_profile;
}

std::optional<DeviationWitness> check_sp(const MechanismSpec& mech, int n,
                                         double grid_step,
                                         const TruthCheckConfig& cfg) {
  if (n < 1 || n > 4) {
    throw OutOfRangeError("check_sp handles n in [1,4] exhaustively");
  }
  const int k = grid_denominator(grid_step);
  const uint64_t need = sp_eval_count(n, grid_step);
  if (need > cfg.max_evals) {
    throw BudgetExceeded("check_sp needs " + std::to_string(need) +
                         " evaluations, budget " +
                         std::to_string(cfg.max_evals));
  }

  auto scan = [&](const std::vector<double>& values,
                  const std::vector<int>& gidx)
      -> std::optional<DeviationWitness> {
    Profile x = Profile::make(values);
    const FacilityDistribution dist0 = run_mechanism(mech, x);
    std::vector<double> reports(values);
    for (int a = 0; a < n; ++a) {
      const double u0 = agent_utility(x[a], dist0);
      for (int m = 0; m <= k; ++m) {
        if (m == gidx[a]) continue;  // truthful report: gain is exactly 0
        reports[a] = static_cast<double>(m) / k;
        const FacilityDistribution dist1 =
            run_mechanism(mech, Profile::make(reports));
        const double gain = agent_utility(x[a], dist1) - u0;
        if (gain > kStrictGainTol) {
          return DeviationWitness{x, {a}, {static_cast<double>(m) / k}, {gain}};
        }
      }
      reports[a] = values[a];
    }
    return std::nullopt;
  };
  return block_search(k, n, cfg.policy, scan);
}

std::optional<DeviationWitness> check_gsp(const MechanismSpec& mech, int n,
                                          double grid_step, int max_coalition,
                                          const TruthCheckConfig& cfg) {
  if (n < 1 || n > 3) {
    throw OutOfRangeError("check_gsp handles n in [1,3] exhaustively");
  }
  if (max_coalition < 1 || max_coalition > n) {
    throw OutOfRangeError("max_coalition must lie in [1, n]");
  }
  const int k = grid_denominator(grid_step);
  const uint64_t need = gsp_eval_count(n, grid_step, max_coalition);
  if (need > cfg.max_evals) {
    throw BudgetExceeded("check_gsp needs " + std::to_string(need) +
                         " evaluations, budget " +
                         std::to_string(cfg.max_evals));
  }

  // Coalitions as bitmasks in increasing numeric order = increasing
  // lexicographic order on the sorted member lists, grouped by size.
  std::vector<int> masks;
  for (int s = 1; s <= max_coalition; ++s) {
    for (int mask = 1; mask < (1 << n); ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) == s) masks.push_back(mask);
    }
  }

  auto scan = [&](const std::vector<double>& values,
                  const std::vector<int>&) -> std::optional<DeviationWitness> {
    Profile x = Profile::make(values);
    const FacilityDistribution dist0 = run_mechanism(mech, x);
    std::vector<double> u0(n);
    for (int a = 0; a < n; ++a) u0[a] = agent_utility(x[a], dist0);

    std::vector<double> reports(values);
    for (int mask : masks) {
      std::vector<int> members;
      for (int a = 0; a < n; ++a) {
        if (mask & (1 << a)) members.push_back(a);
      }
      const int s = static_cast<int>(members.size());
      std::vector<int> digits(s, 0);
      while (true) {
        reports = values;
        for (int t = 0; t < s; ++t) {
          reports[members[t]] = static_cast<double>(digits[t]) / k;
        }
        const FacilityDistribution dist1 =
            run_mechanism(mech, Profile::make(reports));
        std::vector<double> gains(s);
        bool all_gain = true;
        for (int t = 0; t < s; ++t) {
          gains[t] = agent_utility(x[members[t]], dist1) - u0[members[t]];
          if (!(gains[t] > kStrictGainTol)) {
            all_gain = false;
            break;
          }
        }
        if (all_gain) {
          std::vector<double> mis(s);
          for (int t = 0; t < s; ++t) {
            mis[t] = static_cast<double>(digits[t]) / k;
          }
          return DeviationWitness{x, members, mis, gains};
        }
        // odometer: rightmost digit fastest
        int j = s - 1;
        while (j >= 0 && digits[j] == k) {
          digits[j] = 0;
          --j;
        }
        if (j < 0) break;
        ++digits[j];
      }
    }
    return std::nullopt;
  };
  return block_search(k, n, cfg.policy, scan);
}

std::vector<double> replay_witness_gains(const MechanismSpec& mech,
                                         const DeviationWitness& w) {
  if (w.agent_set.size() != w.misreports.size()) {
    throw ConfigError("witness agent_set/misreports size mismatch");
  }
  const FacilityDistribution dist0 = run_mechanism(mech, w.profile);
  std::vector<double> reports = w.profile.locations();
  for (size_t t = 0; t < w.agent_set.size(); ++t) {
    const int a = w.agent_set[t];
    if (a < 0 || a >= w.profile.n()) throw ConfigError("witness agent index");
    reports[static_cast<size_t>(a)] = w.misreports[t];
  }
  const FacilityDistribution dist1 =
      run_mechanism(mech, Profile::make(reports));
  std::vector<double> gains(w.agent_set.size());
  for (size_t t = 0; t < w.agent_set.size(); ++t) {
    const double xt = w.profile[w.agent_set[t]];
    gains[t] = agent_utility(xt, dist1) - agent_utility(xt, dist0);
  }
  return gains;
}

}  // namespace ofl
