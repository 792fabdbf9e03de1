// Timing comparison between the serial reference path and the OpenMP path
// on the two exhaustive kernels (deviation search, worst-ratio search).
// Also asserts that both paths return identical results, which is the
// contract the parallel reductions are designed around.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "ofl/adversary.hpp"
#include "ofl/mechanisms.hpp"
#include "ofl/objectives.hpp"
#include "ofl/truthfulness.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const char* label, double serial_s, double parallel_s) {
  std::printf("%-34s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n",
              label, serial_s, parallel_s, serial_s / parallel_s);
}

bool same_witness(const std::optional<ofl::DeviationWitness>& a,
                  const std::optional<ofl::DeviationWitness>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->profile == b->profile && a->agent_set == b->agent_set &&
         a->misreports == b->misreports;
}

}  // namespace

int main() {
  using namespace ofl;

  int failures = 0;

  {
    // Coalition deviation search: n = 3, grid 1/25, coalitions up to 2.
    const MechanismSpec mech = MechanismSpec::square_weighted();
    TruthCheckConfig cfg;

    cfg.policy = ExecPolicy::Serial;
    auto t0 = Clock::now();
    const auto ws = check_gsp(mech, 3, 1.0 / 25.0, 2, cfg);
    const double serial_s = seconds_since(t0);

    cfg.policy = ExecPolicy::Parallel;
    t0 = Clock::now();
    const auto wp = check_gsp(mech, 3, 1.0 / 25.0, 2, cfg);
    const double parallel_s = seconds_since(t0);

    report("verify-gsp square-weighted n=3", serial_s, parallel_s);
    if (!same_witness(ws, wp)) {
      std::printf("  MISMATCH: serial and parallel GSP results differ\n");
      ++failures;
    }
  }

  {
    // Worst-ratio search: majority vote / su:2, full n=2 grid at 1e-3.
    const MechanismSpec mech = MechanismSpec::majority_vote();
    const ObjectiveSpec spec = ObjectiveSpec::su(2.0);
    SearchConfig cfg;
    cfg.grid_step = 1e-3;

    cfg.policy = ExecPolicy::Serial;
    auto t0 = Clock::now();
    const RatioReport rs = search_worst_ratio(mech, spec, cfg);
    const double serial_s = seconds_since(t0);

    cfg.policy = ExecPolicy::Parallel;
    t0 = Clock::now();
    const RatioReport rp = search_worst_ratio(mech, spec, cfg);
    const double parallel_s = seconds_since(t0);

    report("search-ratio majority-vote su:2", serial_s, parallel_s);
    if (rs.worst_ratio != rp.worst_ratio || !(rs.witness == rp.witness)) {
      std::printf("  MISMATCH: serial and parallel search results differ\n");
      ++failures;
    }
  }

  if (failures) {
    std::printf("%d mismatch(es)\n", failures);
    return EXIT_FAILURE;
  }
  std::printf("serial and parallel paths agree on both kernels\n");
  return EXIT_SUCCESS;
}
