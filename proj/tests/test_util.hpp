#pragma once
// Shared helpers for the test suite: a bit-stable uniform double generator
// (uniform_real_distribution is implementation-defined, so expected values
// would not be portable) and random profile construction.

#include <random>
#include <utility>
#include <vector>

#include "ofl/core.hpp"

namespace test_util {

inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline ofl::Profile random_profile(std::mt19937_64& rng, int n) {
  std::vector<double> xs(static_cast<size_t>(n));
  for (double& v : xs) v = u01(rng);
  return ofl::Profile::make(std::move(xs));
}

}  // namespace test_util
