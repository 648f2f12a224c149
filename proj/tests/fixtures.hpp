#pragma once

#include <random>

#include "aoa/array.hpp"

namespace fixtures {

inline aoa::Array oa4() { return aoa::Array(2, {{1, 1, 1}, {1, 2, 2}, {2, 1, 2}, {2, 2, 1}}); }

inline aoa::Array t0() { return aoa::Array(2, {{1, 1, 1, 1}, {1, 1, 2, 2}, {2, 2, 1, 2}, {2, 2, 2, 1}}); }

inline aoa::Array random_array(std::mt19937_64& rng, int n, int k, int s) {
  aoa::Array a(n, k, s);
  std::uniform_int_distribution<int> lv(1, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) a.set(i, j, lv(rng));
  return a;
}

// Random shape within the given caps, k >= kmin.
inline aoa::Array random_shape(std::mt19937_64& rng, int nmax, int kmax, int smax, int kmin = 2) {
  std::uniform_int_distribution<int> n(1, nmax), k(kmin, kmax), s(2, smax);
  return random_array(rng, n(rng), k(rng), s(rng));
}

}  // namespace fixtures
