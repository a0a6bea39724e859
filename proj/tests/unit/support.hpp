#pragma once

#include "kkmass/types.hpp"

#include <random>

namespace kkmass::testing {

inline CVec random_spinor(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(d(rng), d(rng));
  return v;
}

inline Vec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v / v.norm();
}

/// A point with base radius in [r_lo, r_hi] and fiber coordinates in [0, 1).
inline Vec random_point(int k, int f, double r_lo, double r_hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(k + f);
  x.head(k) = (r_lo + (r_hi - r_lo) * u(rng)) * random_unit(k, rng);
  for (int a = 0; a < f; ++a) x[k + a] = u(rng);
  return x;
}

}  // namespace kkmass::testing
