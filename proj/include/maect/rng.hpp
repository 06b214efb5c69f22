// Copyright (c) 2026 the maect authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic RNG with explicit distributions (no std::*_distribution, whose
// output is implementation-defined) and hierarchical seed derivation so each
// stage and purpose draws from its own stream.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace maect {

/// Derives a child seed from (parent, tag); different tags give independent
/// streams, so reseeding one purpose never perturbs the others.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n) via rejection.
  int randint(int n);

  /// Standard normal via the polar Box-Muller method.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Normal redrawn until within two standard deviations.
  double trunc_normal(double stddev);

  bool bernoulli(double p) { return uniform() < p; }

  /// k distinct values from [0, n), in random order (partial Fisher-Yates).
  std::vector<int> sample_without_replacement(int n, int k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[static_cast<std::size_t>(randint(i + 1))]);
  }

  Rng split(std::string_view tag) { return Rng(derive_seed(engine_(), tag)); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace maect
