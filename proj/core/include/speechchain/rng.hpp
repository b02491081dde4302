// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace speechchain {

// Deterministic RNG. mt19937_64 is fully specified by the standard; the
// derived draws (uniform, normal, shuffle) are hand-rolled here so that
// sequences do not depend on the standard library's distribution
// implementations. Every seeded run must replay bit-exactly, including
// across checkpoint save/restore (state() / set_state()).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t uniform_u64(std::uint64_t n);

  // Uniform double in [0, 1).
  double uniform_real();

  // Uniform double in [lo, hi).
  double uniform_real(double lo, double hi);

  // Standard normal via Box-Muller (explicit, with cached spare).
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    // Fisher-Yates, high-to-low.
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_u64(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n);

  // Derive an independent child stream; used to give corpora, speakers and
  // training stages their own reproducible streams.
  Rng fork(std::uint64_t stream_id);

  std::string state() const;
  void set_state(const std::string& s);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace speechchain
