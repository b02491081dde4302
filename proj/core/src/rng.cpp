// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "speechchain/common.hpp"

namespace speechchain {

std::uint64_t Rng::uniform_u64(std::uint64_t n) {
  SC_CHECK(n > 0, "uniform_u64: n must be positive");
  // Rejection sampling to avoid modulo bias.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double Rng::uniform_real() {
  // 53 random bits -> [0,1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform_real();
  } while (u1 <= 0.0);
  double u2 = uniform_real();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  shuffle(p);
  return p;
}

Rng Rng::fork(std::uint64_t stream_id) {
  // splitmix64 over (raw draw, stream id) gives well-separated child seeds.
  std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ull * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return Rng(z);
}

std::string Rng::state() const {
  std::ostringstream os;
  os << engine_ << ' ' << (has_spare_ ? 1 : 0) << ' ';
  os.precision(17);
  os << spare_;
  return os.str();
}

void Rng::set_state(const std::string& s) {
  std::istringstream is(s);
  int spare_flag = 0;
  is >> engine_ >> spare_flag >> spare_;
  SC_CHECK(static_cast<bool>(is), "Rng::set_state: malformed state string");
  has_spare_ = spare_flag != 0;
}

}  // namespace speechchain
