// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/fft.hpp"

#include <cmath>
#include <numbers>

#include "speechchain/common.hpp"

namespace speechchain {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  SC_CHECK(n > 0 && (n & (n - 1)) == 0, "fft size %zu is not a power of two", n);

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

std::vector<std::complex<double>> rfft(const std::vector<double>& x, std::size_t n) {
  SC_CHECK(x.size() <= n, "rfft: input longer than transform size");
  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  fft_inplace(a, /*inverse=*/false);
  a.resize(n / 2 + 1);
  return a;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& bins, std::size_t n) {
  SC_CHECK(bins.size() == n / 2 + 1, "irfft: expected %zu bins, got %zu", n / 2 + 1, bins.size());
  std::vector<std::complex<double>> a(n);
  for (std::size_t k = 0; k < bins.size(); ++k) a[k] = bins[k];
  for (std::size_t k = 1; k + 1 < bins.size(); ++k) a[n - k] = std::conj(bins[k]);
  fft_inplace(a, /*inverse=*/true);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real();
  return out;
}

}  // namespace speechchain
