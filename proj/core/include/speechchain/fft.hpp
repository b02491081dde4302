// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

namespace speechchain {

// In-place iterative radix-2 complex FFT. n must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Real-input FFT returning the n/2+1 non-redundant bins.
std::vector<std::complex<double>> rfft(const std::vector<double>& x, std::size_t n);

// Inverse of rfft: reconstructs a length-n real signal from n/2+1 bins.
std::vector<double> irfft(const std::vector<std::complex<double>>& bins, std::size_t n);

}  // namespace speechchain
