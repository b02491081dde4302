// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace speechchain {

struct WavData {
  std::vector<double> samples;  // mono, in [-1, 1]
  int sample_rate = 16000;
};

// 16-bit mono PCM WAV. Multichannel or non-PCM input is rejected.
WavData read_wav(const std::string& path);
void write_wav(const std::string& path, const std::vector<double>& samples, int sample_rate);

}  // namespace speechchain
