// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace speechchain {

enum class FeatureKind { kLogLinear, kLogMel };

// Fixed analysis setup: 16 kHz input, 50 ms window (800 samples), 12.5 ms
// hop (200 samples), Hann window, 2048-point transform. No centering or
// padding: T = 1 + floor((N - 800) / 200), inputs shorter than one window
// are rejected.
struct DspParams {
  static constexpr int kSampleRate = 16000;
  static constexpr int kFrameLength = 800;   // 50 ms
  static constexpr int kFrameShift = 200;    // 12.5 ms
  static constexpr int kFftSize = 2048;
  static constexpr int kLinearDim = kFftSize / 2 + 1;  // 1025
  static constexpr int kMelDim = 80;
  static constexpr double kLogFloor = 1e-10;  // magnitude clamp before log
};

// log(kLogFloor): the value silence frames take after clamping.
double log_floor_value();

struct FeatureSequence {
  Eigen::MatrixXd frames;  // T x D, time-major
  FeatureKind kind = FeatureKind::kLogMel;

  int length() const { return static_cast<int>(frames.rows()); }
  int dim() const { return static_cast<int>(frames.cols()); }

  static constexpr double kFrameShiftMs = 12.5;
  static constexpr double kFrameLengthMs = 50.0;
};

// y[0] = x[0]; y[t] = x[t] - 0.97 x[t-1].
std::vector<double> preemphasize(const std::vector<double>& samples);

// Magnitude STFT -> log with floor. D = 1025.
FeatureSequence log_linear_spectrogram(const std::vector<double>& samples);

// Magnitude STFT -> 80 triangular Mel filters over 0-8000 Hz -> log. D = 80.
FeatureSequence log_mel_spectrogram(const std::vector<double>& samples);

// Both spectrogram kinds from one STFT pass (they share T by construction).
void extract_features(const std::vector<double>& samples, FeatureSequence* log_linear,
                      FeatureSequence* log_mel);

// 80 x 1025 triangular filterbank matrix (HTK-style Mel scale, magnitude
// domain). Rows sum to a positive value and are zero outside their band.
const Eigen::MatrixXd& mel_filterbank();

// Hz <-> Mel (HTK convention), exposed for tests and the toy vocoder.
double hz_to_mel(double hz);
double mel_to_hz(double mel);
// Center frequency (Hz) of Mel filter m in [0, 80).
double mel_center_hz(int m);

// Windowed-sinc polyphase resampling; src_rate must be 16000 (identity) or
// 48000. Output length = round(N * 16000 / src_rate).
std::vector<double> resample_to_16k(const std::vector<double>& samples, int src_rate);

// Griffin-Lim phase reconstruction from a log-linear spectrogram (debugging
// aid only; 60 iterations by default, never part of metrics).
std::vector<double> griffin_lim(const FeatureSequence& log_linear, int iterations = 60,
                                std::uint64_t phase_seed = 0);

// Feature cache: shape header (T, D, kind) + row-major float32, little-endian.
void save_feature_cache(const std::string& path, const FeatureSequence& feats);
FeatureSequence load_feature_cache(const std::string& path);

// Per-corpus feature statistics, computed on a training split only.
// mel mean/std normalize ASR (and speaker-net) inputs; the min/max pairs
// scale TTS targets to [0,1]. Eq.-2 style evaluation always happens in the
// unscaled log-Mel domain.
struct FeatureStats {
  Eigen::VectorXd mel_mean;  // dim 80
  Eigen::VectorXd mel_std;   // dim 80, floored away from zero
  double mel_min = 0.0, mel_max = 1.0;
  double linear_min = 0.0, linear_max = 1.0;

  Eigen::MatrixXd normalize_mel(const Eigen::MatrixXd& mel_frames) const;  // (x-mean)/std per dim
  double scale_mel(double v) const { return (v - mel_min) / (mel_max - mel_min); }
  double unscale_mel(double v) const { return v * (mel_max - mel_min) + mel_min; }
  double scale_linear(double v) const { return (v - linear_min) / (linear_max - linear_min); }
  double unscale_linear(double v) const { return v * (linear_max - linear_min) + linear_min; }
  Eigen::MatrixXd scale_mel_frames(const Eigen::MatrixXd& m) const;
  Eigen::MatrixXd unscale_mel_frames(const Eigen::MatrixXd& m) const;
  Eigen::MatrixXd scale_linear_frames(const Eigen::MatrixXd& m) const;
  Eigen::MatrixXd unscale_linear_frames(const Eigen::MatrixXd& m) const;
};

// Accumulates stats over training-split features.
class FeatureStatsAccumulator {
 public:
  void add_mel(const FeatureSequence& mel);
  void add_linear(const FeatureSequence& linear);
  FeatureStats finalize() const;

 private:
  Eigen::VectorXd sum_ = Eigen::VectorXd::Zero(DspParams::kMelDim);
  Eigen::VectorXd sum_sq_ = Eigen::VectorXd::Zero(DspParams::kMelDim);
  long mel_frames_ = 0;
  double mel_min_ = 1e300, mel_max_ = -1e300;
  double linear_min_ = 1e300, linear_max_ = -1e300;
  bool saw_linear_ = false;
};

}  // namespace speechchain
