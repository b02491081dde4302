// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/dsp.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include "speechchain/common.hpp"
#include "speechchain/fft.hpp"
#include "speechchain/rng.hpp"

namespace speechchain {

namespace {

int frame_count(std::size_t n_samples) {
  SC_CHECK(n_samples >= static_cast<std::size_t>(DspParams::kFrameLength),
           "audio too short for one analysis window: %zu samples < %d", n_samples,
           DspParams::kFrameLength);
  return 1 + static_cast<int>((n_samples - DspParams::kFrameLength) / DspParams::kFrameShift);
}

const std::vector<double>& hann_window() {
  static const std::vector<double> w = [] {
    std::vector<double> v(DspParams::kFrameLength);
    for (int n = 0; n < DspParams::kFrameLength; ++n) {
      v[static_cast<size_t>(n)] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / DspParams::kFrameLength);
    }
    return v;
  }();
  return w;
}

// Magnitude STFT, T x 1025.
Eigen::MatrixXd magnitude_stft(const std::vector<double>& samples) {
  const int T = frame_count(samples.size());
  const auto& window = hann_window();
  Eigen::MatrixXd mag(T, DspParams::kLinearDim);
  std::vector<double> frame(DspParams::kFrameLength);
  for (int t = 0; t < T; ++t) {
    const std::size_t off = static_cast<std::size_t>(t) * DspParams::kFrameShift;
    for (int n = 0; n < DspParams::kFrameLength; ++n)
      frame[static_cast<size_t>(n)] = samples[off + static_cast<size_t>(n)] * window[static_cast<size_t>(n)];
    auto bins = rfft(frame, DspParams::kFftSize);
    for (int k = 0; k < DspParams::kLinearDim; ++k) mag(t, k) = std::abs(bins[static_cast<size_t>(k)]);
  }
  return mag;
}

Eigen::MatrixXd log_with_floor(Eigen::MatrixXd m) {
  return m.array().max(DspParams::kLogFloor).log().matrix();
}

}  // namespace

double log_floor_value() { return std::log(DspParams::kLogFloor); }

std::vector<double> preemphasize(const std::vector<double>& samples) {
  SC_CHECK(!samples.empty(), "preemphasize: empty audio");
  std::vector<double> out(samples.size());
  out[0] = samples[0];
  for (std::size_t t = 1; t < samples.size(); ++t) out[t] = samples[t] - 0.97 * samples[t - 1];
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

double mel_center_hz(int m) {
  SC_CHECK(m >= 0 && m < DspParams::kMelDim, "mel filter index %d out of range", m);
  const double mel_max = hz_to_mel(8000.0);
  const double step = mel_max / (DspParams::kMelDim + 1);
  return mel_to_hz(step * (m + 1));
}

const Eigen::MatrixXd& mel_filterbank() {
  static const Eigen::MatrixXd fb = [] {
    const int n_mels = DspParams::kMelDim;
    const int n_bins = DspParams::kLinearDim;
    const double bin_hz = static_cast<double>(DspParams::kSampleRate) / DspParams::kFftSize;
    const double mel_max = hz_to_mel(8000.0);
    const double step = mel_max / (n_mels + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_mels, n_bins);
    for (int i = 0; i < n_mels; ++i) {
      const double left = mel_to_hz(step * i);
      const double center = mel_to_hz(step * (i + 1));
      const double right = mel_to_hz(step * (i + 2));
      for (int k = 0; k < n_bins; ++k) {
        const double f = k * bin_hz;
        if (f <= left || f >= right) continue;
        m(i, k) = f <= center ? (f - left) / (center - left) : (right - f) / (right - center);
      }
    }
    return m;
  }();
  return fb;
}

FeatureSequence log_linear_spectrogram(const std::vector<double>& samples) {
  FeatureSequence out;
  out.kind = FeatureKind::kLogLinear;
  out.frames = log_with_floor(magnitude_stft(samples));
  return out;
}

FeatureSequence log_mel_spectrogram(const std::vector<double>& samples) {
  FeatureSequence out;
  out.kind = FeatureKind::kLogMel;
  Eigen::MatrixXd mag = magnitude_stft(samples);
  out.frames = log_with_floor(mag * mel_filterbank().transpose());
  return out;
}

void extract_features(const std::vector<double>& samples, FeatureSequence* log_linear,
                      FeatureSequence* log_mel) {
  Eigen::MatrixXd mag = magnitude_stft(samples);
  if (log_linear) {
    log_linear->kind = FeatureKind::kLogLinear;
    log_linear->frames = log_with_floor(mag);
  }
  if (log_mel) {
    log_mel->kind = FeatureKind::kLogMel;
    log_mel->frames = log_with_floor(mag * mel_filterbank().transpose());
  }
}

std::vector<double> resample_to_16k(const std::vector<double>& samples, int src_rate) {
  if (src_rate == 16000) return samples;
  SC_CHECK(src_rate == 48000, "unsupported source sample rate %d (expected 16000 or 48000)",
           src_rate);

  // Decimate by 3 after a Hann-windowed sinc lowpass at 8 kHz (on 48 kHz:
  // cutoff = pi/3).
  constexpr int kHalfTaps = 60;
  static const std::vector<double> taps = [] {
    std::vector<double> h(2 * kHalfTaps + 1);
    for (int i = -kHalfTaps; i <= kHalfTaps; ++i) {
      double x = static_cast<double>(i);
      double sinc = i == 0 ? 1.0 / 3.0
                           : std::sin(std::numbers::pi * x / 3.0) / (std::numbers::pi * x);
      double win = 0.5 + 0.5 * std::cos(std::numbers::pi * x / (kHalfTaps + 1));
      h[static_cast<size_t>(i + kHalfTaps)] = sinc * win;
    }
    double sum = 0.0;
    for (double v : h) sum += v;
    for (double& v : h) v /= sum;  // unity DC gain
    return h;
  }();

  const std::size_t n_out =
      static_cast<std::size_t>(std::llround(static_cast<double>(samples.size()) * 16000.0 / 48000.0));
  std::vector<double> out(n_out, 0.0);
  const auto n_in = static_cast<long>(samples.size());
  for (std::size_t j = 0; j < n_out; ++j) {
    const long center = static_cast<long>(j) * 3;
    double acc = 0.0;
    for (int k = -kHalfTaps; k <= kHalfTaps; ++k) {
      long idx = center + k;
      if (idx < 0 || idx >= n_in) continue;
      acc += samples[static_cast<size_t>(idx)] * taps[static_cast<size_t>(k + kHalfTaps)];
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> griffin_lim(const FeatureSequence& log_linear, int iterations,
                                std::uint64_t phase_seed) {
  SC_CHECK(log_linear.kind == FeatureKind::kLogLinear && log_linear.dim() == DspParams::kLinearDim,
           "griffin_lim expects a log-linear spectrogram");
  const int T = log_linear.length();
  const int n_samples = DspParams::kFrameLength + (T - 1) * DspParams::kFrameShift;
  Eigen::MatrixXd mag = log_linear.frames.array().exp().matrix();

  Rng rng(phase_seed);
  Eigen::MatrixXd phase(T, DspParams::kLinearDim);
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < DspParams::kLinearDim; ++k)
      phase(t, k) = rng.uniform_real(0.0, 2.0 * std::numbers::pi);

  const auto& window = hann_window();
  std::vector<double> signal(static_cast<size_t>(n_samples), 0.0);

  auto istft = [&](const Eigen::MatrixXd& ph) {
    std::fill(signal.begin(), signal.end(), 0.0);
    std::vector<double> wsum(static_cast<size_t>(n_samples), 1e-12);
    std::vector<std::complex<double>> bins(DspParams::kLinearDim);
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < DspParams::kLinearDim; ++k)
        bins[static_cast<size_t>(k)] = std::polar(mag(t, k), ph(t, k));
      auto frame = irfft(bins, DspParams::kFftSize);
      const std::size_t off = static_cast<std::size_t>(t) * DspParams::kFrameShift;
      for (int n = 0; n < DspParams::kFrameLength; ++n) {
        signal[off + static_cast<size_t>(n)] += frame[static_cast<size_t>(n)] * window[static_cast<size_t>(n)];
        wsum[off + static_cast<size_t>(n)] += window[static_cast<size_t>(n)] * window[static_cast<size_t>(n)];
      }
    }
    for (std::size_t i = 0; i < signal.size(); ++i) signal[i] /= wsum[i];
  };

  for (int it = 0; it < iterations; ++it) {
    istft(phase);
    // Re-analyze and keep only the phase.
    const auto& w = hann_window();
    std::vector<double> frame(DspParams::kFrameLength);
    for (int t = 0; t < T; ++t) {
      const std::size_t off = static_cast<std::size_t>(t) * DspParams::kFrameShift;
      for (int n = 0; n < DspParams::kFrameLength; ++n)
        frame[static_cast<size_t>(n)] = signal[off + static_cast<size_t>(n)] * w[static_cast<size_t>(n)];
      auto bins = rfft(frame, DspParams::kFftSize);
      for (int k = 0; k < DspParams::kLinearDim; ++k) phase(t, k) = std::arg(bins[static_cast<size_t>(k)]);
    }
  }
  istft(phase);

  double peak = 1e-9;
  for (double s : signal) peak = std::max(peak, std::abs(s));
  if (peak > 1.0)
    for (double& s : signal) s /= peak;
  return signal;
}

void save_feature_cache(const std::string& path, const FeatureSequence& feats) {
  std::ofstream out(path, std::ios::binary);
  SC_CHECK(out.good(), "cannot write feature cache: %s", path.c_str());
  write_u32(out, static_cast<std::uint32_t>(feats.length()));
  write_u32(out, static_cast<std::uint32_t>(feats.dim()));
  write_u32(out, feats.kind == FeatureKind::kLogLinear ? 1u : 2u);
  for (int t = 0; t < feats.length(); ++t)
    for (int d = 0; d < feats.dim(); ++d) write_f32(out, static_cast<float>(feats.frames(t, d)));
  SC_CHECK(out.good(), "short write to feature cache: %s", path.c_str());
}

FeatureSequence load_feature_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  SC_CHECK(in.good(), "cannot read feature cache: %s", path.c_str());
  const std::uint32_t T = read_u32(in);
  const std::uint32_t D = read_u32(in);
  const std::uint32_t kind = read_u32(in);
  SC_CHECK(kind == 1 || kind == 2, "%s: bad feature kind %u", path.c_str(), kind);
  FeatureSequence out;
  out.kind = kind == 1 ? FeatureKind::kLogLinear : FeatureKind::kLogMel;
  out.frames.resize(T, D);
  for (std::uint32_t t = 0; t < T; ++t)
    for (std::uint32_t d = 0; d < D; ++d) out.frames(t, d) = read_f32(in);
  return out;
}

Eigen::MatrixXd FeatureStats::normalize_mel(const Eigen::MatrixXd& mel_frames) const {
  SC_CHECK(mel_frames.cols() == mel_mean.size(), "normalize_mel: dim mismatch %ld vs %ld",
           static_cast<long>(mel_frames.cols()), static_cast<long>(mel_mean.size()));
  return (mel_frames.rowwise() - mel_mean.transpose()).array().rowwise() /
         mel_std.transpose().array();
}

Eigen::MatrixXd FeatureStats::scale_mel_frames(const Eigen::MatrixXd& m) const {
  return ((m.array() - mel_min) / (mel_max - mel_min)).matrix();
}
Eigen::MatrixXd FeatureStats::unscale_mel_frames(const Eigen::MatrixXd& m) const {
  return (m.array() * (mel_max - mel_min) + mel_min).matrix();
}
Eigen::MatrixXd FeatureStats::scale_linear_frames(const Eigen::MatrixXd& m) const {
  return ((m.array() - linear_min) / (linear_max - linear_min)).matrix();
}
Eigen::MatrixXd FeatureStats::unscale_linear_frames(const Eigen::MatrixXd& m) const {
  return (m.array() * (linear_max - linear_min) + linear_min).matrix();
}

void FeatureStatsAccumulator::add_mel(const FeatureSequence& mel) {
  SC_CHECK(mel.kind == FeatureKind::kLogMel && mel.dim() == DspParams::kMelDim,
           "stats accumulator expects log-mel features");
  sum_ += mel.frames.colwise().sum().transpose();
  sum_sq_ += mel.frames.array().square().matrix().colwise().sum().transpose();
  mel_frames_ += mel.length();
  mel_min_ = std::min(mel_min_, mel.frames.minCoeff());
  mel_max_ = std::max(mel_max_, mel.frames.maxCoeff());
}

void FeatureStatsAccumulator::add_linear(const FeatureSequence& linear) {
  SC_CHECK(linear.kind == FeatureKind::kLogLinear, "stats accumulator expects log-linear features");
  linear_min_ = std::min(linear_min_, linear.frames.minCoeff());
  linear_max_ = std::max(linear_max_, linear.frames.maxCoeff());
  saw_linear_ = true;
}

FeatureStats FeatureStatsAccumulator::finalize() const {
  SC_CHECK(mel_frames_ > 0, "feature stats: no mel frames accumulated");
  FeatureStats s;
  s.mel_mean = sum_ / static_cast<double>(mel_frames_);
  Eigen::VectorXd var =
      sum_sq_ / static_cast<double>(mel_frames_) - s.mel_mean.array().square().matrix();
  s.mel_std = var.array().max(1e-8).sqrt();
  s.mel_min = mel_min_;
  s.mel_max = std::max(mel_max_, mel_min_ + 1e-6);
  if (saw_linear_) {
    s.linear_min = linear_min_;
    s.linear_max = std::max(linear_max_, linear_min_ + 1e-6);
  } else {
    s.linear_min = s.mel_min;
    s.linear_max = s.mel_max;
  }
  return s;
}

}  // namespace speechchain
