// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "speechchain/config.hpp"
#include "speechchain/corpus.hpp"

namespace speechchain {

// Desk-scale synthetic corpus. Each "language" is a character bigram process
// over the 26 letters; each "speaker" is a deterministic warp of a shared
// per-character spectral template bank, rendered to a 16 kHz waveform by a
// sinusoid-bank vocoder. The first language is high-resource (used paired);
// the rest are low-resource (used unpaired) and draw their speaker warps
// from ranges outside the high-resource ones, so that models trained on the
// first language start out acoustically mismatched on the others.
struct ToyLanguageSpec {
  std::string name;
  int speakers = 4;
  int utts_per_speaker = 50;
};

struct ToyCorpusConfig {
  std::vector<ToyLanguageSpec> languages;  // first entry is high-resource
  int min_words = 1;
  int max_words = 3;
  std::uint64_t seed = 1234;

  // Keys: languages, speakers_per_language, utts_per_speaker (scalar or
  // per-language comma list), min_len, max_len, seed.
  static ToyCorpusConfig from_kv(const KVConfig& kv);
  static ToyCorpusConfig defaults();
  void validate() const;
};

struct ToySpeakerParams {
  double shift_bins = 0.0;   // formant shift along the mel axis
  double tilt = 0.0;         // spectral tilt, log-energy units across the band
  double brightness = 0.0;   // global log-energy offset
  int env_rise = 1;          // within-character envelope rise, in frames
};

// Shared per-character template bank plus the rendering rules: 8 frames per
// character, 2-frame linear cross-fade between adjacent characters (blended
// in the amplitude domain), 4 silence frames at each end.
class ToyVocoder {
 public:
  static constexpr int kFramesPerChar = 8;
  static constexpr int kCrossFadeFrames = 2;
  static constexpr int kEdgeSilenceFrames = 4;

  explicit ToyVocoder(std::uint64_t bank_seed);

  // Per-frame linear amplitude per mel band (rows = frames, cols = 80).
  Eigen::MatrixXd frame_amplitudes(const std::string& transcript,
                                   const ToySpeakerParams& speaker) const;

  // 16 kHz waveform; deterministic for fixed (transcript, speaker, bank).
  std::vector<double> render(const std::string& transcript, const ToySpeakerParams& speaker) const;

  // Log-domain template of a symbol id (tests / inspection).
  const Eigen::VectorXd& symbol_template(int id) const;

 private:
  std::vector<Eigen::VectorXd> templates_;  // one 80-dim log template per symbol id
};

// Deterministic speaker warp for (language index, speaker index) under a
// config; language index 0 samples the high-resource ranges.
ToySpeakerParams toy_speaker_params(const ToyCorpusConfig& config, int language_index,
                                    int speaker_index);

// Sample one sentence of a language (normalized transcript text).
std::string toy_sentence(const ToyCorpusConfig& config, int language_index, std::uint64_t stream);

// Generate the corpus under out_dir: writes wav/<utt_id>.wav files plus
// <out_dir>/manifest.tsv and returns the manifest. Pure function of
// (config, seed): same inputs give byte-identical outputs.
CorpusManifest generate_toy_corpus(const ToyCorpusConfig& config, const std::string& out_dir);

}  // namespace speechchain
