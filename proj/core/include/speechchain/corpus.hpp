// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace speechchain {

struct UtteranceRecord {
  std::string utt_id;      // unique within a manifest
  std::string speaker_id;
  std::string language;    // tag, e.g. "toy-hi"
  std::string audio_path;  // empty for text-only records
  std::optional<std::string> transcript;  // normalized; absent for speech-only records
  int sample_rate = 16000;

  bool has_audio() const { return !audio_path.empty(); }
  bool has_transcript() const { return transcript.has_value(); }
};

// Ordered record list; ordering is stable across load/save. The speaker and
// language lists are derived from the records.
struct CorpusManifest {
  std::vector<UtteranceRecord> records;
  std::string base_dir;  // directory the manifest was loaded from; resolves audio paths

  std::vector<std::string> languages() const;  // sorted unique
  std::vector<std::string> speakers() const;   // sorted unique
  std::vector<std::string> speakers_of(const std::string& language) const;
  CorpusManifest filter_language(const std::string& language) const;
  std::string resolve_audio(const UtteranceRecord& rec) const;
  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

// Manifest TSV: one record per line, tab-separated
//   utt_id  speaker_id  language  audio_path  transcript
// UTF-8; empty transcript and empty audio_path fields are allowed.
// Transcripts are normalized on load (lowercase, whitespace runs collapsed);
// unmappable characters are a hard error, never dropped.
CorpusManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const CorpusManifest& manifest);

struct SplitSpec {
  // Exactly one of test_speaker_count / test_fraction / test_speakers drives
  // test selection, applied per language. test_speakers pins designated
  // speakers (the low-resource protocol); test_speaker_count picks them
  // seeded-randomly per language. Held-out test speakers contribute all of
  // their utterances and none elsewhere.
  std::optional<int> test_speaker_count;
  std::optional<double> test_fraction;          // fraction of speakers per language
  std::vector<std::string> test_speakers;       // explicit designation
  double dev_fraction = 0.2;                    // of the remaining utterances
  std::uint64_t seed = 0;
};

struct CorpusSplits {
  CorpusManifest train;
  CorpusManifest dev;
  CorpusManifest test;
};

// Speaker-disjoint test split; dev/train utterance split over the remainder,
// pooled across speakers. Deterministic given the seed.
CorpusSplits make_splits(const CorpusManifest& manifest, const SplitSpec& spec);

enum class PairingMode { kTextOnly, kSpeechOnly };

// Text-only drops audio references; speech-only drops transcripts. Record
// count and order are preserved.
CorpusManifest strip_pairing(const CorpusManifest& manifest, PairingMode mode);

// Concatenate manifests (utt_ids must stay unique).
CorpusManifest merge_manifests(const std::vector<CorpusManifest>& parts);

}  // namespace speechchain
