// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_set>

#include "speechchain/common.hpp"
#include "speechchain/rng.hpp"
#include "speechchain/text.hpp"

namespace fs = std::filesystem;

namespace speechchain {

std::vector<std::string> CorpusManifest::languages() const {
  std::set<std::string> s;
  for (const auto& r : records) s.insert(r.language);
  return {s.begin(), s.end()};
}

std::vector<std::string> CorpusManifest::speakers() const {
  std::set<std::string> s;
  for (const auto& r : records) s.insert(r.speaker_id);
  return {s.begin(), s.end()};
}

std::vector<std::string> CorpusManifest::speakers_of(const std::string& language) const {
  std::set<std::string> s;
  for (const auto& r : records)
    if (r.language == language) s.insert(r.speaker_id);
  return {s.begin(), s.end()};
}

CorpusManifest CorpusManifest::filter_language(const std::string& language) const {
  CorpusManifest out;
  out.base_dir = base_dir;
  for (const auto& r : records)
    if (r.language == language) out.records.push_back(r);
  return out;
}

std::string CorpusManifest::resolve_audio(const UtteranceRecord& rec) const {
  SC_CHECK(rec.has_audio(), "utterance %s has no audio reference", rec.utt_id.c_str());
  fs::path p(rec.audio_path);
  if (p.is_absolute() || base_dir.empty()) return rec.audio_path;
  return (fs::path(base_dir) / p).string();
}

CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  SC_CHECK(in.good(), "cannot open manifest: %s", path.c_str());

  CorpusManifest out;
  out.base_dir = fs::path(path).parent_path().string();
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 5)
      throw_error("%s:%d: expected 5 tab-separated fields, got %zu", path.c_str(), lineno,
                  fields.size());
    UtteranceRecord rec;
    rec.utt_id = fields[0];
    rec.speaker_id = fields[1];
    rec.language = fields[2];
    rec.audio_path = fields[3];
    if (rec.utt_id.empty() || rec.speaker_id.empty() || rec.language.empty())
      throw_error("%s:%d: empty utt_id/speaker_id/language field", path.c_str(), lineno);
    if (!seen_ids.insert(rec.utt_id).second)
      throw_error("%s:%d: duplicate utt_id '%s'", path.c_str(), lineno, rec.utt_id.c_str());
    if (!fields[4].empty()) {
      std::string norm = normalize_transcript(fields[4]);
      std::string offender;
      std::size_t pos = 0;
      if (!is_mappable(norm, &offender, &pos))
        throw_error("%s:%d: transcript of '%s' has unmappable character '%s' at position %zu",
                    path.c_str(), lineno, rec.utt_id.c_str(), offender.c_str(), pos);
      rec.transcript = norm;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

void save_manifest(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream out(path);
  SC_CHECK(out.good(), "cannot write manifest: %s", path.c_str());
  for (const auto& r : manifest.records) {
    out << r.utt_id << '\t' << r.speaker_id << '\t' << r.language << '\t' << r.audio_path << '\t'
        << (r.transcript ? *r.transcript : "") << '\n';
  }
  SC_CHECK(out.good(), "short write to manifest: %s", path.c_str());
}

CorpusSplits make_splits(const CorpusManifest& manifest, const SplitSpec& spec) {
  SC_CHECK(!manifest.empty(), "make_splits: empty manifest");
  SC_CHECK(spec.dev_fraction > 0.0 && spec.dev_fraction < 1.0,
           "make_splits: dev_fraction must be in (0,1), got %g", spec.dev_fraction);
  const int selectors = (spec.test_speaker_count ? 1 : 0) + (spec.test_fraction ? 1 : 0) +
                        (!spec.test_speakers.empty() ? 1 : 0);
  SC_CHECK(selectors == 1,
           "make_splits: exactly one of test_speaker_count / test_fraction / test_speakers");
  if (spec.test_fraction)
    SC_CHECK(*spec.test_fraction > 0.0 && *spec.test_fraction < 1.0,
             "make_splits: test_fraction must be in (0,1)");

  Rng rng(spec.seed);
  std::set<std::string> test_speakers;

  if (!spec.test_speakers.empty()) {
    std::set<std::string> known(manifest.speakers().begin(), manifest.speakers().end());
    for (const std::string& s : spec.test_speakers) {
      SC_CHECK(known.count(s), "make_splits: designated test speaker '%s' not in manifest",
               s.c_str());
      test_speakers.insert(s);
    }
  } else {
    for (const std::string& lang : manifest.languages()) {
      std::vector<std::string> speakers = manifest.speakers_of(lang);
      int want = spec.test_speaker_count
                     ? *spec.test_speaker_count
                     : static_cast<int>(std::lround(*spec.test_fraction * static_cast<double>(speakers.size())));
      SC_CHECK(want >= 1, "make_splits: language %s: test selection resolves to zero speakers",
               lang.c_str());
      SC_CHECK(static_cast<size_t>(want) < speakers.size(),
               "make_splits: language %s has %zu speakers, cannot hold out %d for test",
               lang.c_str(), speakers.size(), want);
      rng.shuffle(speakers);
      for (int i = 0; i < want; ++i) test_speakers.insert(speakers[static_cast<size_t>(i)]);
    }
  }

  CorpusSplits out;
  out.train.base_dir = out.dev.base_dir = out.test.base_dir = manifest.base_dir;

  std::vector<std::size_t> remainder;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    if (test_speakers.count(manifest.records[i].speaker_id))
      out.test.records.push_back(manifest.records[i]);
    else
      remainder.push_back(i);
  }
  SC_CHECK(!out.test.records.empty(), "make_splits: test split is empty");
  SC_CHECK(!remainder.empty(), "make_splits: nothing left for train/dev");

  // Dev/train split over the pooled remainder, by utterance.
  std::vector<std::size_t> order = remainder;
  rng.shuffle(order);
  const auto dev_count =
      static_cast<std::size_t>(std::lround(spec.dev_fraction * static_cast<double>(order.size())));
  SC_CHECK(dev_count >= 1 && dev_count < order.size(),
           "make_splits: dev fraction %g leaves no dev or no train utterances", spec.dev_fraction);
  std::set<std::size_t> dev_set(order.begin(), order.begin() + static_cast<long>(dev_count));
  for (std::size_t i : remainder) {
    if (dev_set.count(i))
      out.dev.records.push_back(manifest.records[i]);
    else
      out.train.records.push_back(manifest.records[i]);
  }
  return out;
}

CorpusManifest strip_pairing(const CorpusManifest& manifest, PairingMode mode) {
  CorpusManifest out;
  out.base_dir = manifest.base_dir;
  out.records = manifest.records;
  for (auto& r : out.records) {
    if (mode == PairingMode::kTextOnly)
      r.audio_path.clear();
    else
      r.transcript.reset();
  }
  return out;
}

CorpusManifest merge_manifests(const std::vector<CorpusManifest>& parts) {
  CorpusManifest out;
  std::unordered_set<std::string> seen;
  for (const auto& part : parts) {
    if (out.base_dir.empty()) out.base_dir = part.base_dir;
    for (const auto& r : part.records) {
      SC_CHECK(seen.insert(r.utt_id).second, "merge_manifests: duplicate utt_id '%s'",
               r.utt_id.c_str());
      UtteranceRecord copy = r;
      // Rebase audio paths when parts come from different directories.
      if (copy.has_audio() && !part.base_dir.empty() && part.base_dir != out.base_dir)
        copy.audio_path = part.resolve_audio(r);
      out.records.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace speechchain
