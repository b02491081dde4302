// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "speechchain/dsp.hpp"

namespace speechchain {

struct CERBreakdown {
  long substitutions = 0;
  long deletions = 0;
  long insertions = 0;
  long ref_length = 0;  // N: reference token count

  long errors() const { return substitutions + deletions + insertions; }
  double cer_percent() const { return 100.0 * static_cast<double>(errors()) / static_cast<double>(ref_length); }
};

// Minimum-edit-distance alignment with unit costs over the 33-symbol token
// stream. Among minimum-cost alignments the canonical one maximizes the
// substitution count, which makes the (S,D,I) triple unique and symmetric:
// swapping ref/hyp exchanges D and I and preserves S.
CERBreakdown cer_tokens(const std::vector<int>& ref, const std::vector<int>& hyp);

// CER over strings: both sides are tokenized without boundaries, then
// boundary and <noise> tags are stripped; <spc> counts as a regular token.
// The reference must be non-empty after normalization and stripping.
CERBreakdown cer(const std::string& reference, const std::string& hypothesis);

// TTS regression metric: mean over reference frames of the squared L2 norm
// of the per-frame difference, on log-Mel features (dim 80). The prediction
// is truncated, or padded with log-floor frames, to the reference length.
double tts_l2(const FeatureSequence& reference_mel, const FeatureSequence& predicted_mel);

// Per-language table plus averages, shaped like a results table row:
// one value per language column and an unweighted macro average.
struct LanguageTable {
  std::vector<std::string> languages;                 // column order
  std::map<std::string, double> per_language;
  double average = 0.0;                               // unweighted macro average
  std::map<std::string, long> utterances_per_language;
};

// Pool CER breakdowns into a micro-averaged CER per language (total errors /
// total reference length within each language) and a macro average across
// languages. Languages with no utterances are absent from the table.
LanguageTable pool_cer(const std::map<std::string, std::vector<CERBreakdown>>& by_language);

// Mean Eq.-style L2 per language plus macro average.
LanguageTable pool_l2(const std::map<std::string, std::vector<double>>& by_language);

// Results CSV in table shape: header `system,condition,<lang...>,average`,
// one row per (system, condition) entry.
struct ResultsRow {
  std::string system;
  std::string condition;
  LanguageTable table;
};
void write_results_csv(const std::string& path, const std::vector<ResultsRow>& rows);

}  // namespace speechchain
