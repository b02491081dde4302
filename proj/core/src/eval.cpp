// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/eval.hpp"

#include <algorithm>
#include <fstream>

#include "speechchain/common.hpp"
#include "speechchain/text.hpp"

namespace speechchain {

namespace {

struct Cell {
  int cost;
  int subs;  // substitution count along the canonical path
};

// Canonical order: minimize cost, then maximize substitutions.
inline bool better(const Cell& a, const Cell& b) {
  return a.cost != b.cost ? a.cost < b.cost : a.subs > b.subs;
}

std::vector<int> strip_tags(const std::vector<int>& ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (int id : ids) {
    if (id == CharInventory::kBos || id == CharInventory::kEos || id == CharInventory::kNoise)
      continue;
    out.push_back(id);
  }
  return out;
}

}  // namespace

CERBreakdown cer_tokens(const std::vector<int>& ref, const std::vector<int>& hyp) {
  const int n = static_cast<int>(ref.size());
  const int m = static_cast<int>(hyp.size());
  SC_CHECK(n > 0, "cer: empty reference after normalization (CER undefined)");

  std::vector<Cell> prev(static_cast<size_t>(m) + 1), cur(static_cast<size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) prev[static_cast<size_t>(j)] = {j, 0};  // insertions only
  for (int i = 1; i <= n; ++i) {
    cur[0] = {i, 0};  // deletions only
    for (int j = 1; j <= m; ++j) {
      const bool match = ref[static_cast<size_t>(i - 1)] == hyp[static_cast<size_t>(j - 1)];
      Cell best = {prev[static_cast<size_t>(j - 1)].cost + (match ? 0 : 1),
                   prev[static_cast<size_t>(j - 1)].subs + (match ? 0 : 1)};
      Cell del = {prev[static_cast<size_t>(j)].cost + 1, prev[static_cast<size_t>(j)].subs};
      Cell ins = {cur[static_cast<size_t>(j - 1)].cost + 1, cur[static_cast<size_t>(j - 1)].subs};
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[static_cast<size_t>(j)] = best;
    }
    std::swap(prev, cur);
  }

  const Cell final = prev[static_cast<size_t>(m)];
  CERBreakdown out;
  out.ref_length = n;
  out.substitutions = final.subs;
  // With cost and S fixed, D and I follow from D+I = cost-S and D-I = n-m.
  out.deletions = (final.cost - final.subs + (n - m)) / 2;
  out.insertions = (final.cost - final.subs - (n - m)) / 2;
  return out;
}

CERBreakdown cer(const std::string& reference, const std::string& hypothesis) {
  std::vector<int> ref = strip_tags(encode(normalize_transcript(reference), false).ids);
  std::vector<int> hyp = strip_tags(encode(normalize_transcript(hypothesis), false).ids);
  return cer_tokens(ref, hyp);
}

double tts_l2(const FeatureSequence& reference_mel, const FeatureSequence& predicted_mel) {
  SC_CHECK(reference_mel.kind == FeatureKind::kLogMel && reference_mel.dim() == DspParams::kMelDim,
           "tts_l2: reference must be log-mel with dim %d", DspParams::kMelDim);
  SC_CHECK(predicted_mel.kind == FeatureKind::kLogMel && predicted_mel.dim() == DspParams::kMelDim,
           "tts_l2: prediction must be log-mel with dim %d (got %d)", DspParams::kMelDim,
           predicted_mel.dim());
  const int T = reference_mel.length();
  SC_CHECK(T > 0, "tts_l2: empty reference");

  const double floor = log_floor_value();
  double total = 0.0;
  for (int t = 0; t < T; ++t) {
    if (t < predicted_mel.length()) {
      total += (reference_mel.frames.row(t) - predicted_mel.frames.row(t)).squaredNorm();
    } else {
      // Prediction padded with log-floor frames up to the reference length.
      total += (reference_mel.frames.row(t).array() - floor).square().sum();
    }
  }
  return total / T;
}

LanguageTable pool_cer(const std::map<std::string, std::vector<CERBreakdown>>& by_language) {
  LanguageTable out;
  double sum = 0.0;
  for (const auto& [lang, breakdowns] : by_language) {
    if (breakdowns.empty()) continue;  // absent, not zero
    long errors = 0, n = 0;
    for (const CERBreakdown& b : breakdowns) {
      errors += b.errors();
      n += b.ref_length;
    }
    SC_CHECK(n > 0, "pool_cer: language %s has zero reference length", lang.c_str());
    const double micro = 100.0 * static_cast<double>(errors) / static_cast<double>(n);
    out.languages.push_back(lang);
    out.per_language[lang] = micro;
    out.utterances_per_language[lang] = static_cast<long>(breakdowns.size());
    sum += micro;
  }
  SC_CHECK(!out.languages.empty(), "pool_cer: no language has any utterances");
  out.average = sum / static_cast<double>(out.languages.size());
  return out;
}

LanguageTable pool_l2(const std::map<std::string, std::vector<double>>& by_language) {
  LanguageTable out;
  double sum = 0.0;
  for (const auto& [lang, losses] : by_language) {
    if (losses.empty()) continue;
    double mean = 0.0;
    for (double v : losses) mean += v;
    mean /= static_cast<double>(losses.size());
    out.languages.push_back(lang);
    out.per_language[lang] = mean;
    out.utterances_per_language[lang] = static_cast<long>(losses.size());
    sum += mean;
  }
  SC_CHECK(!out.languages.empty(), "pool_l2: no language has any utterances");
  out.average = sum / static_cast<double>(out.languages.size());
  return out;
}

void write_results_csv(const std::string& path, const std::vector<ResultsRow>& rows) {
  SC_CHECK(!rows.empty(), "write_results_csv: no rows");
  // Union of languages across rows, in first-seen order.
  std::vector<std::string> langs;
  for (const ResultsRow& r : rows)
    for (const std::string& l : r.table.languages)
      if (std::find(langs.begin(), langs.end(), l) == langs.end()) langs.push_back(l);

  std::ofstream out(path);
  SC_CHECK(out.good(), "cannot write results csv: %s", path.c_str());
  out << "system,condition";
  for (const std::string& l : langs) out << ',' << l;
  out << ",average\n";
  for (const ResultsRow& r : rows) {
    out << r.system << ',' << r.condition;
    for (const std::string& l : langs) {
      auto it = r.table.per_language.find(l);
      if (it == r.table.per_language.end())
        out << ',';
      else
        out << ',' << strprintf("%.4f", it->second);
    }
    out << ',' << strprintf("%.4f", r.table.average) << '\n';
  }
}

}  // namespace speechchain
