// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace speechchain {

// 33-symbol character inventory shared verbatim by ASR targets and TTS
// inputs: 26 letters, three punctuation marks (' . -) and four tags.
// ID assignment is fixed for reproducibility:
//   0=<s>  1=</s>  2=<spc>  3=<noise>  4..29=a..z  30='  31=.  32=-
class CharInventory {
 public:
  static constexpr int kSize = 33;
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kSpace = 2;
  static constexpr int kNoise = 3;

  static const CharInventory& instance();

  // Symbol spelling for an ID: tags render as "<s>", "</s>", "<spc>",
  // "<noise>"; printable symbols as themselves.
  const std::string& symbol(int id) const;

  // ID for a printable character, or nullopt if unmappable.
  std::optional<int> id_of_char(char c) const;

  // Dump one symbol per line, line number = ID (audit format).
  void dump(const std::string& path) const;

 private:
  CharInventory();
  std::array<std::string, kSize> symbols_;
  std::array<int, 256> char_to_id_;
};

enum class DecodeMode {
  kDebug,       // tags rendered as "<s>" "</s>" "<noise>"
  kEvaluation,  // tags stripped
};

struct CharSequence {
  std::vector<int> ids;
  std::string surface;  // original text (pre-tokenization)

  std::size_t size() const { return ids.size(); }
};

// Tokenize normalized text. Input must be lowercase; every character must be
// one of {a-z, ', ., -, space} or a "<noise>" tag spelled literally. Spaces
// map to <spc>; with add_boundaries an <s> prefix and </s> suffix are added.
// Unmappable characters raise an Error naming the character and position.
CharSequence encode(const std::string& text, bool add_boundaries);

// Render IDs back to text. <spc> becomes " ". Tag rendering depends on mode.
std::string decode(const std::vector<int>& ids, DecodeMode mode);

// Normalize raw transcript text: lowercase, collapse whitespace runs to a
// single space, trim ends. Does NOT validate the character set (encode does).
std::string normalize_transcript(const std::string& text);

// True if every character of the (normalized) text is mappable.
bool is_mappable(const std::string& text, std::string* offender = nullptr, std::size_t* pos = nullptr);

}  // namespace speechchain
