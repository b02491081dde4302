// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/text.hpp"

#include <cctype>
#include <fstream>

#include "speechchain/common.hpp"

namespace speechchain {

CharInventory::CharInventory() {
  symbols_[kBos] = "<s>";
  symbols_[kEos] = "</s>";
  symbols_[kSpace] = "<spc>";
  symbols_[kNoise] = "<noise>";
  for (int i = 0; i < 26; ++i) symbols_[4 + i] = std::string(1, static_cast<char>('a' + i));
  symbols_[30] = "'";
  symbols_[31] = ".";
  symbols_[32] = "-";

  char_to_id_.fill(-1);
  for (int i = 0; i < 26; ++i) char_to_id_[static_cast<unsigned char>('a' + i)] = 4 + i;
  char_to_id_[static_cast<unsigned char>('\'')] = 30;
  char_to_id_[static_cast<unsigned char>('.')] = 31;
  char_to_id_[static_cast<unsigned char>('-')] = 32;
  char_to_id_[static_cast<unsigned char>(' ')] = kSpace;
}

const CharInventory& CharInventory::instance() {
  static const CharInventory inv;
  return inv;
}

const std::string& CharInventory::symbol(int id) const {
  SC_CHECK(id >= 0 && id < kSize, "symbol id %d out of range [0,%d]", id, kSize - 1);
  return symbols_[static_cast<size_t>(id)];
}

std::optional<int> CharInventory::id_of_char(char c) const {
  int id = char_to_id_[static_cast<unsigned char>(c)];
  if (id < 0) return std::nullopt;
  return id;
}

void CharInventory::dump(const std::string& path) const {
  std::ofstream out(path);
  SC_CHECK(out.good(), "cannot write inventory to %s", path.c_str());
  for (int i = 0; i < kSize; ++i) out << symbols_[static_cast<size_t>(i)] << '\n';
}

CharSequence encode(const std::string& text, bool add_boundaries) {
  const CharInventory& inv = CharInventory::instance();
  CharSequence seq;
  seq.surface = text;
  if (add_boundaries) seq.ids.push_back(CharInventory::kBos);
  for (std::size_t i = 0; i < text.size(); ++i) {
    // Literal tag spellings are accepted so decode(debug) round-trips.
    bool matched_tag = false;
    if (text[i] == '<') {
      for (int tag : {CharInventory::kNoise, CharInventory::kBos, CharInventory::kEos,
                      CharInventory::kSpace}) {
        const std::string& spelling = inv.symbol(tag);
        if (text.compare(i, spelling.size(), spelling) == 0) {
          SC_CHECK(tag == CharInventory::kNoise || !add_boundaries,
                   "boundary tag '%s' not allowed inside text at position %zu", spelling.c_str(), i);
          seq.ids.push_back(tag);
          i += spelling.size() - 1;
          matched_tag = true;
          break;
        }
      }
      if (matched_tag) continue;
    }
    auto id = inv.id_of_char(text[i]);
    if (!id)
      throw_error("unmappable character '%c' (0x%02x) at position %zu", text[i],
                  static_cast<unsigned char>(text[i]), i);
    seq.ids.push_back(*id);
  }
  if (add_boundaries) seq.ids.push_back(CharInventory::kEos);
  return seq;
}

std::string decode(const std::vector<int>& ids, DecodeMode mode) {
  const CharInventory& inv = CharInventory::instance();
  std::string out;
  for (int id : ids) {
    SC_CHECK(id >= 0 && id < CharInventory::kSize, "decode: id %d out of range", id);
    if (id == CharInventory::kSpace) {
      out += ' ';
    } else if (id == CharInventory::kBos || id == CharInventory::kEos ||
               id == CharInventory::kNoise) {
      if (mode == DecodeMode::kDebug) out += inv.symbol(id);
    } else {
      out += inv.symbol(id);
    }
  }
  return out;
}

std::string normalize_transcript(const std::string& text) {
  std::string out;
  bool pending_space = false;
  for (char raw : text) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

bool is_mappable(const std::string& text, std::string* offender, std::size_t* pos) {
  try {
    encode(text, /*add_boundaries=*/false);
    return true;
  } catch (const Error&) {
    const CharInventory& inv = CharInventory::instance();
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '<') {
        bool tag = false;
        for (int t : {CharInventory::kNoise, CharInventory::kBos, CharInventory::kEos,
                      CharInventory::kSpace}) {
          const std::string& s = inv.symbol(t);
          if (text.compare(i, s.size(), s) == 0) {
            i += s.size() - 1;
            tag = true;
            break;
          }
        }
        if (tag) continue;
      }
      if (!inv.id_of_char(text[i])) {
        if (offender) *offender = std::string(1, text[i]);
        if (pos) *pos = i;
        return false;
      }
    }
    return false;
  }
}

}  // namespace speechchain
