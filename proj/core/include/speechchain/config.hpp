// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

namespace speechchain {

// Flat key-value experiment configuration. File syntax: one `key = value`
// per line, `#` starts a comment, blank lines ignored. Keys are unique;
// later assignments win (so CLI overrides are just appended assignments).
// Serialization is sorted by key, which makes resolved-config snapshots
// diffable.
class KVConfig {
 public:
  KVConfig() = default;

  static KVConfig from_file(const std::string& path);
  static KVConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;        // comma separated
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;
  std::vector<long> get_int_list(const std::string& key) const;

  // Apply `key=value` override strings (flag wins over file).
  void apply_overrides(const std::vector<std::string>& overrides);

  std::string serialize() const;
  void save(const std::string& path) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace speechchain
