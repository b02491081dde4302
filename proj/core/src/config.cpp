// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/config.hpp"

#include <fstream>
#include <sstream>

#include "speechchain/common.hpp"

namespace speechchain {

KVConfig KVConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  SC_CHECK(in.good(), "config file not readable: %s", path.c_str());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

KVConfig KVConfig::from_string(const std::string& text) {
  KVConfig cfg;
  int lineno = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    SC_CHECK(eq != std::string::npos, "config line %d: expected 'key = value', got '%s'", lineno,
             raw.c_str());
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    SC_CHECK(!key.empty(), "config line %d: empty key", lineno);
    cfg.entries_[key] = value;
  }
  return cfg;
}

void KVConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool KVConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KVConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  SC_CHECK(it != entries_.end(), "config: missing required key '%s'", key.c_str());
  return it->second;
}

std::string KVConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

long KVConfig::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw_error("config: key '%s' is not an integer: '%s'", key.c_str(), v.c_str());
  }
  SC_CHECK(pos == v.size(), "config: key '%s' has trailing junk: '%s'", key.c_str(), v.c_str());
  return out;
}

long KVConfig::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double KVConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw_error("config: key '%s' is not a number: '%s'", key.c_str(), v.c_str());
  }
  SC_CHECK(pos == v.size(), "config: key '%s' has trailing junk: '%s'", key.c_str(), v.c_str());
  return out;
}

double KVConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

bool KVConfig::get_bool(const std::string& key) const {
  std::string v = lowercase(get_string(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw_error("config: key '%s' is not a boolean: '%s'", key.c_str(), v.c_str());
}

bool KVConfig::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> KVConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  for (std::string& item : split(get_string(key), ',')) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<std::string> KVConfig::get_list(const std::string& key,
                                            const std::vector<std::string>& fallback) const {
  return has(key) ? get_list(key) : fallback;
}

std::vector<long> KVConfig::get_int_list(const std::string& key) const {
  std::vector<long> out;
  for (const std::string& item : get_list(key)) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw_error("config: key '%s' has non-integer list item '%s'", key.c_str(), item.c_str());
    }
  }
  return out;
}

void KVConfig::apply_overrides(const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    auto eq = ov.find('=');
    SC_CHECK(eq != std::string::npos, "override must be key=value, got '%s'", ov.c_str());
    set(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
}

std::string KVConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void KVConfig::save(const std::string& path) const {
  std::ofstream out(path);
  SC_CHECK(out.good(), "cannot write config to %s", path.c_str());
  out << serialize();
}

}  // namespace speechchain
