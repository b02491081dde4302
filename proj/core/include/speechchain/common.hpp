// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdarg>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace speechchain {

// All recoverable failures surface as Error with a one-line reason; the CLI
// maps them to nonzero exits.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

std::string strprintf(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

[[noreturn]] void throw_error(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

#define SC_CHECK(cond, ...)                  \
  do {                                       \
    if (!(cond)) ::speechchain::throw_error(__VA_ARGS__); \
  } while (0)

// FNV-1a over raw bytes; used for parameter-isolation assertions.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ull);

// Little-endian scalar I/O for binary file formats (caches, checkpoints).
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_f32(std::ostream& os, float v);
void write_f64(std::ostream& os, double v);
std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
float read_f32(std::istream& is);
double read_f64(std::istream& is);

std::string lowercase(std::string s);
std::vector<std::string> split(const std::string& s, char sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string trim(const std::string& s);

}  // namespace speechchain
