// Copyright (c) 2026 speechchain contributors
// SPDX-License-Identifier: Apache-2.0

#include "speechchain/wav.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "speechchain/common.hpp"

namespace speechchain {

namespace {

constexpr std::uint32_t fourcc(const char (&s)[5]) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(s[0])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[3])) << 24;
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  SC_CHECK(in.good(), "cannot open wav file: %s", path.c_str());

  auto rd_u32 = [&in, &path]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    SC_CHECK(static_cast<bool>(in), "truncated wav file: %s", path.c_str());
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
  };
  auto rd_u16 = [&in, &path]() {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    SC_CHECK(static_cast<bool>(in), "truncated wav file: %s", path.c_str());
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  };

  SC_CHECK(rd_u32() == fourcc("RIFF"), "%s: not a RIFF file", path.c_str());
  rd_u32();  // riff size
  SC_CHECK(rd_u32() == fourcc("WAVE"), "%s: not a WAVE file", path.c_str());

  WavData out;
  int bits = 0, channels = 0;
  bool got_fmt = false;
  while (true) {
    std::uint32_t id;
    {
      unsigned char b[4];
      in.read(reinterpret_cast<char*>(b), 4);
      if (!in) break;
      id = static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
    }
    std::uint32_t size = rd_u32();
    if (id == fourcc("fmt ")) {
      std::uint16_t format = rd_u16();
      channels = rd_u16();
      out.sample_rate = static_cast<int>(rd_u32());
      rd_u32();  // byte rate
      rd_u16();  // block align
      bits = rd_u16();
      SC_CHECK(format == 1, "%s: only PCM wav supported (format=%u)", path.c_str(), format);
      SC_CHECK(channels == 1, "%s: only mono wav supported (channels=%d)", path.c_str(), channels);
      SC_CHECK(bits == 16, "%s: only 16-bit wav supported (bits=%d)", path.c_str(), bits);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      got_fmt = true;
    } else if (id == fourcc("data")) {
      SC_CHECK(got_fmt, "%s: data chunk before fmt chunk", path.c_str());
      std::size_t n = size / 2;
      out.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t raw = rd_u16();
        out.samples[i] = static_cast<double>(static_cast<std::int16_t>(raw)) / 32768.0;
      }
      return out;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw_error("%s: no data chunk found", path.c_str());
}

void write_wav(const std::string& path, const std::vector<double>& samples, int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  SC_CHECK(out.good(), "cannot write wav file: %s", path.c_str());

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  auto wr_u32 = [&out](std::uint32_t v) { write_u32(out, v); };
  auto wr_u16 = [&out](std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(b, 2);
  };

  out.write("RIFF", 4);
  wr_u32(36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  wr_u32(16);
  wr_u16(1);  // PCM
  wr_u16(1);  // mono
  wr_u32(static_cast<std::uint32_t>(sample_rate));
  wr_u32(static_cast<std::uint32_t>(sample_rate * 2));
  wr_u16(2);   // block align
  wr_u16(16);  // bits
  out.write("data", 4);
  wr_u32(data_bytes);
  for (double s : samples) {
    double clipped = std::max(-1.0, std::min(1.0, s));
    auto q = static_cast<std::int16_t>(std::lrint(clipped * 32767.0));
    wr_u16(static_cast<std::uint16_t>(q));
  }
  SC_CHECK(out.good(), "short write to wav file: %s", path.c_str());
}

}  // namespace speechchain
