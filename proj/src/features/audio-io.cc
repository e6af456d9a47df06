// features/audio-io.cc

// Copyright 2026  The fasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "fasr/features/audio-io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fasr/base/error.h"

namespace fasr {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(const std::vector<char> &buf, size_t offset) {
  T v;
  std::memcpy(&v, buf.data() + offset, sizeof(T));
  return v;
}

template <typename T>
void PutLe(std::ostream &os, T v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

std::vector<char> ReadAll(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void WriteWav(const std::string &path, const Waveform &wave, uint16_t format,
              uint16_t bits) {
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorKind::kIo, "cannot write '" + path + "'");
  const uint32_t bytes_per_sample = bits / 8;
  const uint32_t data_size =
      static_cast<uint32_t>(wave.samples.size()) * bytes_per_sample;
  const auto rate = static_cast<uint32_t>(std::lround(wave.sample_rate));
  os.write("RIFF", 4);
  PutLe<uint32_t>(os, 36 + data_size);
  os.write("WAVEfmt ", 8);
  PutLe<uint32_t>(os, 16);
  PutLe<uint16_t>(os, format);
  PutLe<uint16_t>(os, 1);
  PutLe<uint32_t>(os, rate);
  PutLe<uint32_t>(os, rate * bytes_per_sample);
  PutLe<uint16_t>(os, static_cast<uint16_t>(bytes_per_sample));
  PutLe<uint16_t>(os, bits);
  os.write("data", 4);
  PutLe<uint32_t>(os, data_size);
  for (double s : wave.samples) {
    if (format == kFormatFloat) {
      PutLe<float>(os, static_cast<float>(s));
    } else {
      double scaled = std::clamp(s, -1.0, 32767.0 / 32768.0) * 32768.0;
      PutLe<int16_t>(os, static_cast<int16_t>(std::lround(scaled)));
    }
  }
  if (!os) Fail(ErrorKind::kIo, "short write to '" + path + "'");
}

}  // namespace

Waveform ReadWav(const std::string &path) {
  std::vector<char> buf = ReadAll(path);
  auto bad = [&](const std::string &why) {
    Fail(ErrorKind::kInvalidInput, "'" + path + "': " + why);
  };
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    bad("not a RIFF/WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  size_t pos = 12;
  Waveform wave;
  while (pos + 8 <= buf.size()) {
    const uint32_t size = ReadLe<uint32_t>(buf, pos + 4);
    const size_t body = pos + 8;
    if (body + size > buf.size()) bad("truncated chunk");
    if (std::memcmp(buf.data() + pos, "fmt ", 4) == 0) {
      if (size < 16) bad("fmt chunk too small");
      format = ReadLe<uint16_t>(buf, body);
      channels = ReadLe<uint16_t>(buf, body + 2);
      rate = ReadLe<uint32_t>(buf, body + 4);
      bits = ReadLe<uint16_t>(buf, body + 14);
      if (format == kFormatExtensible && size >= 26)
        format = ReadLe<uint16_t>(buf, body + 24);
      have_fmt = true;
    } else if (std::memcmp(buf.data() + pos, "data", 4) == 0) {
      if (!have_fmt) bad("data chunk before fmt chunk");
      if (channels != 1) bad("only mono audio is supported");
      wave.sample_rate = rate;
      if (format == kFormatPcm && bits == 16) {
        wave.samples.resize(size / 2);
        for (size_t i = 0; i < wave.samples.size(); ++i)
          wave.samples[i] = ReadLe<int16_t>(buf, body + 2 * i) / 32768.0;
      } else if (format == kFormatFloat && bits == 32) {
        wave.samples.resize(size / 4);
        for (size_t i = 0; i < wave.samples.size(); ++i)
          wave.samples[i] = ReadLe<float>(buf, body + 4 * i);
      } else {
        bad("unsupported sample format (need PCM16 or float32)");
      }
      return wave;
    }
    pos = body + size + (size & 1);
  }
  Fail(ErrorKind::kInvalidInput, "'" + path + "': no data chunk");
}

void WriteWavFloat(const std::string &path, const Waveform &wave) {
  WriteWav(path, wave, kFormatFloat, 32);
}

void WriteWavPcm16(const std::string &path, const Waveform &wave) {
  WriteWav(path, wave, kFormatPcm, 16);
}

void WriteFeatureDump(const std::string &path, const FeatureSequence &seq) {
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) Fail(ErrorKind::kIo, "cannot write '" + path + "'");
    PutLe<uint32_t>(os, static_cast<uint32_t>(seq.NumFrames()));
    PutLe<uint32_t>(os, static_cast<uint32_t>(seq.Dim()));
    os.write(reinterpret_cast<const char *>(seq.data.data()),
             static_cast<std::streamsize>(seq.data.size() * sizeof(double)));
    if (!os) Fail(ErrorKind::kIo, "short write to '" + path + "'");
  }
  std::ofstream conf(path + ".conf");
  if (!conf) Fail(ErrorKind::kIo, "cannot write '" + path + ".conf'");
  conf << nlohmann::json(seq.config).dump(2) << '\n';
}

FeatureSequence ReadFeatureDump(const std::string &path,
                                const FeatureConfig *fallback) {
  std::vector<char> buf = ReadAll(path);
  if (buf.size() < 8) Fail(ErrorKind::kLoad, "'" + path + "': missing header");
  const uint32_t rows = ReadLe<uint32_t>(buf, 0), cols = ReadLe<uint32_t>(buf, 4);
  const size_t expected = 8 + static_cast<size_t>(rows) * cols * sizeof(double);
  if (buf.size() != expected)
    Fail(ErrorKind::kLoad, "'" + path + "': size does not match header " +
                               std::to_string(rows) + "x" + std::to_string(cols));
  FeatureSequence seq;
  seq.data.resize(rows, cols);
  std::memcpy(seq.data.data(), buf.data() + 8, expected - 8);

  std::ifstream conf(path + ".conf");
  if (conf) {
    try {
      seq.config = nlohmann::json::parse(conf).get<FeatureConfig>();
    } catch (const nlohmann::json::exception &e) {
      Fail(ErrorKind::kLoad, "'" + path + ".conf': " + e.what());
    }
  } else if (fallback != nullptr) {
    seq.config = *fallback;
  } else {
    Fail(ErrorKind::kLoad, "'" + path + "': feature config sidecar missing");
  }
  if (seq.config.Dim() != static_cast<int>(cols))
    Fail(ErrorKind::kLoad, "'" + path + "': dimension " + std::to_string(cols) +
                               " does not match config dimension " +
                               std::to_string(seq.config.Dim()));
  return seq;
}

}  // namespace fasr
