// Copyright 2026 The rnncov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rnncov/audio.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "rnncov/error.h"

namespace rnncov {

namespace {

void Put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void Put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<std::uint8_t>& out, std::string_view tag) {
  out.insert(out.end(), tag.begin(), tag.end());
}

std::uint16_t Get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t Get32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t at, std::string_view tag) {
  return std::equal(tag.begin(), tag.end(), b.begin() + static_cast<std::ptrdiff_t>(at));
}

}  // namespace

void ValidateClip(const AudioClip& clip) {
  if (clip.sample_rate == 0) throw ValidationError("sample rate must be positive");
  if (clip.samples.empty()) throw ValidationError("audio clip has no samples");
  for (float s : clip.samples) {
    if (!std::isfinite(s) || s < -1.0f || s > 1.0f) {
      throw ValidationError("audio sample outside [-1, 1]");
    }
  }
}

namespace {

std::int16_t Pcm16(float s) {
  const long q = std::lround(static_cast<double>(s) * 32768.0);
  return static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L));
}

}  // namespace

std::vector<std::uint8_t> EncodeWav(const AudioClip& clip) {
  ValidateClip(clip);
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  Put32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  Put32(out, 16);
  Put16(out, 1);  // PCM
  Put16(out, 1);  // mono
  Put32(out, clip.sample_rate);
  Put32(out, clip.sample_rate * 2);
  Put16(out, 2);
  Put16(out, 16);
  PutTag(out, "data");
  Put32(out, data_bytes);
  for (float s : clip.samples) {
    Put16(out, static_cast<std::uint16_t>(Pcm16(s)));
  }
  return out;
}

AudioClip QuantizePcm16(const AudioClip& clip) {
  ValidateClip(clip);
  AudioClip out = clip;
  for (float& s : out.samples) s = static_cast<float>(Pcm16(s)) / 32768.0f;
  return out;
}

AudioClip DecodeWav(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || !TagIs(b, 0, "RIFF")) {
    throw UnsupportedFormatError("riff", "missing RIFF header");
  }
  if (!TagIs(b, 8, "WAVE")) throw UnsupportedFormatError("wave", "not a WAVE file");

  bool have_fmt = false;
  AudioClip clip;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t size = Get32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (size > b.size() - body) {
      throw UnsupportedFormatError("chunk_size", "chunk runs past end of file");
    }
    if (TagIs(b, pos, "fmt ")) {
      if (size < 16) throw UnsupportedFormatError("fmt", "fmt chunk too short");
      const std::uint16_t format = Get16(b, body);
      const std::uint16_t channels = Get16(b, body + 2);
      const std::uint32_t rate = Get32(b, body + 4);
      const std::uint16_t bits = Get16(b, body + 14);
      if (format != 1) {
        throw UnsupportedFormatError("audio_format",
                                     "expected PCM (1), got " + std::to_string(format));
      }
      if (channels != 1) {
        throw UnsupportedFormatError("channels",
                                     "expected mono, got " + std::to_string(channels));
      }
      if (rate != kSampleRate) {
        throw UnsupportedFormatError("sample_rate",
                                     "expected 16000 Hz, got " + std::to_string(rate));
      }
      if (bits != 16) {
        throw UnsupportedFormatError("bits_per_sample",
                                     "expected 16, got " + std::to_string(bits));
      }
      clip.sample_rate = rate;
      have_fmt = true;
    } else if (TagIs(b, pos, "data")) {
      if (!have_fmt) throw UnsupportedFormatError("fmt", "data chunk before fmt chunk");
      if (size % 2 != 0) throw UnsupportedFormatError("data", "odd data length");
      clip.samples.resize(size / 2);
      for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        const auto s = static_cast<std::int16_t>(Get16(b, body + 2 * i));
        clip.samples[i] = static_cast<float>(s) / 32768.0f;
      }
      if (clip.samples.empty()) throw UnsupportedFormatError("data", "no samples");
      return clip;
    }
    pos = body + size + (size & 1);
  }
  throw UnsupportedFormatError(have_fmt ? "data" : "fmt", "chunk not found");
}

AudioClip LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodeWav(bytes);
}

void SaveWav(const AudioClip& clip, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodeWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

}  // namespace rnncov
