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


// Normalized PCM clips and canonical WAV I/O (RIFF/WAVE, 16-bit signed
// little-endian PCM, mono, 16 kHz).

#ifndef RNNCOV_AUDIO_H_
#define RNNCOV_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rnncov {

inline constexpr std::uint32_t kSampleRate = 16000;

struct AudioClip {
  std::vector<float> samples;  // in [-1, 1]
  std::uint32_t sample_rate = kSampleRate;

  bool operator==(const AudioClip&) const = default;
};

// Throws ValidationError if the clip is empty, non-finite, out of range, or
// has a non-positive sample rate.
void ValidateClip(const AudioClip& clip);

// Sample s maps to s / 32768; encoding rounds x * 32768 and saturates.
std::vector<std::uint8_t> EncodeWav(const AudioClip& clip);
// Throws UnsupportedFormatError naming the offending header field.
AudioClip DecodeWav(std::span<const std::uint8_t> bytes);

// Snaps samples to the 16-bit grid, so a WAV round trip is lossless.
AudioClip QuantizePcm16(const AudioClip& clip);

AudioClip LoadWav(const std::filesystem::path& path);
void SaveWav(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace rnncov

#endif  // RNNCOV_AUDIO_H_
