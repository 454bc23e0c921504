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


// Metamorphic audio transformations and mutation lineage.
//
// Transformations fall into four categories. A mutant may be altered at most
// once in each of the volume, speed and clearness categories; the unaffected
// category is unrestricted.
//
//   volume     ChangeVolume, LowPassFilter, HighPassFilter
//   speed      PitchShift, ChangeSpeed
//   clearness  AddWhiteNoise
//   unaffected DRC, Trim

#ifndef RNNCOV_TRANSFORMS_H_
#define RNNCOV_TRANSFORMS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rnncov/audio.h"

namespace rnncov {

enum class TransformKind {
  kAddWhiteNoise,
  kPitchShift,
  kTrim,
  kChangeSpeed,
  kChangeVolume,
  kDrc,
  kLowPassFilter,
  kHighPassFilter,
};

inline constexpr std::array<TransformKind, 8> kAllTransforms = {
    TransformKind::kAddWhiteNoise, TransformKind::kPitchShift,
    TransformKind::kTrim,          TransformKind::kChangeSpeed,
    TransformKind::kChangeVolume,  TransformKind::kDrc,
    TransformKind::kLowPassFilter, TransformKind::kHighPassFilter};

enum class TransformCategory { kVolume, kSpeed, kClearness, kUnaffected };

TransformCategory CategoryOf(TransformKind kind);
// Lower-case names: "addwhitenoise", "pitchshift", "trim", "changespeed",
// "changevolume", "drc", "lowpassfilter", "highpassfilter".
std::string_view KindName(TransformKind kind);
std::string_view CategoryName(TransformCategory c);  // "VRT", "SRT", ...
// Throws ConfigError for unknown names.
TransformKind ParseKind(std::string_view name);

// Sampling ranges for the random parameters.
struct TransformRanges {
  double gain_min = 0.7, gain_max = 1.3;
  double semitones_min = -2.0, semitones_max = 2.0;
  double speed_min = 0.9, speed_max = 1.1;
  double snr_db_min = 25.0, snr_db_max = 40.0;
  double lowpass_min_hz = 2000.0, lowpass_max_hz = 7000.0;
  double highpass_min_hz = 100.0, highpass_max_hz = 400.0;
  double drc_threshold_db = -20.0, drc_ratio = 4.0;
  double trim_threshold_db = -40.0;
};

using TransformParams = std::map<std::string, double>;

struct AppliedTransform {
  TransformKind kind;
  TransformParams params;
  std::uint64_t seed = 0;  // seeds the rng the transform was applied with

  bool operator==(const AppliedTransform&) const = default;
};

struct MutationRecord {
  std::string seed_id;
  std::vector<AppliedTransform> history;

  bool operator==(const MutationRecord&) const = default;
};

// At most one volume, one speed and one clearness transform.
bool SatisfiesCategoryConstraint(const MutationRecord& rec);

// Uniform draw over admissible kinds: unaffected kinds always, others only if
// their category is not in the history yet. Returns nullopt once the history
// holds `max_history` transforms.
std::optional<TransformKind> PickTransform(const MutationRecord& rec,
                                           std::mt19937_64& rng,
                                           std::size_t max_history = 6);

struct TransformResult {
  AudioClip clip;
  TransformParams params;
};

// Samples the kind's parameters from `rng` and applies it. Outputs stay in
// [-1, 1]. Throws TransformError when Trim removes everything or ChangeSpeed
// would leave no samples.
TransformResult ApplyTransform(const AudioClip& clip, TransformKind kind,
                               std::mt19937_64& rng,
                               const TransformRanges& ranges = {});

// Seeds a fresh rng with `seed`, applies the transform, and returns the clip
// with its lineage entry.
std::pair<AudioClip, AppliedTransform> ApplySeeded(
    const AudioClip& clip, TransformKind kind, std::uint64_t seed,
    const TransformRanges& ranges = {});

nlohmann::ordered_json ToJson(const MutationRecord& rec);
// Throws ParseError on a malformed document.
MutationRecord MutationRecordFromJson(const nlohmann::ordered_json& j);

}  // namespace rnncov

#endif  // RNNCOV_TRANSFORMS_H_
