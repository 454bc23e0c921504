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

// Log mel filterbank front end: 25 ms Hamming windows every 10 ms, 512-point
// FFT, 20 area-normalized triangular filters spanning 0 to 8 kHz.

#ifndef RNNCOV_FEATURES_H_
#define RNNCOV_FEATURES_H_

#include <cstddef>
#include <vector>

#include "rnncov/audio.h"
#include "rnncov/trace.h"

namespace rnncov {

inline constexpr std::size_t kFrameLength = 400;
inline constexpr std::size_t kFrameHop = 160;
inline constexpr std::size_t kFftSize = 512;
inline constexpr std::size_t kFeatureDim = 20;
inline constexpr double kEnergyFloor = 1e-10;

// floor((len - kFrameLength) / kFrameHop) + 1, or 0 for short clips.
std::size_t FrameCount(std::size_t num_samples);

double HzToMel(double hz);
double MelToHz(double mel);
// Peak frequency of filter `band`.
double MelBandCenterHz(std::size_t band);

// Throws ValidationError for a clip that is not at kSampleRate or is shorter
// than one frame.
std::vector<FeatureVector> ExtractFeatures(const AudioClip& clip);

}  // namespace rnncov

#endif  // RNNCOV_FEATURES_H_
