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

#include "rnncov/features.h"

#include <algorithm>
#include <cmath>

#include "rnncov/dsp.h"
#include "rnncov/error.h"

namespace rnncov {

namespace {

constexpr double kMaxHz = 8000.0;

double MelPoint(std::size_t i) {
  return HzToMel(kMaxHz) * static_cast<double>(i) / static_cast<double>(kFeatureDim + 1);
}

// weights[band][bin] over the kFftSize / 2 + 1 bins.
std::vector<std::vector<double>> Filterbank() {
  const std::size_t bins = kFftSize / 2 + 1;
  std::vector<std::vector<double>> w(kFeatureDim, std::vector<double>(bins, 0.0));
  for (std::size_t b = 0; b < kFeatureDim; ++b) {
    const double lo = MelToHz(MelPoint(b));
    const double mid = MelToHz(MelPoint(b + 1));
    const double hi = MelToHz(MelPoint(b + 2));
    const double norm = 2.0 / (hi - lo);
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * kSampleRate / static_cast<double>(kFftSize);
      double v = 0.0;
      if (f > lo && f <= mid) v = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) v = (hi - f) / (hi - mid);
      w[b][k] = v * norm;
    }
  }
  return w;
}

}  // namespace

std::size_t FrameCount(std::size_t num_samples) {
  if (num_samples < kFrameLength) return 0;
  return (num_samples - kFrameLength) / kFrameHop + 1;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

double MelBandCenterHz(std::size_t band) { return MelToHz(MelPoint(band + 1)); }

std::vector<FeatureVector> ExtractFeatures(const AudioClip& clip) {
  if (clip.sample_rate != kSampleRate) {
    throw ValidationError("feature extraction needs " + std::to_string(kSampleRate) +
                          " Hz audio, got " + std::to_string(clip.sample_rate));
  }
  const std::size_t frames = FrameCount(clip.samples.size());
  if (frames == 0) {
    throw ValidationError("clip of " + std::to_string(clip.samples.size()) +
                          " samples is shorter than one analysis window");
  }
  static const std::vector<std::vector<double>> bank = Filterbank();
  static const std::vector<double> window = dsp::HammingWindow(kFrameLength);
  dsp::RealFft fft(kFftSize);
  std::vector<double> buf(kFftSize, 0.0);
  std::vector<double> power(kFftSize / 2 + 1);
  std::vector<FeatureVector> out;
  out.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * kFrameHop;
    for (std::size_t i = 0; i < kFrameLength; ++i) {
      buf[i] = window[i] * static_cast<double>(clip.samples[start + i]);
    }
    const auto bins = fft.Forward(buf);
    for (std::size_t k = 0; k < bins.size(); ++k) power[k] = std::norm(bins[k]);
    FeatureVector frame(kFeatureDim);
    for (std::size_t b = 0; b < kFeatureDim; ++b) {
      double e = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) e += bank[b][k] * power[k];
      frame[b] = static_cast<float>(std::log(std::max(e, kEnergyFloor)));
    }
    out.push_back(std::move(frame));
  }
  return out;
}

}  // namespace rnncov
