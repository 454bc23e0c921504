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

#include "rnncov/synth.h"

#include <cmath>
#include <numbers>

#include "rnncov/error.h"
#include "rnncov/features.h"

namespace rnncov {

namespace {

constexpr double kBandGain = 0.6;
constexpr double kBandBias = -2.1;
constexpr double kBandMemory = 0.2;
constexpr double kExtraInputScale = 0.03;
constexpr double kFade = 0.005;

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::size_t Samples(double seconds) {
  return static_cast<std::size_t>(std::lround(seconds * kSampleRate));
}

}  // namespace

Vocabulary ToneWordVocabulary() {
  Vocabulary v = {"<blank>", " "};
  for (int i = 0; i < kToneLetters; ++i) v.push_back(std::string(1, static_cast<char>(kFirstToneLetter + i)));
  return v;
}

ToyRnnWeights ToneWordWeights(std::uint64_t seed, std::size_t extra_units) {
  const std::size_t bands = kFeatureDim;
  const std::size_t hidden = bands + extra_units;
  ToyRnnWeights w = ToyRnnWeights::Zeros(bands, hidden, 2 + kToneLetters);
  const double mean = 1.0 / static_cast<double>(bands);
  for (std::size_t j = 0; j < bands; ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    for (std::size_t b = 0; b < bands; ++b) {
      w.w_xh(r, static_cast<Eigen::Index>(b)) = kBandGain * ((b == j ? 1.0 : 0.0) - mean);
    }
    w.w_hh(r, r) = kBandMemory;
    w.b_h(r) = kBandBias;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  const double rec_scale = 0.8 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t u = bands; u < hidden; ++u) {
    const auto r = static_cast<Eigen::Index>(u);
    // Raw log energies: these units track loudness as well as spectrum.
    for (std::size_t b = 0; b < bands; ++b) {
      w.w_xh(r, static_cast<Eigen::Index>(b)) = kExtraInputScale * n(rng);
    }
    for (std::size_t c = 0; c < hidden; ++c) {
      w.w_hh(r, static_cast<Eigen::Index>(c)) = rec_scale * n(rng);
    }
  }
  // Silence drives every band unit towards -1, so letter logits fall below
  // the space logit of zero.
  w.b_y(0) = -0.5;
  for (int i = 0; i < kToneLetters; ++i) {
    w.w_hy(2 + i, 2 * i) = 1.0;
    w.w_hy(2 + i, 2 * i + 1) = 1.0;
  }
  return w;
}

double LetterToneHz(char letter) {
  const int i = letter - kFirstToneLetter;
  if (i < 0 || i >= kToneLetters) {
    throw ValidationError(std::string("no tone for letter '") + letter + "'");
  }
  const double lo = HzToMel(MelBandCenterHz(2 * static_cast<std::size_t>(i)));
  const double hi = HzToMel(MelBandCenterHz(2 * static_cast<std::size_t>(i) + 1));
  return MelToHz(0.5 * (lo + hi));
}

AudioClip RenderToneWords(const std::string& text, std::mt19937_64& rng,
                          const SynthOptions& opt) {
  AudioClip clip;
  auto silence = [&](double seconds) { clip.samples.resize(clip.samples.size() + Samples(seconds), 0.0f); };
  silence(opt.edge_silence_s);
  const double amp = Uniform(rng, opt.min_amplitude, opt.max_amplitude);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ' ') {
      silence(Uniform(rng, opt.min_gap_s, opt.max_gap_s));
      continue;
    }
    const double hz = LetterToneHz(text[i]) * (1.0 + Uniform(rng, -opt.detune, opt.detune));
    const std::size_t n = Samples(Uniform(rng, opt.min_letter_s, opt.max_letter_s));
    const std::size_t fade = Samples(kFade);
    for (std::size_t k = 0; k < n; ++k) {
      double env = 1.0;
      if (k < fade) env = 0.5 - 0.5 * std::cos(std::numbers::pi * k / fade);
      if (n - 1 - k < fade) env = 0.5 - 0.5 * std::cos(std::numbers::pi * (n - 1 - k) / fade);
      const double t = static_cast<double>(k) / kSampleRate;
      clip.samples.push_back(static_cast<float>(amp * env * std::sin(2 * std::numbers::pi * hz * t)));
    }
  }
  silence(opt.edge_silence_s);
  return clip;
}

SynthUtterance RandomUtterance(std::mt19937_64& rng, const SynthOptions& opt) {
  if (opt.letters.size() < 2) throw ConfigError("synthesis needs at least two letters");
  SynthUtterance u;
  const int words = UniformInt(rng, opt.min_words, opt.max_words);
  for (int w = 0; w < words; ++w) {
    if (w > 0) u.text += ' ';
    const int letters = UniformInt(rng, opt.min_letters, opt.max_letters);
    char prev = 0;
    for (int l = 0; l < letters; ++l) {
      char c;
      do {
        c = opt.letters[static_cast<std::size_t>(UniformInt(rng, 0, static_cast<int>(opt.letters.size()) - 1))];
      } while (c == prev);
      u.text += c;
      prev = c;
    }
  }
  u.clip = RenderToneWords(u.text, rng, opt);
  return u;
}

}  // namespace rnncov
