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

// Hand-constructed tone-word transcriber and a synthetic corpus it can read.
//
// Letters 'a'..'j' are steady tones; letter i sits where filterbank bands 2i
// and 2i+1 cross. Words are runs of letters with no gap, separated by
// silence. The fixture's first 20 hidden units watch one band each relative
// to the frame's mean log energy, so transcripts do not depend on loudness.
// Extra hidden units are random, see raw log energies and do not feed the
// output layer.

#ifndef RNNCOV_SYNTH_H_
#define RNNCOV_SYNTH_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rnncov/audio.h"
#include "rnncov/sut.h"

namespace rnncov {

inline constexpr char kFirstToneLetter = 'a';
inline constexpr int kToneLetters = 10;

// blank, space, 'a'..'j'.
Vocabulary ToneWordVocabulary();
ToyRnnWeights ToneWordWeights(std::uint64_t seed, std::size_t extra_units = 12);

double LetterToneHz(char letter);

struct SynthOptions {
  std::string letters = "bcdefg";
  int min_words = 2, max_words = 3;
  int min_letters = 2, max_letters = 4;
  double min_letter_s = 0.09, max_letter_s = 0.14;
  double min_gap_s = 0.12, max_gap_s = 0.2;
  double edge_silence_s = 0.1;
  double min_amplitude = 0.2, max_amplitude = 0.5;
  double detune = 0.03;  // relative frequency jitter per letter
};

struct SynthUtterance {
  std::string text;
  AudioClip clip;
};

// Renders `text` (letters from 'a'..'j' and single spaces). Tone parameters
// are drawn from `rng`.
AudioClip RenderToneWords(const std::string& text, std::mt19937_64& rng,
                          const SynthOptions& opt = {});
// Random text with no letter repeated back to back, then rendered.
SynthUtterance RandomUtterance(std::mt19937_64& rng, const SynthOptions& opt = {});

}  // namespace rnncov

#endif  // RNNCOV_SYNTH_H_
