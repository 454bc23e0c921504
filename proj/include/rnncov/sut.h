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

// Systems under test: anything that turns a clip into a transcript plus the
// trace of hidden states it went through. The built-in system is a single
// layer tanh recurrence over log filterbank frames with greedy decoding.

#ifndef RNNCOV_SUT_H_
#define RNNCOV_SUT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rnncov/audio.h"
#include "rnncov/trace.h"

namespace rnncov {

struct ToyRnnWeights {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t vocab_size = 0;
  Eigen::MatrixXd w_xh;  // hidden x input
  Eigen::MatrixXd w_hh;  // hidden x hidden
  Eigen::VectorXd b_h;
  Eigen::MatrixXd w_hy;  // vocab x hidden
  Eigen::VectorXd b_y;

  // All-zero weights of the given shape.
  static ToyRnnWeights Zeros(std::size_t input_dim, std::size_t hidden_dim,
                             std::size_t vocab_size);
  bool operator==(const ToyRnnWeights&) const;
};

// Throws ValidationError on inconsistent shapes or non-finite values.
void ValidateWeights(const ToyRnnWeights& w);

// Gaussian weights with fixed seed. Input weights are scaled by
// `scale / sqrt(input_dim)`, recurrent ones by `scale / sqrt(hidden_dim)`.
ToyRnnWeights RandomWeights(std::size_t input_dim, std::size_t hidden_dim,
                            std::size_t vocab_size, std::uint64_t seed,
                            double scale = 1.0);

// "RNNW 1 <input_dim> <hidden_dim> <vocab_size>" followed by the rows of
// w_xh, w_hh, b_h (one line), w_hy and b_y (one line).
void WriteWeights(const ToyRnnWeights& w, std::ostream& out);
ToyRnnWeights ReadWeights(std::istream& in);
ToyRnnWeights LoadWeights(const std::filesystem::path& path);
void SaveWeights(const ToyRnnWeights& w, const std::filesystem::path& path);

// Symbol per token id; id 0 is the blank. In files, one symbol per line and
// the word separator is spelled "<space>".
using Vocabulary = std::vector<std::string>;

Vocabulary ReadVocabulary(std::istream& in);
void WriteVocabulary(const Vocabulary& v, std::ostream& out);
Vocabulary LoadVocabulary(const std::filesystem::path& path);
void SaveVocabulary(const Vocabulary& v, const std::filesystem::path& path);

struct RnnStepResult {
  StateVector state;  // every entry strictly inside (-1, 1)
  std::vector<double> logits;
};

// s' = tanh(w_xh x + w_hh s + b_h), logits = w_hy s' + b_y. The logits are
// computed from the stored single-precision state.
RnnStepResult RnnStep(const ToyRnnWeights& w, std::span<const float> state,
                      std::span<const float> input);

struct Transcription {
  std::string text;
  Trace trace;
};

// Greedy decoding with duplicate collapse and blank removal. Runs of spaces
// are collapsed and the text is trimmed.
Transcription Transcribe(const ToyRnnWeights& w, const Vocabulary& vocab,
                         const AudioClip& clip, const std::string& trace_id);

class SystemUnderTest {
 public:
  virtual ~SystemUnderTest() = default;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual Transcription Transcribe(const AudioClip& clip,
                                   const std::string& trace_id) const = 0;
};

class ToyRnnSut final : public SystemUnderTest {
 public:
  // Throws ValidationError if the vocabulary size or input dimension does
  // not fit the weights.
  ToyRnnSut(ToyRnnWeights weights, Vocabulary vocab);

  std::size_t state_dim() const override { return weights_.hidden_dim; }
  std::size_t input_dim() const override { return weights_.input_dim; }
  Transcription Transcribe(const AudioClip& clip,
                           const std::string& trace_id) const override;

  const ToyRnnWeights& weights() const { return weights_; }
  const Vocabulary& vocab() const { return vocab_; }

 private:
  ToyRnnWeights weights_;
  Vocabulary vocab_;
};

}  // namespace rnncov

#endif  // RNNCOV_SUT_H_
