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

#include "rnncov/sut.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "rnncov/error.h"
#include "rnncov/features.h"
#include "rnncov/text.h"

namespace rnncov {

namespace {

constexpr float kStateBound = 0.99999994f;  // largest float below 1
constexpr const char* kSpaceSymbol = "<space>";

void CheckShape(const Eigen::MatrixXd& m, std::size_t rows, std::size_t cols,
                const char* name) {
  if (static_cast<std::size_t>(m.rows()) != rows ||
      static_cast<std::size_t>(m.cols()) != cols) {
    throw ValidationError(std::string(name) + " is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!m.allFinite()) throw ValidationError(std::string(name) + " has non-finite entries");
}

void WriteRows(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << text::FormatDouble(m(r, c));
    }
    out << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> Next(std::size_t expected) {
    if (!std::getline(in_, line_)) {
      throw ParseError(line_no_ + 1, "unexpected end of weights file");
    }
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    auto tokens = text::SplitSpaces(line_);
    if (expected != 0 && tokens.size() != expected) {
      throw ParseError(line_no_, "expected " + std::to_string(expected) +
                                     " values, found " + std::to_string(tokens.size()));
    }
    return tokens;
  }

  void ReadRows(Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const auto tokens = Next(static_cast<std::size_t>(m.cols()));
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = text::ParseDouble(tokens[static_cast<std::size_t>(c)], line_no_);
      }
    }
  }

  std::size_t line() const { return line_no_; }
  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

std::string NormalizeSpaces(const std::string& s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (c == ' ') {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

}  // namespace

ToyRnnWeights ToyRnnWeights::Zeros(std::size_t input_dim, std::size_t hidden_dim,
                                   std::size_t vocab_size) {
  ToyRnnWeights w;
  w.input_dim = input_dim;
  w.hidden_dim = hidden_dim;
  w.vocab_size = vocab_size;
  const auto in = static_cast<Eigen::Index>(input_dim);
  const auto hid = static_cast<Eigen::Index>(hidden_dim);
  const auto voc = static_cast<Eigen::Index>(vocab_size);
  w.w_xh = Eigen::MatrixXd::Zero(hid, in);
  w.w_hh = Eigen::MatrixXd::Zero(hid, hid);
  w.b_h = Eigen::VectorXd::Zero(hid);
  w.w_hy = Eigen::MatrixXd::Zero(voc, hid);
  w.b_y = Eigen::VectorXd::Zero(voc);
  return w;
}

bool ToyRnnWeights::operator==(const ToyRnnWeights& o) const {
  return input_dim == o.input_dim && hidden_dim == o.hidden_dim &&
         vocab_size == o.vocab_size && w_xh == o.w_xh && w_hh == o.w_hh &&
         b_h == o.b_h && w_hy == o.w_hy && b_y == o.b_y;
}

void ValidateWeights(const ToyRnnWeights& w) {
  if (w.input_dim == 0 || w.hidden_dim == 0 || w.vocab_size == 0) {
    throw ValidationError("weight dimensions must be positive");
  }
  CheckShape(w.w_xh, w.hidden_dim, w.input_dim, "W_xh");
  CheckShape(w.w_hh, w.hidden_dim, w.hidden_dim, "W_hh");
  CheckShape(w.b_h, w.hidden_dim, 1, "b_h");
  CheckShape(w.w_hy, w.vocab_size, w.hidden_dim, "W_hy");
  CheckShape(w.b_y, w.vocab_size, 1, "b_y");
}

ToyRnnWeights RandomWeights(std::size_t input_dim, std::size_t hidden_dim,
                            std::size_t vocab_size, std::uint64_t seed, double scale) {
  ToyRnnWeights w = ToyRnnWeights::Zeros(input_dim, hidden_dim, vocab_size);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  auto fill = [&](auto& m, double s) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = s * n(rng);
    }
  };
  fill(w.w_xh, scale / std::sqrt(static_cast<double>(input_dim)));
  fill(w.w_hh, scale / std::sqrt(static_cast<double>(hidden_dim)));
  fill(w.b_h, 0.1 * scale);
  fill(w.w_hy, scale / std::sqrt(static_cast<double>(hidden_dim)));
  fill(w.b_y, 0.1 * scale);
  return w;
}

void WriteWeights(const ToyRnnWeights& w, std::ostream& out) {
  ValidateWeights(w);
  out << "RNNW 1 " << w.input_dim << ' ' << w.hidden_dim << ' ' << w.vocab_size << '\n';
  WriteRows(out, w.w_xh);
  WriteRows(out, w.w_hh);
  WriteRows(out, w.b_h.transpose());
  WriteRows(out, w.w_hy);
  WriteRows(out, w.b_y.transpose());
}

ToyRnnWeights ReadWeights(std::istream& in) {
  LineReader r(in);
  const auto header = r.Next(5);
  if (header[0] != "RNNW") throw ParseError(1, "not a weights file (missing RNNW)");
  if (header[1] != "1") throw ParseError(1, "unsupported weights version " + std::string(header[1]));
  std::size_t dims[3];
  for (int i = 0; i < 3; ++i) {
    const std::int64_t v = text::ParseInt(header[2 + i], 1);
    if (v <= 0 || v > (1 << 20)) throw ParseError(1, "dimension out of range");
    dims[i] = static_cast<std::size_t>(v);
  }
  ToyRnnWeights w = ToyRnnWeights::Zeros(dims[0], dims[1], dims[2]);
  r.ReadRows(w.w_xh);
  r.ReadRows(w.w_hh);
  Eigen::MatrixXd row(1, w.b_h.size());
  r.ReadRows(row);
  w.b_h = row.transpose();
  r.ReadRows(w.w_hy);
  row.resize(1, w.b_y.size());
  r.ReadRows(row);
  w.b_y = row.transpose();
  std::string rest;
  while (std::getline(r.stream(), rest)) {
    if (!text::SplitSpaces(rest).empty() && rest != "\r") {
      throw ParseError(r.line() + 1, "trailing data after weights");
    }
  }
  return w;
}

ToyRnnWeights LoadWeights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weights file " + path.string());
  return ReadWeights(in);
}

void SaveWeights(const ToyRnnWeights& w, const std::filesystem::path& path) {
  std::ostringstream buf;
  WriteWeights(w, buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << buf.str()) || !out.flush()) {
    throw IoError("cannot write weights file " + path.string());
  }
}

Vocabulary ReadVocabulary(std::istream& in) {
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError(v.size() + 1, "empty vocabulary symbol");
    v.push_back(line == kSpaceSymbol ? " " : line);
  }
  if (v.empty()) throw ParseError(1, "empty vocabulary");
  return v;
}

void WriteVocabulary(const Vocabulary& v, std::ostream& out) {
  for (const std::string& s : v) out << (s == " " ? kSpaceSymbol : s) << '\n';
}

Vocabulary LoadVocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file " + path.string());
  return ReadVocabulary(in);
}

void SaveVocabulary(const Vocabulary& v, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write vocabulary file " + path.string());
  WriteVocabulary(v, out);
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

RnnStepResult RnnStep(const ToyRnnWeights& w, std::span<const float> state,
                      std::span<const float> input) {
  if (state.size() != w.hidden_dim || input.size() != w.input_dim) {
    throw ValidationError("rnn step: state/input of size " + std::to_string(state.size()) +
                          "/" + std::to_string(input.size()) + ", weights expect " +
                          std::to_string(w.hidden_dim) + "/" + std::to_string(w.input_dim));
  }
  const auto hid = static_cast<Eigen::Index>(w.hidden_dim);
  Eigen::VectorXd s(hid), x(static_cast<Eigen::Index>(w.input_dim));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = state[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = input[static_cast<std::size_t>(i)];
  const Eigen::VectorXd pre = w.w_xh * x + w.w_hh * s + w.b_h;
  RnnStepResult out;
  out.state.resize(w.hidden_dim);
  Eigen::VectorXd next(hid);
  for (Eigen::Index i = 0; i < hid; ++i) {
    const float v = std::clamp(static_cast<float>(std::tanh(pre(i))), -kStateBound, kStateBound);
    out.state[static_cast<std::size_t>(i)] = v;
    next(i) = v;
  }
  const Eigen::VectorXd logits = w.w_hy * next + w.b_y;
  out.logits.assign(logits.data(), logits.data() + logits.size());
  return out;
}

Transcription Transcribe(const ToyRnnWeights& w, const Vocabulary& vocab,
                         const AudioClip& clip, const std::string& trace_id) {
  if (vocab.size() != w.vocab_size) {
    throw ValidationError("vocabulary has " + std::to_string(vocab.size()) +
                          " symbols, weights expect " + std::to_string(w.vocab_size));
  }
  ValidateClip(clip);
  const std::vector<FeatureVector> frames = ExtractFeatures(clip);
  if (frames.front().size() != w.input_dim) {
    throw ValidationError("weights expect " + std::to_string(w.input_dim) +
                          "-dimensional frames, features have " +
                          std::to_string(frames.front().size()));
  }
  Transcription out;
  out.trace.id = trace_id;
  out.trace.steps.reserve(frames.size());
  StateVector s(w.hidden_dim, 0.0f);
  std::string raw;
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (const FeatureVector& x : frames) {
    RnnStepResult r = RnnStep(w, s, x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < r.logits.size(); ++k) {
      if (r.logits[k] > r.logits[best]) best = k;
    }
    out.trace.steps.push_back(TraceStep{std::move(s), x, static_cast<TokenId>(best)});
    if (best != prev && best != 0) raw += vocab[best];
    prev = best;
    s = std::move(r.state);
  }
  out.trace.final_state = std::move(s);
  out.text = NormalizeSpaces(raw);
  return out;
}

ToyRnnSut::ToyRnnSut(ToyRnnWeights weights, Vocabulary vocab)
    : weights_(std::move(weights)), vocab_(std::move(vocab)) {
  ValidateWeights(weights_);
  if (vocab_.size() != weights_.vocab_size) {
    throw ValidationError("vocabulary has " + std::to_string(vocab_.size()) +
                          " symbols, weights expect " + std::to_string(weights_.vocab_size));
  }
  if (weights_.input_dim != kFeatureDim) {
    throw ValidationError("weights expect " + std::to_string(weights_.input_dim) +
                          "-dimensional frames, the front end produces " +
                          std::to_string(kFeatureDim));
  }
}

Transcription ToyRnnSut::Transcribe(const AudioClip& clip,
                                    const std::string& trace_id) const {
  return rnncov::Transcribe(weights_, vocab_, clip, trace_id);
}

}  // namespace rnncov
