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


// Concrete execution traces of a recurrent model and the on-disk trace
// format.
//
// A trace records, for every step i, the hidden state s_i the model held
// before consuming input frame x_i, the emitted token y_i, and finally the
// state after the last step. Every trace starts from the all-zeros state.
//
// File format (one record per line, '\n' terminated):
//
//   RNNTRACE 1 <state_dim> <input_dim>
//   T <trace_id>
//   S <y> | <x_0> ... <x_{input_dim-1}> | <s_0> ... <s_{state_dim-1}>
//   ...
//   F <s_0> ... <s_{state_dim-1}>
//
// Reals are written with 9 significant digits, which round-trips float32.

#ifndef RNNCOV_TRACE_H_
#define RNNCOV_TRACE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rnncov {

// Hidden state vector of length state_dim.
using StateVector = std::vector<float>;
// Input feature frame of length input_dim.
using FeatureVector = std::vector<float>;
using TokenId = std::uint32_t;

struct TraceStep {
  StateVector state;
  FeatureVector input;
  TokenId output = 0;

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::string id;
  std::vector<TraceStep> steps;
  StateVector final_state;

  bool operator==(const Trace&) const = default;
};

struct TraceSet {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::vector<Trace> traces;

  bool operator==(const TraceSet&) const = default;

  std::size_t TotalSteps() const;
};

// (s_i, x_i, y_i, s_{i+1}). Views into the owning Trace.
struct ConcreteTransition {
  std::span<const float> source;
  std::span<const float> input;
  TokenId output;
  std::span<const float> destination;
};

// Throws ValidationError naming the trace id when the trace is empty, has a
// non-zero initial state, non-finite entries, or mismatched dimensions.
void ValidateTrace(const Trace& trace, std::size_t state_dim,
                   std::size_t input_dim);
void ValidateTraceSet(const TraceSet& ts);

// One entry per step; entry i's destination is entry i+1's source and the
// last destination is the trace's final state.
std::vector<ConcreteTransition> TraceTransitions(const Trace& trace);

TraceSet ReadTraces(std::istream& in);
void WriteTraces(const TraceSet& ts, std::ostream& out);

TraceSet LoadTraces(const std::filesystem::path& path);
void SaveTraces(const TraceSet& ts, const std::filesystem::path& path);

}  // namespace rnncov

#endif  // RNNCOV_TRACE_H_
