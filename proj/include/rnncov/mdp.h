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


// Abstract state-transition model of a recurrent network, built from a
// profiling trace set. States and input frames are each abstracted with
// their own projection and grid; every concrete transition adds one count to
// its abstract (source, input, destination) bucket. Probabilities are derived
// from the counts on query.

#ifndef RNNCOV_MDP_H_
#define RNNCOV_MDP_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "rnncov/abstraction.h"
#include "rnncov/trace.h"

namespace rnncov {

struct AbstractTransition {
  AbstractState src;
  AbstractInput input;
  AbstractState dst;

  auto operator<=>(const AbstractTransition&) const = default;
  bool operator==(const AbstractTransition&) const = default;
};

struct ModelParams {
  std::size_t state_dims = 3;        // k
  std::size_t state_partitions = 10; // m
  std::size_t input_dims = 3;        // k_in
  std::size_t input_partitions = 10; // m_in

  bool operator==(const ModelParams&) const = default;
};

using Choice = std::pair<AbstractState, AbstractInput>;

// Observed destinations for one (state, input) choice.
struct Outcomes {
  std::map<AbstractState, std::uint64_t> counts;
  std::uint64_t total = 0;

  bool operator==(const Outcomes&) const = default;
};

struct MdpModel {
  ModelParams params;
  std::size_t state_dim = 0;  // concrete
  std::size_t input_dim = 0;  // concrete
  Projection state_projection;
  GridConfig state_grid;
  Projection input_projection;
  GridConfig input_grid;

  std::set<AbstractState> states;
  std::set<AbstractState> initial;
  std::map<Choice, Outcomes> transitions;
  std::map<AbstractState, std::set<AbstractInput>> enabled_inputs;

  // Number of concrete transitions folded in while building.
  std::uint64_t concrete_transitions = 0;
  // Hash of the canonical serialization; identifies the model in coverage
  // profiles.
  std::uint64_t fingerprint = 0;

  AbstractState AbstractStateOf(std::span<const float> s) const;
  AbstractInput AbstractInputOf(std::span<const float> x) const;
  // Returns nullptr for unobserved choices.
  const Outcomes* Find(const AbstractState& s, const AbstractInput& x) const;
  // Number of (state, input) choices, i.e. the sum of |enabled_inputs(s)|.
  std::size_t ChoiceCount() const { return transitions.size(); }
};

// Throws ValidationError for an empty trace set and ConfigError for
// abstraction parameters the data cannot support.
MdpModel BuildModel(const TraceSet& ts, const ModelParams& params);

// count(s, x, d) / count(s, x, *). Throws UndefinedError if (s, x) was never
// observed; returns 0 for an unseen destination of an observed choice.
double TransitionProbability(const MdpModel& model, const AbstractState& s,
                             const AbstractInput& x, const AbstractState& d);

// Inputs observed at `s` while profiling; empty for unvisited states.
std::set<AbstractInput> EnabledInputs(const MdpModel& model,
                                      const AbstractState& s);

// (abs(s_i), abs_in(x_i), abs(s_{i+1})) for every step of `trace`.
std::vector<AbstractTransition> AbstractTrace(const MdpModel& model,
                                              const Trace& trace);

void WriteModel(const MdpModel& model, std::ostream& out);
MdpModel ReadModel(std::istream& in);
void SaveModel(const MdpModel& model, const std::filesystem::path& path);
MdpModel LoadModel(const std::filesystem::path& path);

}  // namespace rnncov

#endif  // RNNCOV_MDP_H_
