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


#include "rnncov/mdp.h"

#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "rnncov/error.h"
#include "support.h"

namespace rnncov {
namespace {

using testing::S;
using testing::X;

std::string Serialize(const MdpModel& m) {
  std::ostringstream out;
  WriteModel(m, out);
  return out.str();
}

TEST_CASE("four-cell example reproduces the abstract transition set") {
  MdpModel m = BuildModel(testing::FourCellTraces(), testing::FourCellParams());
  std::set<std::pair<AbstractState, AbstractState>> pairs;
  for (const auto& [choice, o] : m.transitions) {
    for (const auto& [dst, n] : o.counts) pairs.emplace(choice.first, dst);
  }
  const std::set<std::pair<AbstractState, AbstractState>> want = {
      {S({0}), S({1})}, {S({1}), S({0})}, {S({1}), S({1})},
      {S({1}), S({2})}, {S({1}), S({3})}, {S({3}), S({3})}};
  CHECK(pairs == want);
  CHECK(m.states == std::set<AbstractState>{S({0}), S({1}), S({2}), S({3})});
  CHECK(m.initial == std::set<AbstractState>{S({0})});
}

TEST_CASE("four-cell example transition probabilities") {
  MdpModel m = BuildModel(testing::FourCellTraces(), testing::FourCellParams());
  CHECK(EnabledInputs(m, S({0})) == std::set<AbstractInput>{X({0})});
  CHECK(TransitionProbability(m, S({0}), X({0}), S({1})) == 1.0);
  CHECK(TransitionProbability(m, S({1}), X({0}), S({2})) == 0.5);
  CHECK(TransitionProbability(m, S({1}), X({0}), S({3})) == 0.5);
  CHECK(TransitionProbability(m, S({1}), X({1}), S({1})) == 0.5);
  CHECK(TransitionProbability(m, S({1}), X({1}), S({0})) == 0.5);
  CHECK(TransitionProbability(m, S({1}), X({0}), S({0})) == 0.0);
  CHECK_THROWS_AS(TransitionProbability(m, S({2}), X({0}), S({0})), UndefinedError);
  CHECK(EnabledInputs(m, S({1})) == std::set<AbstractInput>{X({0}), X({1})});
  CHECK(EnabledInputs(m, S({2})).empty());
  CHECK(EnabledInputs(m, S({9})).empty());
}

TEST_CASE("abstract path of the first four-cell trace") {
  TraceSet ts = testing::FourCellTraces();
  MdpModel m = BuildModel(ts, testing::FourCellParams());
  auto path = AbstractTrace(m, ts.traces[0]);
  REQUIRE(path.size() == 2);
  CHECK(path[0] == AbstractTransition{S({0}), X({0}), S({1})});
  CHECK(path[1] == AbstractTransition{S({1}), X({0}), S({2})});
}

TEST_CASE("single one-step trace gives one transition with count 1") {
  TraceSet ts{2, 1, {{"a", {{{0, 0}, {0.5f}, 0}}, {1.0f, -1.0f}}}};
  MdpModel m = BuildModel(ts, {1, 3, 1, 3});
  REQUIRE(m.transitions.size() == 1);
  const Outcomes& o = m.transitions.begin()->second;
  REQUIRE(o.counts.size() == 1);
  CHECK(o.counts.begin()->second == 1);
  CHECK(m.concrete_transitions == 1);
}

TEST_CASE("all states in one cell yield self-loops") {
  TraceSet ts{1, 1, {{"a", {{{0}, {0}, 0}, {{0}, {0}, 0}}, {0}}}};
  MdpModel m = BuildModel(ts, {1, 4, 1, 4});
  for (const auto& t : AbstractTrace(m, ts.traces[0])) CHECK(t.src == t.dst);
}

TEST_CASE("build rejects empty trace sets and bad parameters") {
  CHECK_THROWS_AS(BuildModel(TraceSet{1, 1, {}}, {1, 2, 1, 2}), ValidationError);
  CHECK_THROWS_AS(BuildModel(testing::FourCellTraces(), {2, 4, 1, 2}), ConfigError);
  CHECK_THROWS_AS(BuildModel(testing::FourCellTraces(), {1, 0, 1, 2}), ConfigError);
}

TEST_CASE("abstract trace rejects mismatched dimensions") {
  MdpModel m = BuildModel(testing::FourCellTraces(), testing::FourCellParams());
  Trace bad{"b", {{{0, 0}, {0}, 0}}, {0, 0}};
  CHECK_THROWS_AS(AbstractTrace(m, bad), ValidationError);
}

TEST_CASE("counts equal a brute-force tally over concrete transitions") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    TraceSet ts = testing::RandomTraceSet(rng, 2 + rng() % 3, 1 + rng() % 3,
                                          1 + rng() % 5, 8);
    ModelParams p{1 + rng() % 2, 1 + rng() % 5, 1, 1 + rng() % 5};
    MdpModel m = BuildModel(ts, p);
    std::map<std::tuple<AbstractState, AbstractInput, AbstractState>, std::uint64_t> tally;
    std::map<AbstractState, std::set<AbstractInput>> enabled;
    std::uint64_t total = 0;
    for (const Trace& t : ts.traces) {
      for (const ConcreteTransition& c : TraceTransitions(t)) {
        auto s = m.AbstractStateOf(c.source);
        auto x = m.AbstractInputOf(c.input);
        auto d = m.AbstractStateOf(c.destination);
        ++tally[{s, x, d}];
        enabled[s].insert(x);
        ++total;
      }
    }
    std::map<std::tuple<AbstractState, AbstractInput, AbstractState>, std::uint64_t> got;
    for (const auto& [choice, o] : m.transitions) {
      std::uint64_t sum = 0;
      for (const auto& [dst, n] : o.counts) {
        CHECK(n > 0);
        got[{choice.first, choice.second, dst}] = n;
        sum += n;
      }
      CHECK(sum == o.total);
    }
    CHECK(got == tally);
    CHECK(m.enabled_inputs == enabled);
    CHECK(m.concrete_transitions == total);
    CHECK(m.concrete_transitions == ts.TotalSteps());

    std::size_t pair_count = 0;
    for (const auto& [s, xs] : enabled) pair_count += xs.size();
    CHECK(m.ChoiceCount() == pair_count);

    // Re-abstracting the profiling traces reproduces the counts.
    std::map<std::tuple<AbstractState, AbstractInput, AbstractState>, std::uint64_t> again;
    for (const Trace& t : ts.traces) {
      for (const auto& at : AbstractTrace(m, t)) ++again[{at.src, at.input, at.dst}];
    }
    CHECK(again == tally);

    // No dangling states.
    std::set<AbstractState> seen(m.initial.begin(), m.initial.end());
    for (const auto& [key, n] : tally) {
      seen.insert(std::get<0>(key));
      seen.insert(std::get<2>(key));
    }
    CHECK(seen == m.states);
  }
}

TEST_CASE("distributions are normalized for every observed choice") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    TraceSet ts = testing::RandomTraceSet(rng, 3, 2, 4, 10);
    MdpModel m = BuildModel(ts, {2, 3, 1, 3});
    for (const auto& [choice, o] : m.transitions) {
      double sum = 0.0;
      for (const auto& [dst, n] : o.counts) {
        sum += TransitionProbability(m, choice.first, choice.second, dst);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("model build is deterministic and survives a file round trip") {
  std::mt19937_64 rng(107);
  TraceSet ts = testing::RandomTraceSet(rng, 4, 3, 6, 12);
  MdpModel a = BuildModel(ts, {2, 5, 2, 4});
  MdpModel b = BuildModel(ts, {2, 5, 2, 4});
  CHECK(Serialize(a) == Serialize(b));
  CHECK(a.fingerprint == b.fingerprint);

  std::istringstream in(Serialize(a));
  MdpModel c = ReadModel(in);
  CHECK(Serialize(c) == Serialize(a));
  CHECK(c.fingerprint == a.fingerprint);
  CHECK(c.states == a.states);
  CHECK(c.enabled_inputs == a.enabled_inputs);
  CHECK(c.transitions == a.transitions);
  // Reloaded abstraction is bit-identical.
  for (const Trace& t : ts.traces) CHECK(AbstractTrace(c, t) == AbstractTrace(a, t));
}

TEST_CASE("model parser rejects corrupt files") {
  MdpModel m = BuildModel(testing::FourCellTraces(), testing::FourCellParams());
  std::string good = Serialize(m);
  auto load = [](std::string s) {
    std::istringstream in(s);
    return ReadModel(in);
  };
  CHECK_THROWS_AS(load("RNNMDP 2\n"), ParseError);
  std::string zero = good;
  auto pos = zero.find("C 1 ");
  REQUIRE(pos != std::string::npos);
  zero.replace(pos, 4, "C 0 ");
  CHECK_THROWS_AS(load(zero), ValidationError);
  CHECK_THROWS_AS(load(good.substr(0, good.size() - 4)), ParseError);
}

}  // namespace
}  // namespace rnncov
