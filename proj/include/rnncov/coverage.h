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


// Coverage of a test trace collection against a fixed abstract model.
//
//   bscov   |S_T & S_M| / |S_M|
//   ksbcov  |S_T & B_k| / |B_k|, B_k = cells at distance 1..k from S_M
//   btcov   |D_T & D_M| / |D_M| over (src, dst) pairs
//   iscov   sum_s |X_T(s) & X_M(s)| / sum_s |X_M(s)|
//   wicov   sum over test triples (s, x, d) of Pr_x(s, d) / sum_s |X_M(s)|
//
// Values are exact rationals.

#ifndef RNNCOV_COVERAGE_H_
#define RNNCOV_COVERAGE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "rnncov/abstraction.h"
#include "rnncov/mdp.h"
#include "rnncov/trace.h"

namespace rnncov {

using Rational = boost::multiprecision::cpp_rational;

enum class Criterion {
  kBasicState,
  kBoundaryState,
  kBasicTransition,
  kInputSpace,
  kWeightedInput,
};

inline constexpr Criterion kAllCriteria[] = {
    Criterion::kBasicState, Criterion::kBoundaryState,
    Criterion::kBasicTransition, Criterion::kInputSpace,
    Criterion::kWeightedInput};

// "bscov", "ksbcov", "btcov", "iscov", "wicov".
std::string_view CriterionName(Criterion c);
// Throws ConfigError for an unknown name.
Criterion ParseCriterion(std::string_view name);

using StatePair = std::pair<AbstractState, AbstractState>;

// Abstract states, transitions and (state, input) choices exercised by a set
// of traces, bound to the model that abstracted them.
struct CoverageProfile {
  std::uint64_t model_fingerprint = 0;
  std::set<AbstractState> states;
  std::set<AbstractTransition> transitions;
  std::map<AbstractState, std::set<AbstractInput>> state_inputs;
  std::set<StatePair> src_dst_pairs;

  bool empty() const { return states.empty(); }
  void Add(const AbstractTransition& t);
  // In-place union. Throws ValidationError if the models differ.
  void MergeFrom(const CoverageProfile& other);

  bool operator==(const CoverageProfile&) const = default;
};

CoverageProfile EmptyProfile(const MdpModel& model);
CoverageProfile ProfileTrace(const MdpModel& model, const Trace& trace);
CoverageProfile ProfileTraces(const MdpModel& model,
                              std::span<const Trace> traces);
CoverageProfile Merge(const CoverageProfile& a, const CoverageProfile& b);

struct CoverageValue {
  Rational numerator;
  std::uint64_t denominator = 1;

  Rational ratio() const {
    return denominator == 0 ? Rational(0) : numerator / Rational(denominator);
  }
  double value() const { return static_cast<double>(ratio()); }
};

// Rounds half up to `places` decimals, e.g. 1/3 -> "0.333333".
std::string FormatDecimal(const Rational& r, int places = 6);
// Exact "p/q" in lowest terms; integers print without a denominator.
std::string FormatRational(const Rational& r);

CoverageValue BsCov(const MdpModel& model, const CoverageProfile& p);
CoverageValue KsbCov(const MdpModel& model, const CoverageProfile& p,
                     std::size_t steps);
CoverageValue BtCov(const MdpModel& model, const CoverageProfile& p);
CoverageValue IsCov(const MdpModel& model, const CoverageProfile& p);
CoverageValue WiCov(const MdpModel& model, const CoverageProfile& p);

// |S_a & S_b| / |S_a | S_b|. Throws UndefinedError when both are empty.
CoverageValue Jaccard(const CoverageProfile& a, const CoverageProfile& b);

// Evaluates one criterion repeatedly against the same model, caching the
// model-side sets (boundary layers, transition pairs).
class CoverageEvaluator {
 public:
  CoverageEvaluator(const MdpModel& model, Criterion criterion,
                    std::size_t boundary_steps = 1);

  Criterion criterion() const { return criterion_; }
  const MdpModel& model() const { return *model_; }

  CoverageValue Evaluate(const CoverageProfile& p) const;

  // True iff merging `candidate` into `global` strictly grows the set counted
  // by the criterion's numerator.
  bool Increases(const CoverageProfile& global,
                 const CoverageProfile& candidate) const;

  const std::set<AbstractState>& boundary() const { return boundary_; }

 private:
  const MdpModel* model_;
  Criterion criterion_;
  std::size_t boundary_steps_;
  std::set<AbstractState> boundary_;
  std::set<StatePair> model_pairs_;
};

// (src, dst) pairs of the model's transitions.
std::set<StatePair> ModelStatePairs(const MdpModel& model);
// Union of the boundary layers 1..steps around the model's states.
std::set<AbstractState> BoundaryUnion(const MdpModel& model, std::size_t steps);

}  // namespace rnncov

#endif  // RNNCOV_COVERAGE_H_
