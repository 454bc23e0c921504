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


#include "rnncov/coverage.h"

#include <algorithm>
#include <string>

#include "rnncov/error.h"

namespace rnncov {

namespace {

void CheckModel(const MdpModel& model, const CoverageProfile& p) {
  if (p.model_fingerprint != model.fingerprint) {
    throw ValidationError("coverage profile was built against a different model");
  }
}

std::uint64_t CountIn(const std::set<AbstractState>& haystack,
                      const std::set<AbstractState>& needles) {
  std::uint64_t n = 0;
  for (const AbstractState& s : needles) n += haystack.count(s);
  return n;
}

CoverageValue Ratio(std::uint64_t num, std::uint64_t den) {
  return {Rational(num), den};
}

}  // namespace

std::string_view CriterionName(Criterion c) {
  switch (c) {
    case Criterion::kBasicState: return "bscov";
    case Criterion::kBoundaryState: return "ksbcov";
    case Criterion::kBasicTransition: return "btcov";
    case Criterion::kInputSpace: return "iscov";
    case Criterion::kWeightedInput: return "wicov";
  }
  return "?";
}

Criterion ParseCriterion(std::string_view name) {
  for (Criterion c : kAllCriteria) {
    if (CriterionName(c) == name) return c;
  }
  throw ConfigError("unknown coverage criterion '" + std::string(name) + "'");
}

void CoverageProfile::Add(const AbstractTransition& t) {
  states.insert(t.src);
  states.insert(t.dst);
  state_inputs[t.src].insert(t.input);
  src_dst_pairs.emplace(t.src, t.dst);
  transitions.insert(t);
}

void CoverageProfile::MergeFrom(const CoverageProfile& other) {
  if (other.model_fingerprint != model_fingerprint) {
    throw ValidationError("cannot merge coverage profiles of different models");
  }
  states.insert(other.states.begin(), other.states.end());
  transitions.insert(other.transitions.begin(), other.transitions.end());
  src_dst_pairs.insert(other.src_dst_pairs.begin(), other.src_dst_pairs.end());
  for (const auto& [s, inputs] : other.state_inputs) {
    state_inputs[s].insert(inputs.begin(), inputs.end());
  }
}

CoverageProfile EmptyProfile(const MdpModel& model) {
  CoverageProfile p;
  p.model_fingerprint = model.fingerprint;
  return p;
}

CoverageProfile ProfileTrace(const MdpModel& model, const Trace& trace) {
  CoverageProfile p = EmptyProfile(model);
  for (const AbstractTransition& t : AbstractTrace(model, trace)) p.Add(t);
  return p;
}

CoverageProfile ProfileTraces(const MdpModel& model,
                              std::span<const Trace> traces) {
  CoverageProfile p = EmptyProfile(model);
  for (const Trace& trace : traces) {
    for (const AbstractTransition& t : AbstractTrace(model, trace)) p.Add(t);
  }
  return p;
}

CoverageProfile Merge(const CoverageProfile& a, const CoverageProfile& b) {
  CoverageProfile out = a;
  out.MergeFrom(b);
  return out;
}

std::string FormatDecimal(const Rational& r, int places) {
  using boost::multiprecision::cpp_int;
  cpp_int scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational a = negative ? Rational(-r) : r;
  const Rational scaled = a * Rational(scale) + Rational(1, 2);
  const cpp_int q = boost::multiprecision::numerator(scaled) /
                    boost::multiprecision::denominator(scaled);
  std::string whole = cpp_int(q / scale).str();
  std::string frac = cpp_int(q % scale).str();
  frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  std::string out = negative && q != 0 ? "-" : "";
  out += whole;
  if (places > 0) out += "." + frac;
  return out;
}

std::string FormatRational(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) {
    return boost::multiprecision::numerator(r).str();
  }
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

std::set<StatePair> ModelStatePairs(const MdpModel& model) {
  std::set<StatePair> pairs;
  for (const auto& [choice, o] : model.transitions) {
    for (const auto& [dst, count] : o.counts) pairs.emplace(choice.first, dst);
  }
  return pairs;
}

std::set<AbstractState> BoundaryUnion(const MdpModel& model, std::size_t steps) {
  std::set<AbstractState> out;
  for (auto& layer : BoundaryRegion(model.states, steps)) {
    out.merge(layer);
  }
  return out;
}

CoverageValue BsCov(const MdpModel& model, const CoverageProfile& p) {
  CheckModel(model, p);
  return Ratio(CountIn(model.states, p.states), model.states.size());
}

CoverageValue KsbCov(const MdpModel& model, const CoverageProfile& p,
                     std::size_t steps) {
  CheckModel(model, p);
  const std::set<AbstractState> boundary = BoundaryUnion(model, steps);
  return Ratio(CountIn(boundary, p.states), boundary.size());
}

CoverageValue BtCov(const MdpModel& model, const CoverageProfile& p) {
  CheckModel(model, p);
  const std::set<StatePair> pairs = ModelStatePairs(model);
  std::uint64_t hit = 0;
  for (const StatePair& sp : p.src_dst_pairs) hit += pairs.count(sp);
  return Ratio(hit, pairs.size());
}

CoverageValue IsCov(const MdpModel& model, const CoverageProfile& p) {
  CheckModel(model, p);
  std::uint64_t hit = 0;
  for (const auto& [s, inputs] : p.state_inputs) {
    auto it = model.enabled_inputs.find(s);
    if (it == model.enabled_inputs.end()) continue;
    for (const AbstractInput& x : inputs) hit += it->second.count(x);
  }
  return Ratio(hit, model.ChoiceCount());
}

CoverageValue WiCov(const MdpModel& model, const CoverageProfile& p) {
  CheckModel(model, p);
  Rational mass = 0;
  for (const AbstractTransition& t : p.transitions) {
    const Outcomes* o = model.Find(t.src, t.input);
    if (o == nullptr) continue;
    auto it = o->counts.find(t.dst);
    if (it == o->counts.end()) continue;
    mass += Rational(it->second) / Rational(o->total);
  }
  return {mass, model.ChoiceCount()};
}

CoverageValue Jaccard(const CoverageProfile& a, const CoverageProfile& b) {
  if (a.model_fingerprint != b.model_fingerprint) {
    throw ValidationError("cannot compare profiles of different models");
  }
  if (a.states.empty() && b.states.empty()) {
    throw UndefinedError("Jaccard index of two empty profiles");
  }
  const std::uint64_t inter = CountIn(a.states, b.states);
  const std::uint64_t uni = a.states.size() + b.states.size() - inter;
  return Ratio(inter, uni);
}

CoverageEvaluator::CoverageEvaluator(const MdpModel& model, Criterion criterion,
                                     std::size_t boundary_steps)
    : model_(&model), criterion_(criterion), boundary_steps_(boundary_steps) {
  if (criterion == Criterion::kBoundaryState) {
    if (boundary_steps == 0) throw ConfigError("boundary steps must be >= 1");
    boundary_ = BoundaryUnion(model, boundary_steps);
  }
  if (criterion == Criterion::kBasicTransition) model_pairs_ = ModelStatePairs(model);
}

CoverageValue CoverageEvaluator::Evaluate(const CoverageProfile& p) const {
  switch (criterion_) {
    case Criterion::kBasicState:
      return BsCov(*model_, p);
    case Criterion::kBoundaryState:
      CheckModel(*model_, p);
      return Ratio(CountIn(boundary_, p.states), boundary_.size());
    case Criterion::kBasicTransition: {
      CheckModel(*model_, p);
      std::uint64_t hit = 0;
      for (const StatePair& sp : p.src_dst_pairs) hit += model_pairs_.count(sp);
      return Ratio(hit, model_pairs_.size());
    }
    case Criterion::kInputSpace:
      return IsCov(*model_, p);
    case Criterion::kWeightedInput:
      return WiCov(*model_, p);
  }
  return {};
}

bool CoverageEvaluator::Increases(const CoverageProfile& global,
                                  const CoverageProfile& candidate) const {
  CheckModel(*model_, global);
  CheckModel(*model_, candidate);
  switch (criterion_) {
    case Criterion::kBasicState:
      return std::any_of(candidate.states.begin(), candidate.states.end(),
                         [&](const AbstractState& s) {
                           return model_->states.count(s) != 0 &&
                                  global.states.count(s) == 0;
                         });
    case Criterion::kBoundaryState:
      return std::any_of(candidate.states.begin(), candidate.states.end(),
                         [&](const AbstractState& s) {
                           return boundary_.count(s) != 0 &&
                                  global.states.count(s) == 0;
                         });
    case Criterion::kBasicTransition:
      return std::any_of(candidate.src_dst_pairs.begin(),
                         candidate.src_dst_pairs.end(),
                         [&](const StatePair& sp) {
                           return model_pairs_.count(sp) != 0 &&
                                  global.src_dst_pairs.count(sp) == 0;
                         });
    case Criterion::kInputSpace:
      for (const auto& [s, inputs] : candidate.state_inputs) {
        auto model_it = model_->enabled_inputs.find(s);
        if (model_it == model_->enabled_inputs.end()) continue;
        auto global_it = global.state_inputs.find(s);
        for (const AbstractInput& x : inputs) {
          if (model_it->second.count(x) == 0) continue;
          if (global_it == global.state_inputs.end() ||
              global_it->second.count(x) == 0) {
            return true;
          }
        }
      }
      return false;
    case Criterion::kWeightedInput:
      return std::any_of(candidate.transitions.begin(),
                         candidate.transitions.end(),
                         [&](const AbstractTransition& t) {
                           if (global.transitions.count(t) != 0) return false;
                           const Outcomes* o = model_->Find(t.src, t.input);
                           return o != nullptr && o->counts.count(t.dst) != 0;
                         });
  }
  return false;
}

}  // namespace rnncov
