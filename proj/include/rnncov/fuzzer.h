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

// Coverage-guided metamorphic fuzzing loop.
//
// Each iteration picks a queued clip, applies one admissible transformation
// and transcribes the mutant. A mutant whose transcript drifts from its
// original seed's by more than the WER threshold is a failure; otherwise it
// joins the queue if it covers something new under the chosen criterion.

#ifndef RNNCOV_FUZZER_H_
#define RNNCOV_FUZZER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "rnncov/audio.h"
#include "rnncov/coverage.h"
#include "rnncov/mdp.h"
#include "rnncov/sut.h"
#include "rnncov/transforms.h"

namespace rnncov {

struct SeedEntry {
  std::string id;
  AudioClip clip;
  MutationRecord record;
  std::string reference;   // transcript of the original seed
  std::string transcript;  // this clip's own transcript
  CoverageProfile profile;
  std::uint64_t selection_count = 0;
};

struct FuzzConfig {
  Criterion criterion = Criterion::kBasicState;
  double wer_threshold = 0.5;
  std::size_t boundary_steps = 1;
  std::uint64_t campaign_seed = 0;
  std::uint64_t iterations = 1000;      // 0 = bounded by time only
  std::optional<double> time_budget_s;  // wall clock, makes runs irreproducible
  std::size_t max_history = 6;
  TransformRanges ranges;
  std::filesystem::path out_dir;  // empty = keep artifacts in memory only
};

// Throws ConfigError for a threshold outside [0, 1], no budget, or a zero
// boundary/history bound.
void ValidateConfig(const FuzzConfig& cfg);

struct NamedClip {
  std::string id;
  AudioClip clip;
};

struct FailedTest {
  std::uint64_t iteration = 0;
  std::string id;
  std::string mutant_path;  // relative to out_dir
  MutationRecord record;
  std::string reference;
  std::string hypothesis;
  double wer = 0;
};

struct CurvePoint {
  std::uint64_t iteration = 0;
  CoverageValue value;
};

struct FuzzTotals {
  std::uint64_t iterations = 0;
  std::uint64_t mutants = 0;
  std::uint64_t failures = 0;
  std::uint64_t admissions = 0;
  std::uint64_t skipped = 0;  // no admissible transform or unusable mutant
};

struct FuzzReport {
  std::uint64_t model_fingerprint = 0;
  Criterion criterion = Criterion::kBasicState;
  FuzzConfig config;
  std::vector<std::string> seeds_dropped;  // empty transcript, no reference
  std::vector<FailedTest> failed;
  std::vector<std::string> queue_final;
  // Starts at iteration 0 with the seeds' coverage; one point per
  // admission and one for the last iteration.
  std::vector<CurvePoint> coverage_curve;
  FuzzTotals totals;
};

// Draws an index with probability proportional to 1 / (1 + selection_count)
// and increments that entry's count. Throws UndefinedError on an empty queue.
std::size_t SelectSeed(std::vector<SeedEntry>& queue, std::mt19937_64& rng);

// True iff merging `candidate` into `global` grows the criterion's numerator
// set. Throws ValidationError when the profiles belong to another model.
bool CoverageIncrease(const CoverageEvaluator& eval, const CoverageProfile& global,
                      const CoverageProfile& candidate);

// Sees every transcribed mutant, whether it failed, was queued or dropped.
using MutantObserver =
    std::function<void(std::uint64_t iteration, const MutationRecord& record,
                       const std::string& hypothesis, double wer)>;

// Throws ConfigError when the seeds are empty, all transcribe to nothing, or
// the system's dimensions do not match the model.
FuzzReport RunCampaign(const FuzzConfig& cfg, const MdpModel& model,
                       const SystemUnderTest& sut, const std::vector<NamedClip>& seeds,
                       const MutantObserver& observer = {});

nlohmann::ordered_json ToJson(const FuzzReport& report);
// "iteration,value" with the value rendered to six decimals.
std::string CoverageCurveCsv(const FuzzReport& report);
// report.json and coverage_curve.csv.
void WriteReport(const FuzzReport& report, const std::filesystem::path& dir);

}  // namespace rnncov

#endif  // RNNCOV_FUZZER_H_
