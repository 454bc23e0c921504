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

#include "rnncov/fuzzer.h"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "rnncov/error.h"
#include "rnncov/error_rate.h"

namespace rnncov {

namespace {

nlohmann::ordered_json CoverageJson(const CoverageValue& v) {
  nlohmann::ordered_json j;
  j["value"] = v.value();
  j["exact"] = FormatRational(v.ratio());
  return j;
}

std::string MutantId(const std::string& root, std::uint64_t iteration) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(iteration));
  return root + "." + buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path.string());
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {
    if (root_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(root_ / "failed", ec);
    std::filesystem::create_directories(root_ / "queue", ec);
    if (ec) throw IoError("cannot create output directory " + root_.string() + ": " + ec.message());
  }

  // Returns the artifact's path relative to the output directory.
  std::string Write(const char* kind, const std::string& id, const AudioClip& clip,
                    const nlohmann::ordered_json& meta) const {
    const std::string rel = std::string(kind) + "/" + id + ".wav";
    if (root_.empty()) return rel;
    SaveWav(clip, root_ / rel);
    WriteText(root_ / kind / (id + ".json"), meta.dump(2) + "\n");
    return rel;
  }

 private:
  std::filesystem::path root_;
};

}  // namespace

void ValidateConfig(const FuzzConfig& cfg) {
  if (!(cfg.wer_threshold >= 0.0 && cfg.wer_threshold <= 1.0)) {
    throw ConfigError("wer threshold must lie in [0, 1]");
  }
  if (cfg.iterations == 0 && !cfg.time_budget_s) {
    throw ConfigError("campaign needs an iteration or time budget");
  }
  if (cfg.time_budget_s && !(*cfg.time_budget_s > 0.0)) {
    throw ConfigError("time budget must be positive");
  }
  if (cfg.boundary_steps == 0) throw ConfigError("boundary steps must be positive");
  if (cfg.max_history == 0) throw ConfigError("max history must be positive");
}

std::size_t SelectSeed(std::vector<SeedEntry>& queue, std::mt19937_64& rng) {
  if (queue.empty()) throw UndefinedError("seed queue is empty");
  std::vector<double> weights;
  weights.reserve(queue.size());
  for (const SeedEntry& e : queue) {
    weights.push_back(1.0 / (1.0 + static_cast<double>(e.selection_count)));
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const std::size_t i = pick(rng);
  ++queue[i].selection_count;
  return i;
}

bool CoverageIncrease(const CoverageEvaluator& eval, const CoverageProfile& global,
                      const CoverageProfile& candidate) {
  return eval.Increases(global, candidate);
}

FuzzReport RunCampaign(const FuzzConfig& cfg, const MdpModel& model,
                       const SystemUnderTest& sut, const std::vector<NamedClip>& seeds,
                       const MutantObserver& observer) {
  ValidateConfig(cfg);
  if (seeds.empty()) throw ConfigError("no seed clips");
  if (sut.state_dim() != model.state_dim || sut.input_dim() != model.input_dim) {
    throw ConfigError("system under test has state/input dimensions " +
                      std::to_string(sut.state_dim()) + "/" + std::to_string(sut.input_dim()) +
                      " but the model was built for " + std::to_string(model.state_dim) + "/" +
                      std::to_string(model.input_dim));
  }
  const auto start = std::chrono::steady_clock::now();
  const CoverageEvaluator eval(model, cfg.criterion, cfg.boundary_steps);
  const ArtifactWriter artifacts(cfg.out_dir);

  FuzzReport report;
  report.model_fingerprint = model.fingerprint;
  report.criterion = cfg.criterion;
  report.config = cfg;

  std::vector<SeedEntry> queue;
  CoverageProfile global = EmptyProfile(model);
  for (const NamedClip& seed : seeds) {
    Transcription t = sut.Transcribe(seed.clip, seed.id);
    if (SplitWords(t.text).empty()) {
      report.seeds_dropped.push_back(seed.id);
      continue;
    }
    SeedEntry e;
    e.id = seed.id;
    e.clip = seed.clip;
    e.record.seed_id = seed.id;
    e.reference = t.text;
    e.transcript = std::move(t.text);
    e.profile = ProfileTrace(model, t.trace);
    global.MergeFrom(e.profile);
    queue.push_back(std::move(e));
  }
  if (queue.empty()) throw ConfigError("every seed transcribed to an empty transcript");

  CoverageValue current = eval.Evaluate(global);
  report.coverage_curve.push_back({0, current});

  std::mt19937_64 rng(cfg.campaign_seed);
  for (std::uint64_t it = 1; cfg.iterations == 0 || it <= cfg.iterations; ++it) {
    if (cfg.time_budget_s) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
      if (spent.count() >= *cfg.time_budget_s) break;
    }
    report.totals.iterations = it;
    const std::size_t parent = SelectSeed(queue, rng);
    const std::optional<TransformKind> kind = PickTransform(queue[parent].record, rng, cfg.max_history);
    if (!kind) {
      ++report.totals.skipped;
      continue;
    }
    const std::uint64_t transform_seed = rng();
    AudioClip mutant;
    AppliedTransform applied;
    Transcription result;
    try {
      std::tie(mutant, applied) = ApplySeeded(queue[parent].clip, *kind, transform_seed, cfg.ranges);
      mutant = QuantizePcm16(mutant);
      result = sut.Transcribe(mutant, MutantId(queue[parent].record.seed_id, it));
    } catch (const TransformError&) {
      ++report.totals.skipped;
      continue;
    } catch (const ValidationError&) {
      // Mutant too short to transcribe.
      ++report.totals.skipped;
      continue;
    }
    ++report.totals.mutants;
    MutationRecord record = queue[parent].record;
    record.history.push_back(std::move(applied));
    const std::string id = MutantId(record.seed_id, it);
    const std::string& reference = queue[parent].reference;
    const double wer = WordErrorRate(reference, result.text);
    if (observer) observer(it, record, result.text, wer);

    nlohmann::ordered_json meta;
    meta["id"] = id;
    meta["iteration"] = it;
    meta["record"] = ToJson(record);
    meta["reference"] = reference;
    meta["hypothesis"] = result.text;
    meta["wer"] = wer;

    if (wer > cfg.wer_threshold) {
      FailedTest f;
      f.iteration = it;
      f.id = id;
      f.mutant_path = artifacts.Write("failed", id, mutant, meta);
      f.record = std::move(record);
      f.reference = reference;
      f.hypothesis = std::move(result.text);
      f.wer = wer;
      report.failed.push_back(std::move(f));
      ++report.totals.failures;
      continue;
    }
    CoverageProfile profile = ProfileTrace(model, result.trace);
    if (!CoverageIncrease(eval, global, profile)) continue;
    global.MergeFrom(profile);
    current = eval.Evaluate(global);
    report.coverage_curve.push_back({it, current});
    ++report.totals.admissions;
    meta["coverage"] = CoverageJson(current);
    artifacts.Write("queue", id, mutant, meta);

    SeedEntry e;
    e.id = id;
    e.clip = std::move(mutant);
    e.record = std::move(record);
    e.reference = reference;
    e.transcript = std::move(result.text);
    e.profile = std::move(profile);
    queue.push_back(std::move(e));
  }
  if (report.coverage_curve.back().iteration != report.totals.iterations) {
    report.coverage_curve.push_back({report.totals.iterations, current});
  }
  for (const SeedEntry& e : queue) report.queue_final.push_back(e.id);
  return report;
}

nlohmann::ordered_json ToJson(const FuzzReport& r) {
  nlohmann::ordered_json j;
  char fp[17];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(r.model_fingerprint));
  j["model_fingerprint"] = fp;
  nlohmann::ordered_json cfg;
  cfg["criterion"] = CriterionName(r.criterion);
  cfg["boundary_steps"] = r.config.boundary_steps;
  cfg["wer_threshold"] = r.config.wer_threshold;
  cfg["campaign_seed"] = r.config.campaign_seed;
  cfg["iterations"] = r.config.iterations;
  if (r.config.time_budget_s) cfg["time_budget_s"] = *r.config.time_budget_s;
  cfg["max_history"] = r.config.max_history;
  j["config"] = std::move(cfg);
  nlohmann::ordered_json totals;
  totals["iterations"] = r.totals.iterations;
  totals["mutants"] = r.totals.mutants;
  totals["failures"] = r.totals.failures;
  totals["admissions"] = r.totals.admissions;
  totals["skipped"] = r.totals.skipped;
  j["totals"] = std::move(totals);
  j["initial_coverage"] = CoverageJson(r.coverage_curve.front().value);
  j["final_coverage"] = CoverageJson(r.coverage_curve.back().value);
  j["seeds_dropped"] = r.seeds_dropped;
  j["failed"] = nlohmann::ordered_json::array();
  for (const FailedTest& f : r.failed) {
    nlohmann::ordered_json e;
    e["id"] = f.id;
    e["iteration"] = f.iteration;
    e["mutant"] = f.mutant_path;
    e["record"] = ToJson(f.record);
    e["reference"] = f.reference;
    e["hypothesis"] = f.hypothesis;
    e["wer"] = f.wer;
    j["failed"].push_back(std::move(e));
  }
  j["queue_final"] = r.queue_final;
  j["coverage_curve"] = nlohmann::ordered_json::array();
  for (const CurvePoint& p : r.coverage_curve) {
    nlohmann::ordered_json e = CoverageJson(p.value);
    e["iteration"] = p.iteration;
    j["coverage_curve"].push_back(std::move(e));
  }
  return j;
}

std::string CoverageCurveCsv(const FuzzReport& r) {
  std::string out = "iteration,value\n";
  for (const CurvePoint& p : r.coverage_curve) {
    out += std::to_string(p.iteration) + "," + FormatDecimal(p.value.ratio()) + "\n";
  }
  return out;
}

void WriteReport(const FuzzReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  WriteText(dir / "report.json", ToJson(report).dump(2) + "\n");
  WriteText(dir / "coverage_curve.csv", CoverageCurveCsv(report));
}

}  // namespace rnncov
