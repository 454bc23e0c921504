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

// rnncov: profile recurrent transcribers, build abstract models, measure
// coverage and run metamorphic fuzz campaigns.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rnncov/audio.h"
#include "rnncov/coverage.h"
#include "rnncov/error.h"
#include "rnncov/features.h"
#include "rnncov/fuzzer.h"
#include "rnncov/mdp.h"
#include "rnncov/sut.h"
#include "rnncov/synth.h"
#include "rnncov/trace.h"
#include "rnncov/transforms.h"

namespace fs = std::filesystem;

namespace rnncov {
namespace {

// *.wav under `dir`, sorted by file name; ids are the stems.
std::vector<NamedClip> LoadClipDir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw IoError("no .wav files in " + dir.string());
  std::vector<NamedClip> clips;
  for (const fs::path& p : paths) clips.push_back({p.stem().string(), LoadWav(p)});
  return clips;
}

struct ProfileArgs {
  std::string weights, vocab, audio_dir, out, transcripts;
};

int Profile(const ProfileArgs& a) {
  const ToyRnnSut sut(LoadWeights(a.weights), LoadVocabulary(a.vocab));
  TraceSet ts;
  ts.state_dim = sut.state_dim();
  ts.input_dim = sut.input_dim();
  std::ofstream text;
  if (!a.transcripts.empty()) {
    text.open(a.transcripts, std::ios::binary | std::ios::trunc);
    if (!text) throw IoError("cannot write " + a.transcripts);
  }
  for (const NamedClip& c : LoadClipDir(a.audio_dir)) {
    Transcription t = sut.Transcribe(c.clip, c.id);
    if (text.is_open()) text << c.id << '\t' << t.text << '\n';
    ts.traces.push_back(std::move(t.trace));
  }
  SaveTraces(ts, a.out);
  std::cerr << "profiled " << ts.traces.size() << " clips, " << ts.TotalSteps() << " steps\n";
  return 0;
}

struct BuildArgs {
  std::string traces, out;
  ModelParams params;
};

int Build(const BuildArgs& a) {
  const MdpModel m = BuildModel(LoadTraces(a.traces), a.params);
  SaveModel(m, a.out);
  std::fprintf(stderr, "model %016llx: %zu states, %zu choices, %llu transitions\n",
               static_cast<unsigned long long>(m.fingerprint), m.states.size(), m.ChoiceCount(),
               static_cast<unsigned long long>(m.concrete_transitions));
  return 0;
}

struct CoverageArgs {
  std::string model, traces, compare, criterion = "all";
  std::size_t boundary_steps = 1;
};

int Coverage(const CoverageArgs& a) {
  const MdpModel m = LoadModel(a.model);
  const TraceSet ts = LoadTraces(a.traces);
  const CoverageProfile p = ProfileTraces(m, ts.traces);
  std::vector<Criterion> which;
  if (a.criterion == "all") {
    which.assign(std::begin(kAllCriteria), std::end(kAllCriteria));
  } else {
    which.push_back(ParseCriterion(a.criterion));
  }
  for (Criterion c : which) {
    const CoverageValue v = CoverageEvaluator(m, c, a.boundary_steps).Evaluate(p);
    std::cout << CriterionName(c) << ' ' << FormatDecimal(v.ratio()) << ' '
              << FormatRational(v.ratio()) << '\n';
  }
  if (!a.compare.empty()) {
    const CoverageProfile q = ProfileTraces(m, LoadTraces(a.compare).traces);
    const CoverageValue j = Jaccard(p, q);
    std::cout << "jaccard " << FormatDecimal(j.ratio()) << ' ' << FormatRational(j.ratio()) << '\n';
  }
  return 0;
}

struct MutateArgs {
  std::string in, out, kind, record_in, record_out;
  bool random = false;
  std::uint64_t seed = 0;
};

int Mutate(const MutateArgs& a) {
  if (!a.random && a.kind.empty()) throw ValidationError("mutate needs --kind or --random");
  const AudioClip clip = LoadWav(a.in);
  MutationRecord rec{fs::path(a.in).stem().string(), {}};
  if (!a.record_in.empty()) {
    std::ifstream in(a.record_in, std::ios::binary);
    if (!in) throw IoError("cannot open " + a.record_in);
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, a.record_in + ": " + e.what());
    }
    rec = MutationRecordFromJson(j);
  }
  TransformKind kind;
  if (a.random) {
    std::mt19937_64 rng(a.seed);
    const auto k = PickTransform(rec, rng);
    if (!k) throw TransformError("no admissible transformation for this lineage");
    kind = *k;
  } else {
    kind = ParseKind(a.kind);
    MutationRecord probe = rec;
    probe.history.push_back({kind, {}, 0});
    if (!SatisfiesCategoryConstraint(probe)) {
      throw TransformError(std::string(CategoryName(CategoryOf(kind))) +
                           " transformation already applied in this lineage");
    }
  }
  auto [mutant, applied] = ApplySeeded(clip, kind, a.seed);
  rec.history.push_back(std::move(applied));
  SaveWav(mutant, a.out);
  const std::string rec_path = a.record_out.empty()
                                   ? fs::path(a.out).replace_extension(".json").string()
                                   : a.record_out;
  std::ofstream out(rec_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << ToJson(rec).dump(2) << '\n')) throw IoError("cannot write " + rec_path);
  return 0;
}

struct FuzzArgs {
  std::string model, weights, vocab, seeds, out, criterion = "bscov";
  std::uint64_t iterations = 1000;
  double time_budget = 0;
  double wer_threshold = 0.5;
  std::size_t boundary_steps = 1, max_history = 6;
  std::uint64_t seed = 0;
};

int Fuzz(const FuzzArgs& a) {
  FuzzConfig cfg;
  cfg.criterion = ParseCriterion(a.criterion);
  cfg.wer_threshold = a.wer_threshold;
  cfg.boundary_steps = a.boundary_steps;
  cfg.campaign_seed = a.seed;
  cfg.iterations = a.time_budget > 0 ? 0 : a.iterations;
  if (a.time_budget > 0) cfg.time_budget_s = a.time_budget;
  cfg.max_history = a.max_history;
  cfg.out_dir = a.out;
  ValidateConfig(cfg);
  const MdpModel model = LoadModel(a.model);
  const ToyRnnSut sut(LoadWeights(a.weights), LoadVocabulary(a.vocab));
  const FuzzReport r = RunCampaign(cfg, model, sut, LoadClipDir(a.seeds));
  WriteReport(r, a.out);
  const auto& first = r.coverage_curve.front().value;
  const auto& last = r.coverage_curve.back().value;
  std::cerr << a.criterion << ' ' << FormatDecimal(first.ratio()) << " -> "
            << FormatDecimal(last.ratio()) << ", " << r.totals.iterations << " iterations, "
            << r.totals.mutants << " mutants, " << r.totals.failures << " failures, "
            << r.totals.admissions << " admitted\n";
  return 0;
}

struct InitArgs {
  std::string kind = "tone", out, vocab_out;
  std::size_t hidden = 16, extra_units = 12;
  std::uint64_t seed = 1;
  double scale = 1.0;
};

int InitWeights(const InitArgs& a) {
  const Vocabulary vocab = ToneWordVocabulary();
  const ToyRnnWeights w = a.kind == "tone"
                              ? ToneWordWeights(a.seed, a.extra_units)
                              : RandomWeights(kFeatureDim, a.hidden, vocab.size(), a.seed, a.scale);
  SaveWeights(w, a.out);
  if (!a.vocab_out.empty()) SaveVocabulary(vocab, a.vocab_out);
  return 0;
}

struct SynthArgs {
  std::string out;
  int count = 20;
  std::uint64_t seed = 1;
};

int Synth(const SynthArgs& a) {
  fs::create_directories(a.out);
  std::mt19937_64 rng(a.seed);
  std::ofstream text(fs::path(a.out) / "transcripts.tsv", std::ios::binary | std::ios::trunc);
  if (!text) throw IoError("cannot write transcripts in " + a.out);
  for (int i = 0; i < a.count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "utt%04d", i);
    const SynthUtterance u = RandomUtterance(rng);
    SaveWav(u.clip, fs::path(a.out) / (std::string(id) + ".wav"));
    text << id << '\t' << u.text << '\n';
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Coverage-guided testing of recurrent transcribers"};
  app.require_subcommand(1);

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Transcribe a clip directory and write its traces");
  profile->add_option("--weights", pa.weights, "Weights file")->required();
  profile->add_option("--vocab", pa.vocab, "Vocabulary file")->required();
  profile->add_option("--audio-dir", pa.audio_dir, "Directory of .wav clips")->required();
  profile->add_option("--out", pa.out, "Trace file to write")->required();
  profile->add_option("--transcripts", pa.transcripts, "Also write id<TAB>transcript lines");

  BuildArgs ba;
  auto* build = app.add_subcommand("build-model", "Build the abstract model from traces");
  build->add_option("--traces", ba.traces, "Trace file")->required();
  build->add_option("--out", ba.out, "Model file to write")->required();
  build->add_option("--state-dims", ba.params.state_dims, "Principal components of states")->capture_default_str();
  build->add_option("--state-partitions", ba.params.state_partitions, "Intervals per state axis")->capture_default_str();
  build->add_option("--input-dims", ba.params.input_dims, "Principal components of inputs")->capture_default_str();
  build->add_option("--input-partitions", ba.params.input_partitions, "Intervals per input axis")->capture_default_str();

  CoverageArgs ca;
  auto* coverage = app.add_subcommand("coverage", "Coverage of a trace file under a model");
  coverage->add_option("--model", ca.model, "Model file")->required();
  coverage->add_option("--traces", ca.traces, "Trace file")->required();
  coverage->add_option("--criterion", ca.criterion, "bscov, ksbcov, btcov, iscov, wicov or all")->capture_default_str();
  coverage->add_option("--boundary-steps", ca.boundary_steps, "Boundary depth for ksbcov")->capture_default_str()->check(CLI::PositiveNumber);
  coverage->add_option("--compare", ca.compare, "Second trace file for the Jaccard index");

  MutateArgs ma;
  auto* mutate = app.add_subcommand("mutate", "Apply one metamorphic transformation");
  mutate->add_option("--in", ma.in, "Input .wav")->required();
  mutate->add_option("--out", ma.out, "Output .wav")->required();
  auto* kind_opt = mutate->add_option("--kind", ma.kind, "Transformation name");
  auto* random_opt = mutate->add_flag("--random", ma.random, "Pick a random admissible transformation");
  kind_opt->excludes(random_opt);
  mutate->add_option("--seed", ma.seed, "Parameter seed")->capture_default_str();
  mutate->add_option("--history", ma.record_in, "Lineage record of the input");
  mutate->add_option("--record-out", ma.record_out, "Where to write the new record (default: <out>.json)");

  FuzzArgs fa;
  auto* fuzz = app.add_subcommand("fuzz", "Run a coverage-guided fuzz campaign");
  fuzz->add_option("--model", fa.model, "Model file")->required();
  fuzz->add_option("--weights", fa.weights, "Weights file")->required();
  fuzz->add_option("--vocab", fa.vocab, "Vocabulary file")->required();
  fuzz->add_option("--seeds", fa.seeds, "Directory of seed .wav clips")->required();
  fuzz->add_option("--out", fa.out, "Output directory")->required();
  fuzz->add_option("--criterion", fa.criterion, "bscov, ksbcov, btcov, iscov or wicov")->capture_default_str();
  fuzz->add_option("--boundary-steps", fa.boundary_steps, "Boundary depth for ksbcov")->capture_default_str()->check(CLI::PositiveNumber);
  fuzz->add_option("--wer-threshold", fa.wer_threshold, "Failure threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  auto* iters = fuzz->add_option("--iterations", fa.iterations, "Iteration budget")->capture_default_str()->check(CLI::PositiveNumber);
  fuzz->add_option("--time-budget", fa.time_budget, "Wall-clock budget in seconds")->excludes(iters)->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", fa.seed, "Campaign seed")->capture_default_str();
  fuzz->add_option("--max-history", fa.max_history, "Transformations per lineage")->capture_default_str()->check(CLI::PositiveNumber);

  InitArgs ia;
  auto* init = app.add_subcommand("init-weights", "Write a fixture weights file");
  init->add_option("--kind", ia.kind, "tone or random")->capture_default_str()->check(CLI::IsMember({"tone", "random"}));
  init->add_option("--out", ia.out, "Weights file to write")->required();
  init->add_option("--vocab-out", ia.vocab_out, "Vocabulary file to write");
  init->add_option("--seed", ia.seed, "Seed")->capture_default_str();
  init->add_option("--hidden", ia.hidden, "Hidden units (random)")->capture_default_str()->check(CLI::PositiveNumber);
  init->add_option("--extra-units", ia.extra_units, "Random units beside the band detectors (tone)")->capture_default_str();
  init->add_option("--scale", ia.scale, "Weight scale (random)")->capture_default_str();

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Write synthetic tone-word clips");
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--count", sa.count, "Number of clips")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--seed", sa.seed, "Seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*profile) return Profile(pa);
    if (*build) return Build(ba);
    if (*coverage) return Coverage(ca);
    if (*mutate) return Mutate(ma);
    if (*fuzz) return Fuzz(fa);
    if (*init) return InitWeights(ia);
    if (*synth) return Synth(sa);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace rnncov

int main(int argc, char** argv) { return rnncov::Main(argc, argv); }
