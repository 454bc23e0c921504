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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails or overruns its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "rnncov/abstraction.h"
#include "rnncov/coverage.h"
#include "rnncov/error_rate.h"
#include "rnncov/fuzzer.h"
#include "rnncov/mdp.h"
#include "rnncov/synth.h"
#include "rnncov/transforms.h"
#include "support.h"

namespace rnncov {
namespace {

using testing::S;
using testing::X;

struct Result {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---- 1 -------------------------------------------------------------------

Result FourCellGolden() {
  Result r;
  const MdpModel m = BuildModel(testing::FourCellTraces(), testing::FourCellParams());
  std::set<StatePair> pairs = ModelStatePairs(m);
  const std::set<StatePair> want = {{S({0}), S({1})}, {S({1}), S({0})}, {S({1}), S({1})},
                                    {S({1}), S({2})}, {S({1}), S({3})}, {S({3}), S({3})}};
  r.Require(pairs == want, "abstract transition set differs");
  r.Require(TransitionProbability(m, S({0}), X({0}), S({1})) == 1.0, "Pr(s0 -> s1) != 1");
  r.Require(TransitionProbability(m, S({1}), X({0}), S({2})) == 0.5, "Pr_x(s1, s2) != 1/2");
  r.Require(TransitionProbability(m, S({1}), X({0}), S({3})) == 0.5, "Pr_x(s1, s3) != 1/2");
  if (r.pass) r.detail = "6 transitions, Pr(s0->s1)=1, Pr_x(s1,s2)=Pr_x(s1,s3)=1/2";
  return r;
}

// ---- 2 -------------------------------------------------------------------

Result Normalization() {
  Result r;
  std::mt19937_64 rng(1002);
  std::size_t choices = 0;
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t sd = 1 + rng() % 4, xd = 1 + rng() % 3;
    const TraceSet ts = testing::RandomTraceSet(rng, sd, xd, 2 + rng() % 5, 8);
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, sd);
    const std::size_t kx = 1 + rng() % std::min<std::size_t>(3, xd);
    const MdpModel m = BuildModel(ts, {k, 1 + rng() % 5, kx, 1 + rng() % 5});
    for (const auto& [choice, o] : m.transitions) {
      double sum = 0;
      for (const auto& [dst, n] : o.counts) sum += TransitionProbability(m, choice.first, choice.second, dst);
      worst = std::max(worst, std::abs(sum - 1.0));
      ++choices;
    }
  }
  r.Require(worst <= 1e-12, Fmt("max |sum - 1| = %.3g", worst));
  if (r.pass) r.detail = Fmt("%.0f choices, max |sum - 1| = %.3g", static_cast<double>(choices), worst);
  return r;
}

// ---- 3 / 4 -----------------------------------------------------------------

struct Instance {
  MdpModel model;
  TraceSet train, extra;
};

Instance RandomInstance(std::mt19937_64& rng) {
  const std::size_t sd = 1 + rng() % 3, xd = 1 + rng() % 2;
  Instance in;
  in.train = testing::RandomTraceSet(rng, sd, xd, 2 + rng() % 4, 6);
  in.extra = testing::RandomTraceSet(rng, sd, xd, 1 + rng() % 4, 6);
  in.model = BuildModel(in.train, {1 + rng() % sd, 1 + rng() % 5, 1 + rng() % xd, 1 + rng() % 4});
  return in;
}

Result RangeAndMonotonicity() {
  Result r;
  std::mt19937_64 rng(1003);
  for (int i = 0; i < 500 && r.pass; ++i) {
    const Instance in = RandomInstance(rng);
    std::vector<Trace> all = in.extra.traces;
    all.insert(all.end(), in.train.traces.begin(), in.train.traces.end());
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t steps = 1 + rng() % 3;
    for (Criterion c : kAllCriteria) {
      const CoverageEvaluator eval(in.model, c, steps);
      Rational prev = 0;
      CoverageProfile p = EmptyProfile(in.model);
      for (const Trace& t : all) {
        p.MergeFrom(ProfileTrace(in.model, t));
        const Rational v = eval.Evaluate(p).ratio();
        r.Require(v >= 0 && v <= 1, std::string(CriterionName(c)) + " outside [0, 1]");
        r.Require(v >= prev, std::string(CriterionName(c)) + " decreased");
        prev = v;
      }
    }
  }
  if (r.pass) r.detail = "500 instances x 5 criteria";
  return r;
}

CoverageProfile ProfileOf(const MdpModel& m, const std::vector<Trace>& traces) {
  return ProfileTraces(m, traces);
}

Result Subsumption() {
  Result r;
  std::mt19937_64 rng(1004);
  int bt_full = 0, wi_full = 0;
  for (int i = 0; i < 500; ++i) {
    const Instance in = RandomInstance(rng);
    std::vector<Trace> test = in.extra.traces;
    // Half the instances replay a subset of the training traces, so full
    // coverage actually occurs.
    if (i % 2 == 0) {
      for (const Trace& t : in.train.traces) {
        if (rng() % 4 != 0) test.push_back(t);
      }
    }
    const CoverageProfile p = ProfileOf(in.model, test);
    if (BtCov(in.model, p).ratio() == 1) {
      ++bt_full;
      r.Require(BsCov(in.model, p).ratio() == 1, "BTCov = 1 but BSCov < 1");
    }
    if (WiCov(in.model, p).ratio() == 1) {
      ++wi_full;
      r.Require(IsCov(in.model, p).ratio() == 1, "WICov = 1 but ISCov < 1");
    }
  }
  r.Require(bt_full > 0 && wi_full > 0, "antecedent never held");

  // ISCov = 1 with BTCov < 1.
  const MdpModel four = BuildModel(testing::FourCellTraces(), testing::FourCellParams());
  auto step = [](float s, float x) { return TraceStep{StateVector{s}, FeatureVector{x}, 0}; };
  const std::vector<Trace> w1 = {{"a", {step(0, 0), step(1.5f, 1)}, {1.2f}},
                                 {"b", {step(0, 0), step(1.5f, 0), step(3.5f, 1)}, {3.6f}}};
  const CoverageProfile p1 = ProfileOf(four, w1);
  const bool witness1 = IsCov(four, p1).ratio() == 1 && BtCov(four, p1).ratio() < 1;
  r.Require(witness1, "ISCov-without-BTCov witness failed");

  // BTCov = 1 with ISCov < 1: one (src, dst) pair under two inputs.
  TraceSet two{1, 1, {{"a", {step(0, 0)}, {1}}, {"b", {step(0, 1)}, {1}}}};
  const MdpModel m2 = BuildModel(two, {1, 2, 1, 2});
  const CoverageProfile p2 = ProfileOf(m2, {two.traces[0]});
  const bool witness2 = BtCov(m2, p2).ratio() == 1 && IsCov(m2, p2).ratio() < 1;
  r.Require(witness2, "BTCov-without-ISCov witness failed");
  if (r.pass) {
    r.detail = Fmt("BTCov=1 in %.0f, WICov=1 in %.0f of 500; both witnesses hold", bt_full, wi_full);
  }
  return r;
}

// ---- 5 -------------------------------------------------------------------

Result Oracles() {
  Result r;
  std::mt19937_64 rng(1005);
  // Grid cells.
  std::uniform_real_distribution<double> bound(-5, 5), width(0.01, 3);
  for (int i = 0; i < 5000; ++i) {
    const double lb = bound(rng), ub = lb + width(rng);
    const std::size_t m = 1 + rng() % 20;
    const GridConfig g{m, {lb}, {ub}};
    const double w = (ub - lb) / static_cast<double>(m);
    double v = std::uniform_real_distribution<double>(lb - 8 * w, ub + 8 * w)(rng);
    if (i % 5 == 0) v = g.Edge(0, static_cast<std::int64_t>(rng() % (m + 3)) - 1);
    Eigen::VectorXd vec(1);
    vec(0) = v;
    r.Require(CellIndices(g, vec)[0] == testing::IntervalScan(lb, ub, m, v), "grid cell differs from interval scan");
  }
  // Boundary layers.
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = 1 + rng() % 3, steps = 1 + rng() % 3;
    std::set<AbstractState> visited;
    const std::size_t n = 1 + rng() % (k == 1 ? 6 : 8);
    while (visited.size() < n) {
      AbstractState s;
      for (std::size_t d = 0; d < k; ++d) s.index.push_back(static_cast<std::int32_t>(rng() % 6) - 1);
      visited.insert(s);
    }
    r.Require(BoundaryRegion(visited, steps) == testing::BoundaryScan(visited, steps),
              "boundary BFS differs from lattice scan");
  }
  // PCA.
  std::normal_distribution<double> g;
  double worst = 0;
  for (int i = 0; i < 40; ++i) {
    const int n = 20 + static_cast<int>(rng() % 40), d = 2 + static_cast<int>(rng() % 8);
    const int k = 1 + static_cast<int>(rng() % d);
    Eigen::MatrixXd pts(n, d);
    for (Eigen::Index j = 0; j < pts.size(); ++j) pts.data()[j] = g(rng);
    for (int j = 0; j < d; ++j) pts.col(j) *= 1.0 + 0.7 * j;
    const Projection p = FitProjection(pts, static_cast<std::size_t>(k));
    std::vector<double> mean(d, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < d; ++b) mean[b] += pts(a, b) / n;
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) cov[b][c] += (pts(a, b) - mean[b]) * (pts(a, c) - mean[c]) / (n - 1);
    auto [values, vectors] = testing::JacobiEigen(cov);
    std::vector<int> order(d);
    for (int j = 0; j < d; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
    for (int c = 0; c < k; ++c) {
      double dot = 0;
      for (int j = 0; j < d; ++j) dot += p.components(c, j) * vectors[j][order[c]];
      const double sign = dot < 0 ? -1 : 1;
      for (int j = 0; j < d; ++j) {
        worst = std::max(worst, std::abs(p.components(c, j) - sign * vectors[j][order[c]]));
      }
    }
  }
  r.Require(worst <= 1e-6, Fmt("PCA deviates by %.3g", worst));
  // Error rates.
  const std::vector<std::string> lexicon = {"a", "an", "b", "cat", "dog", "the", "x", "xy"};
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> ref, hyp;
    for (std::size_t k = 1 + rng() % 10; k > 0; --k) ref.push_back(lexicon[rng() % lexicon.size()]);
    for (std::size_t k = rng() % 11; k > 0; --k) hyp.push_back(lexicon[rng() % lexicon.size()]);
    std::string rs, hs;
    for (const auto& w : ref) rs += (rs.empty() ? "" : " ") + w;
    for (const auto& w : hyp) hs += (hs.empty() ? "" : " ") + w;
    const double wer = static_cast<double>(testing::EditDistanceTable(ref, hyp)) / static_cast<double>(ref.size());
    const double cer = static_cast<double>(testing::EditDistanceTable(rs, hs)) / static_cast<double>(rs.size());
    r.Require(WordErrorRate(rs, hs) == wer, "WER differs from table oracle");
    r.Require(CharErrorRate(rs, hs) == cer, "CER differs from table oracle");
  }
  if (r.pass) r.detail = Fmt("5000 cells, 300 boundary sets, 40 PCA fits (max dev %.2g), 1000 WER/CER pairs", worst);
  return r;
}

// ---- Toy transcriber setup shared by 6 to 9 ---------------------------------

struct Toy {
  ToyRnnSut sut{ToneWordWeights(1), ToneWordVocabulary()};
  TraceSet train;
  std::vector<NamedClip> seeds;

  Toy() {
    std::mt19937_64 rng(4242);
    train.state_dim = sut.state_dim();
    train.input_dim = sut.input_dim();
    for (int i = 0; i < 40; ++i) {
      const AudioClip clip = QuantizePcm16(RandomUtterance(rng).clip);
      train.traces.push_back(sut.Transcribe(clip, "train" + std::to_string(i)).trace);
    }
    for (int i = 0; i < 20; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "seed%02d", i);
      seeds.push_back({id, QuantizePcm16(RandomUtterance(rng).clip)});
    }
  }

  MdpModel Model(std::size_t partitions) const { return BuildModel(train, {3, partitions, 3, 10}); }
};

const Toy& SharedToy() {
  static const Toy toy;
  return toy;
}

// Category of a transform looked up by name, independent of CategoryOf.
std::string TableCategory(std::string_view kind) {
  if (kind == "changevolume" || kind == "lowpassfilter" || kind == "highpassfilter") return "VRT";
  if (kind == "pitchshift" || kind == "changespeed") return "SRT";
  if (kind == "addwhitenoise") return "CRT";
  return "UAT";
}

Result MetamorphicConstraint() {
  Result r;
  const Toy& toy = SharedToy();
  const MdpModel model = toy.Model(10);
  FuzzConfig cfg;
  cfg.iterations = 10000;
  cfg.campaign_seed = 6;
  std::uint64_t records = 0, violations = 0;
  const FuzzReport rep = RunCampaign(cfg, model, toy.sut, toy.seeds,
                                     [&](std::uint64_t, const MutationRecord& rec, const std::string&, double) {
                                       ++records;
                                       std::map<std::string, int> n;
                                       for (const auto& t : rec.history) ++n[TableCategory(KindName(t.kind))];
                                       if (n["VRT"] > 1 || n["SRT"] > 1 || n["CRT"] > 1) ++violations;
                                     });
  r.Require(rep.totals.iterations == 10000, "campaign stopped early");
  r.Require(records == rep.totals.mutants, "observer missed mutants");
  r.Require(violations == 0, Fmt("%.0f records break the category constraint", static_cast<double>(violations)));
  for (const FailedTest& f : rep.failed) r.Require(SatisfiesCategoryConstraint(f.record), "failed record breaks constraint");
  if (r.pass) {
    r.detail = Fmt("%.0f mutant records, 0 violations (%.0f failures, %.0f queued)",
                   static_cast<double>(records), static_cast<double>(rep.totals.failures),
                   static_cast<double>(rep.totals.admissions));
  }
  return r;
}

Result DirectionalTrend() {
  Result r;
  const Toy& toy = SharedToy();
  double initial[2], gain[2];
  const std::size_t grids[2] = {5, 20};
  for (int g = 0; g < 2; ++g) {
    const MdpModel model = toy.Model(grids[g]);
    FuzzConfig cfg;
    cfg.iterations = 2000;
    cfg.campaign_seed = 7;
    const FuzzReport rep = RunCampaign(cfg, model, toy.sut, toy.seeds);
    initial[g] = rep.coverage_curve.front().value.value();
    const double final_value = rep.coverage_curve.back().value.value();
    gain[g] = (final_value - initial[g]) / initial[g];
  }
  r.Require(initial[1] < initial[0], "initial BSCov at m=20 is not below m=5");
  r.Require(gain[1] >= gain[0], "relative increase at m=20 is below m=5");
  r.detail = Fmt("initial BSCov m=5 %.4f, m=20 %.4f; relative increase m=5 %.4f, m=20 %.4f",
                 initial[0], initial[1], gain[0], gain[1]);
  return r;
}

Result JaccardSanity() {
  Result r;
  const Toy& toy = SharedToy();
  const MdpModel model = toy.Model(20);
  for (const NamedClip& s : toy.seeds) {
    const CoverageProfile a = ProfileTrace(model, toy.sut.Transcribe(s.clip, s.id).trace);
    const CoverageProfile b = ProfileTrace(model, toy.sut.Transcribe(s.clip, s.id).trace);
    r.Require(Jaccard(a, b).ratio() == 1, "identical input gives J != 1");
  }
  int below = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    const NamedClip& s = toy.seeds[static_cast<std::size_t>(i) % toy.seeds.size()];
    std::mt19937_64 rng(static_cast<std::uint64_t>(8000 + i));
    const TransformKind kind = *PickTransform(MutationRecord{s.id, {}}, rng);
    const AudioClip mutant = QuantizePcm16(ApplySeeded(s.clip, kind, rng()).first);
    const CoverageProfile a = ProfileTrace(model, toy.sut.Transcribe(s.clip, s.id).trace);
    const CoverageProfile b = ProfileTrace(model, toy.sut.Transcribe(mutant, "m").trace);
    below += Jaccard(a, b).ratio() < 1;
    ++total;
  }
  r.Require(below * 10 >= total * 9, Fmt("only %.0f of %.0f mutants have J < 1", below, total));
  if (r.pass) r.detail = Fmt("identical J = 1 for 20 seeds; %.0f of %.0f mutants J < 1", below, total);
  return r;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Result Determinism() {
  Result r;
  const Toy& toy = SharedToy();
  const MdpModel model = toy.Model(10);
  const auto root = std::filesystem::temp_directory_path() / "rnncov_acceptance";
  std::filesystem::remove_all(root);
  std::string reports[2], curves[2];
  for (int run = 0; run < 2; ++run) {
    FuzzConfig cfg;
    cfg.iterations = 1500;
    cfg.campaign_seed = 9;
    cfg.criterion = Criterion::kInputSpace;
    cfg.out_dir = root / ("run" + std::to_string(run));
    WriteReport(RunCampaign(cfg, model, toy.sut, toy.seeds), cfg.out_dir);
    reports[run] = ReadFile(cfg.out_dir / "report.json");
    curves[run] = ReadFile(cfg.out_dir / "coverage_curve.csv");
  }
  r.Require(!reports[0].empty() && reports[0] == reports[1], "report.json differs between runs");
  r.Require(curves[0] == curves[1], "coverage_curve.csv differs between runs");
  std::filesystem::remove_all(root);
  if (r.pass) r.detail = Fmt("report.json identical (%.0f bytes)", static_cast<double>(reports[0].size()));
  return r;
}

}  // namespace
}  // namespace rnncov

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<rnncov::Result()> run;
  };
  const Criterion criteria[] = {
      {1, "four-cell golden example", 1, rnncov::FourCellGolden},
      {2, "probability normalization", 30, rnncov::Normalization},
      {3, "criteria range and monotonicity", 60, rnncov::RangeAndMonotonicity},
      {4, "subsumption laws and witnesses", 60, rnncov::Subsumption},
      {5, "oracle equivalence", 120, rnncov::Oracles},
      {6, "metamorphic category constraint", 300, rnncov::MetamorphicConstraint},
      {7, "directional coverage trend", 600, rnncov::DirectionalTrend},
      {8, "jaccard sanity", 300, rnncov::JaccardSanity},
      {9, "determinism", 300, rnncov::Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    rnncov::Result res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = res.pass && in_time;
    failed += !pass;
    std::printf("criterion %d %s: %s (%s; %.2f s, limit %.0f s%s)\n", c.id, c.name,
                pass ? "PASS" : "FAIL", res.detail.c_str(), secs, c.limit_s,
                in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
