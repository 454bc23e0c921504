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


#include "rnncov/transforms.h"

#include <algorithm>
#include <cmath>
#include <span>

#include "rnncov/dsp.h"
#include "rnncov/error.h"

namespace rnncov {

namespace {

double DbToAmplitude(double db) { return std::pow(10.0, db / 20.0); }

std::vector<double> ToDouble(const AudioClip& clip) {
  return std::vector<double>(clip.samples.begin(), clip.samples.end());
}

AudioClip FromDouble(std::span<const double> x, std::uint32_t rate) {
  AudioClip out;
  out.sample_rate = rate;
  out.samples.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.samples[i] = static_cast<float>(std::clamp(x[i], -1.0, 1.0));
  }
  return out;
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

TransformCategory CategoryOf(TransformKind kind) {
  switch (kind) {
    case TransformKind::kChangeVolume:
    case TransformKind::kLowPassFilter:
    case TransformKind::kHighPassFilter:
      return TransformCategory::kVolume;
    case TransformKind::kPitchShift:
    case TransformKind::kChangeSpeed:
      return TransformCategory::kSpeed;
    case TransformKind::kAddWhiteNoise:
      return TransformCategory::kClearness;
    case TransformKind::kDrc:
    case TransformKind::kTrim:
      return TransformCategory::kUnaffected;
  }
  return TransformCategory::kUnaffected;
}

std::string_view KindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kAddWhiteNoise: return "addwhitenoise";
    case TransformKind::kPitchShift: return "pitchshift";
    case TransformKind::kTrim: return "trim";
    case TransformKind::kChangeSpeed: return "changespeed";
    case TransformKind::kChangeVolume: return "changevolume";
    case TransformKind::kDrc: return "drc";
    case TransformKind::kLowPassFilter: return "lowpassfilter";
    case TransformKind::kHighPassFilter: return "highpassfilter";
  }
  return "?";
}

std::string_view CategoryName(TransformCategory c) {
  switch (c) {
    case TransformCategory::kVolume: return "VRT";
    case TransformCategory::kSpeed: return "SRT";
    case TransformCategory::kClearness: return "CRT";
    case TransformCategory::kUnaffected: return "UAT";
  }
  return "?";
}

TransformKind ParseKind(std::string_view name) {
  for (TransformKind k : kAllTransforms) {
    if (KindName(k) == name) return k;
  }
  throw ConfigError("unknown transformation '" + std::string(name) + "'");
}

bool SatisfiesCategoryConstraint(const MutationRecord& rec) {
  int counts[4] = {0, 0, 0, 0};
  for (const AppliedTransform& t : rec.history) {
    const TransformCategory c = CategoryOf(t.kind);
    if (c != TransformCategory::kUnaffected && ++counts[static_cast<int>(c)] > 1) {
      return false;
    }
  }
  return true;
}

std::optional<TransformKind> PickTransform(const MutationRecord& rec,
                                           std::mt19937_64& rng,
                                           std::size_t max_history) {
  if (rec.history.size() >= max_history) return std::nullopt;
  bool used[4] = {false, false, false, false};
  for (const AppliedTransform& t : rec.history) {
    used[static_cast<int>(CategoryOf(t.kind))] = true;
  }
  std::vector<TransformKind> admissible;
  for (TransformKind k : kAllTransforms) {
    const TransformCategory c = CategoryOf(k);
    if (c == TransformCategory::kUnaffected || !used[static_cast<int>(c)]) {
      admissible.push_back(k);
    }
  }
  if (admissible.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
  return admissible[pick(rng)];
}

TransformResult ApplyTransform(const AudioClip& clip, TransformKind kind,
                               std::mt19937_64& rng, const TransformRanges& r) {
  ValidateClip(clip);
  const double rate = static_cast<double>(clip.sample_rate);
  std::vector<double> x = ToDouble(clip);
  TransformResult out;
  switch (kind) {
    case TransformKind::kAddWhiteNoise: {
      const double snr_db = Uniform(rng, r.snr_db_min, r.snr_db_max);
      double power = 0.0;
      for (double v : x) power += v * v;
      power /= static_cast<double>(x.size());
      const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
      std::normal_distribution<double> noise(0.0, 1.0);
      for (double& v : x) v += sigma * noise(rng);
      out.params = {{"snr_db", snr_db}};
      break;
    }
    case TransformKind::kPitchShift: {
      const double semitones = Uniform(rng, r.semitones_min, r.semitones_max);
      x = dsp::PitchShift(x, semitones);
      out.params = {{"semitones", semitones}};
      break;
    }
    case TransformKind::kTrim: {
      const double threshold = DbToAmplitude(r.trim_threshold_db);
      auto loud = [&](double v) { return std::abs(v) >= threshold; };
      auto first = std::find_if(x.begin(), x.end(), loud);
      if (first == x.end()) throw TransformError("clip fully trimmed: no sample above threshold");
      auto last = std::find_if(x.rbegin(), x.rend(), loud).base();
      const auto begin = static_cast<double>(first - x.begin());
      const auto end = static_cast<double>(last - x.begin());
      x = std::vector<double>(first, last);
      out.params = {{"threshold_db", r.trim_threshold_db}, {"start", begin}, {"end", end}};
      break;
    }
    case TransformKind::kChangeSpeed: {
      const double factor = Uniform(rng, r.speed_min, r.speed_max);
      const long len = std::lround(static_cast<double>(x.size()) / factor);
      if (len < 1) throw TransformError("speed change leaves no samples");
      x = dsp::ResampleLinear(x, static_cast<std::size_t>(len));
      out.params = {{"factor", factor}};
      break;
    }
    case TransformKind::kChangeVolume: {
      const double gain = Uniform(rng, r.gain_min, r.gain_max);
      for (double& v : x) v *= gain;
      out.params = {{"gain", gain}};
      break;
    }
    case TransformKind::kDrc: {
      const double threshold = DbToAmplitude(r.drc_threshold_db);
      for (double& v : x) {
        const double mag = std::abs(v);
        if (mag > threshold) {
          v = std::copysign(threshold + (mag - threshold) / r.drc_ratio, v);
        }
      }
      out.params = {{"threshold_db", r.drc_threshold_db}, {"ratio", r.drc_ratio}};
      break;
    }
    case TransformKind::kLowPassFilter: {
      const double cutoff = Uniform(rng, r.lowpass_min_hz, r.lowpass_max_hz);
      x = dsp::Biquad::LowPass(cutoff, rate).Process(x);
      out.params = {{"cutoff_hz", cutoff}};
      break;
    }
    case TransformKind::kHighPassFilter: {
      const double cutoff = Uniform(rng, r.highpass_min_hz, r.highpass_max_hz);
      x = dsp::Biquad::HighPass(cutoff, rate).Process(x);
      out.params = {{"cutoff_hz", cutoff}};
      break;
    }
  }
  out.clip = FromDouble(x, clip.sample_rate);
  return out;
}

std::pair<AudioClip, AppliedTransform> ApplySeeded(const AudioClip& clip,
                                                   TransformKind kind,
                                                   std::uint64_t seed,
                                                   const TransformRanges& ranges) {
  std::mt19937_64 rng(seed);
  TransformResult res = ApplyTransform(clip, kind, rng, ranges);
  return {std::move(res.clip), AppliedTransform{kind, std::move(res.params), seed}};
}

nlohmann::ordered_json ToJson(const MutationRecord& rec) {
  nlohmann::ordered_json j;
  j["seed_id"] = rec.seed_id;
  j["history"] = nlohmann::ordered_json::array();
  for (const AppliedTransform& t : rec.history) {
    nlohmann::ordered_json e;
    e["kind"] = KindName(t.kind);
    e["category"] = CategoryName(CategoryOf(t.kind));
    e["params"] = nlohmann::ordered_json::object();
    for (const auto& [name, value] : t.params) e["params"][name] = value;
    e["seed"] = t.seed;
    j["history"].push_back(std::move(e));
  }
  return j;
}

MutationRecord MutationRecordFromJson(const nlohmann::ordered_json& j) {
  try {
    MutationRecord rec;
    rec.seed_id = j.at("seed_id").get<std::string>();
    for (const auto& e : j.at("history")) {
      AppliedTransform t;
      t.kind = ParseKind(e.at("kind").get<std::string>());
      for (const auto& [name, value] : e.at("params").items()) {
        t.params[name] = value.get<double>();
      }
      t.seed = e.at("seed").get<std::uint64_t>();
      rec.history.push_back(std::move(t));
    }
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed mutation record: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(0, std::string("malformed mutation record: ") + e.what());
  }
}

}  // namespace rnncov
