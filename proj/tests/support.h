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


// Shared fixtures, random generators and independent oracles for tests.
// Nothing in here calls into the implementation paths it is used to check.

#ifndef RNNCOV_TESTS_SUPPORT_H_
#define RNNCOV_TESTS_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rnncov/abstraction.h"
#include "rnncov/mdp.h"
#include "rnncov/trace.h"

namespace rnncov::testing {

// Four cells on a line (1-D states, grid of 4 over [0, 4]) and two input
// cells (1-D inputs, grid of 2 over [0, 1]). Three traces:
//   t1: s0 -x-> s1 -x-> s2
//   t2: s0 -x-> s1 -x-> s3 -x'-> s3
//   t3: s0 -x-> s1 -x'-> s1 -x'-> s0 -x-> s1
// giving abstract transitions {(0,1),(1,0),(1,1),(1,2),(1,3),(3,3)},
// Pr(0->1) = 1 and Pr_x(1,2) = Pr_x(1,3) = 1/2.
inline TraceSet FourCellTraces() {
  auto step = [](float s, float x) {
    return TraceStep{StateVector{s}, FeatureVector{x}, 0};
  };
  TraceSet ts;
  ts.state_dim = 1;
  ts.input_dim = 1;
  ts.traces.push_back({"t1", {step(0.0f, 0.0f), step(1.5f, 0.0f)}, {2.5f}});
  ts.traces.push_back(
      {"t2", {step(0.0f, 0.0f), step(1.4f, 0.0f), step(3.5f, 1.0f)}, {4.0f}});
  ts.traces.push_back({"t3",
                       {step(0.0f, 0.0f), step(1.6f, 1.0f), step(1.2f, 1.0f),
                        step(0.5f, 0.0f)},
                       {1.7f}});
  return ts;
}

inline ModelParams FourCellParams() { return {1, 4, 1, 2}; }

inline AbstractState S(std::initializer_list<std::int32_t> idx) {
  return AbstractState{std::vector<std::int32_t>(idx)};
}
inline AbstractInput X(std::initializer_list<std::int32_t> idx) {
  return AbstractInput{std::vector<std::int32_t>(idx)};
}

// Random trace set with small dimensions. Values are drawn from a handful of
// clusters so abstract cells get revisited.
inline TraceSet RandomTraceSet(std::mt19937_64& rng, std::size_t state_dim,
                               std::size_t input_dim, std::size_t n_traces,
                               std::size_t max_steps) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::uniform_int_distribution<std::size_t> len(1, max_steps);
  std::uniform_int_distribution<int> cluster(0, 3);
  auto vec = [&](std::size_t n) {
    std::vector<float> v(n);
    const float c = static_cast<float>(cluster(rng));
    for (float& x : v) x = c + 0.3f * u(rng);
    return v;
  };
  TraceSet ts;
  ts.state_dim = state_dim;
  ts.input_dim = input_dim;
  for (std::size_t t = 0; t < n_traces; ++t) {
    Trace trace;
    trace.id = "r" + std::to_string(t);
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) {
      TraceStep step;
      step.state = i == 0 ? StateVector(state_dim, 0.0f) : vec(state_dim);
      step.input = vec(input_dim);
      step.output = static_cast<TokenId>(rng() % 5);
      trace.steps.push_back(std::move(step));
    }
    trace.final_state = vec(state_dim);
    ts.traces.push_back(std::move(trace));
  }
  return ts;
}

// ---- Oracles -------------------------------------------------------------

// Interval index by scanning an explicit interval list over
// [-span, m + span). Returns `sentinel` if v is outside the scanned range.
inline std::int64_t IntervalScan(double lb, double ub, std::size_t m, double v,
                                 std::int64_t span = 64,
                                 std::int64_t sentinel = INT64_MIN) {
  const double w = (ub - lb) / static_cast<double>(m);
  const auto mm = static_cast<std::int64_t>(m);
  auto edge = [&](std::int64_t i) {
    return i == mm ? ub : lb + static_cast<double>(i) * w;
  };
  for (std::int64_t i = -span; i < mm + span; ++i) {
    const double lo = edge(i), hi = edge(i + 1);
    if (i == mm - 1) {
      if (v >= lo && v <= ub) return i;
    } else if (i == mm) {
      if (v > ub && v < hi) return i;
    } else if (v >= lo && v < hi) {
      return i;
    }
  }
  return sentinel;
}

// Exhaustive scan of the bounding box of `visited` inflated by `steps`.
inline std::vector<std::set<AbstractState>> BoundaryScan(
    const std::set<AbstractState>& visited, std::size_t steps) {
  const std::size_t k = visited.begin()->dims();
  std::vector<std::int32_t> lo(k, INT32_MAX), hi(k, INT32_MIN);
  for (const auto& s : visited) {
    for (std::size_t d = 0; d < k; ++d) {
      lo[d] = std::min(lo[d], s.index[d]);
      hi[d] = std::max(hi[d], s.index[d]);
    }
  }
  const auto pad = static_cast<std::int32_t>(steps);
  std::vector<std::set<AbstractState>> layers(steps);
  std::vector<std::int32_t> cur(k);
  for (std::size_t d = 0; d < k; ++d) cur[d] = lo[d] - pad;
  while (true) {
    std::int64_t best = INT64_MAX;
    for (const auto& s : visited) {
      std::int64_t dist = 0;
      for (std::size_t d = 0; d < k; ++d) {
        dist += std::abs(static_cast<std::int64_t>(cur[d]) - s.index[d]);
      }
      best = std::min(best, dist);
    }
    if (best >= 1 && best <= static_cast<std::int64_t>(steps)) {
      layers[static_cast<std::size_t>(best - 1)].insert(AbstractState{cur});
    }
    std::size_t d = 0;
    while (d < k && ++cur[d] > hi[d] + pad) {
      cur[d] = lo[d] - pad;
      ++d;
    }
    if (d == k) break;
  }
  return layers;
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
// (eigenvalues, eigenvectors as columns), unsorted.
inline std::pair<std::vector<double>, std::vector<std::vector<double>>>
JacobiEigen(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i];
  return {values, v};
}

// Word/character Levenshtein distance by the full DP table.
template <typename Seq>
std::size_t EditDistanceTable(const Seq& a, const Seq& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                           std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      dp[i][j] = std::min({dp[i - 1][j] + 1, dp[i][j - 1] + 1,
                           dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return dp[a.size()][b.size()];
}

}  // namespace rnncov::testing

#endif  // RNNCOV_TESTS_SUPPORT_H_
