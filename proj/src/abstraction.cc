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


#include "rnncov/abstraction.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include <Eigen/Eigenvalues>

#include "rnncov/error.h"

namespace rnncov {

namespace {

// Keeps index arithmetic (distances, lattice neighbors) far from overflow.
constexpr std::int64_t kIndexLimit = std::int64_t{1} << 30;

}  // namespace

Projection FitProjection(const Eigen::MatrixXd& samples, std::size_t k) {
  const auto n = static_cast<std::size_t>(samples.rows());
  const auto d = static_cast<std::size_t>(samples.cols());
  if (n == 0 || d == 0) throw ConfigError("PCA needs at least one sample");
  if (k == 0 || k > std::min(n, d)) {
    throw ConfigError("PCA dimension " + std::to_string(k) +
                      " must be in [1, min(N=" + std::to_string(n) +
                      ", D=" + std::to_string(d) + ")]");
  }
  if (!samples.allFinite()) {
    throw ValidationError("PCA input contains non-finite values");
  }

  Projection p;
  p.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - p.mean.transpose();
  const double divisor = n > 1 ? static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / divisor;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("covariance eigendecomposition did not converge");
  }
  // Eigenvalues come back ascending.
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  p.components.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  p.explained_variance.resize(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - i);
    Eigen::VectorXd axis = vectors.col(col);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < axis.size(); ++j) {
      if (std::abs(axis[j]) > std::abs(axis[arg])) arg = j;
    }
    if (axis[arg] < 0) axis = -axis;
    p.components.row(static_cast<Eigen::Index>(i)) = axis.transpose();
    p.explained_variance[static_cast<Eigen::Index>(i)] = std::max(values[col], 0.0);
  }
  return p;
}

Eigen::VectorXd Project(const Projection& p, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != p.input_dim()) {
    throw ValidationError("projection expects length " +
                          std::to_string(p.input_dim()) + ", got " +
                          std::to_string(v.size()));
  }
  return p.components * (v - p.mean);
}

Eigen::VectorXd Project(const Projection& p, std::span<const float> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = static_cast<double>(v[i]);
  }
  return Project(p, x);
}

double GridConfig::Edge(std::size_t d, std::int64_t i) const {
  if (i == static_cast<std::int64_t>(partitions)) return upper[d];
  return lower[d] + static_cast<double>(i) * Width(d);
}

GridConfig FitGrid(const Eigen::MatrixXd& projected, std::size_t partitions) {
  if (partitions < 1) throw ConfigError("partition count must be >= 1");
  if (projected.rows() < 1) throw ConfigError("grid needs at least one point");
  if (!projected.allFinite()) {
    throw ValidationError("grid input contains non-finite values");
  }
  GridConfig g;
  g.partitions = partitions;
  for (Eigen::Index d = 0; d < projected.cols(); ++d) {
    const double lo = projected.col(d).minCoeff();
    double hi = projected.col(d).maxCoeff();
    if (!(hi > lo)) hi = lo + 1.0;
    g.lower.push_back(lo);
    g.upper.push_back(hi);
  }
  return g;
}

std::vector<std::int32_t> CellIndices(const GridConfig& g,
                                      const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != g.dims()) {
    throw ValidationError("grid expects " + std::to_string(g.dims()) +
                          " dimensions, got " + std::to_string(v.size()));
  }
  const auto m = static_cast<std::int64_t>(g.partitions);
  std::vector<std::int32_t> out(g.dims());
  for (std::size_t d = 0; d < g.dims(); ++d) {
    const double x = v[static_cast<Eigen::Index>(d)];
    if (!std::isfinite(x)) throw ValidationError("cannot quantize non-finite value");
    std::int64_t idx;
    if (x >= g.Edge(d, m - 1) && x <= g.upper[d]) {
      idx = m - 1;
    } else {
      const double raw = std::floor((x - g.lower[d]) / g.Width(d));
      idx = static_cast<std::int64_t>(
          std::clamp(raw, static_cast<double>(-kIndexLimit),
                     static_cast<double>(kIndexLimit)));
      // Rounding in the division can land one interval off; settle against
      // the explicit edges.
      if (std::abs(idx) < kIndexLimit) {
        while (idx > std::numeric_limits<std::int32_t>::min() &&
               x < g.Edge(d, idx)) {
          --idx;
        }
        while (x >= g.Edge(d, idx + 1) && !(idx + 1 == m && x <= g.upper[d])) {
          ++idx;
        }
        if (idx == m - 1 && x > g.upper[d]) idx = m;
      }
    }
    out[d] = static_cast<std::int32_t>(idx);
  }
  return out;
}

std::int64_t Distance(const AbstractState& a, const AbstractState& b) {
  if (a.dims() != b.dims()) {
    throw ValidationError("distance between cells of different dimension");
  }
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < a.dims(); ++i) {
    sum += std::abs(static_cast<std::int64_t>(a.index[i]) - b.index[i]);
  }
  return sum;
}

std::vector<std::set<AbstractState>> BoundaryRegion(
    const std::set<AbstractState>& visited, std::size_t steps) {
  if (visited.empty()) throw ValidationError("boundary of an empty state set");
  const std::size_t k = visited.begin()->dims();
  for (const AbstractState& s : visited) {
    if (s.dims() != k) throw ValidationError("visited states mix dimensions");
  }

  std::unordered_set<AbstractState, CellHash> seen(visited.begin(), visited.end());
  std::vector<AbstractState> frontier(visited.begin(), visited.end());
  std::vector<std::set<AbstractState>> layers;
  layers.reserve(steps);
  for (std::size_t layer = 0; layer < steps; ++layer) {
    std::vector<AbstractState> next;
    for (const AbstractState& s : frontier) {
      for (std::size_t d = 0; d < k; ++d) {
        for (int delta : {-1, 1}) {
          AbstractState n = s;
          n.index[d] += delta;
          if (seen.insert(n).second) next.push_back(std::move(n));
        }
      }
    }
    layers.emplace_back(next.begin(), next.end());
    frontier = std::move(next);
  }
  return layers;
}

}  // namespace rnncov
