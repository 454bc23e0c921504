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


// State abstraction: PCA projection to k dimensions followed by a regular
// grid with m equal-width intervals per axis. Grid cells are identified by
// signed index tuples; indices outside [0, m) denote cells beyond the
// profiled bounds.

#ifndef RNNCOV_ABSTRACTION_H_
#define RNNCOV_ABSTRACTION_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rnncov {

// Index tuple of a grid cell. The tag keeps state cells and input cells from
// being mixed up.
template <typename Tag>
struct Cell {
  std::vector<std::int32_t> index;

  std::size_t dims() const { return index.size(); }
  auto operator<=>(const Cell&) const = default;
  bool operator==(const Cell&) const = default;
};

struct StateTag {};
struct InputTag {};
using AbstractState = Cell<StateTag>;
using AbstractInput = Cell<InputTag>;

struct CellHash {
  template <typename Tag>
  std::size_t operator()(const Cell<Tag>& c) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t v : c.index) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Rows of `components` are orthonormal principal axes, ordered by
// decreasing explained variance.
struct Projection {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // k x D
  Eigen::VectorXd explained_variance;

  std::size_t input_dim() const { return static_cast<std::size_t>(mean.size()); }
  std::size_t output_dim() const {
    return static_cast<std::size_t>(components.rows());
  }
};

// Exact PCA over the rows of `samples` (N x D). The covariance uses the
// N-1 divisor (N when N == 1). Each component's largest-magnitude entry is
// made positive. Throws ConfigError when k is 0 or exceeds min(N, D), and
// ValidationError on non-finite input.
Projection FitProjection(const Eigen::MatrixXd& samples, std::size_t k);

// components * (v - mean). Throws ValidationError on a length mismatch.
Eigen::VectorXd Project(const Projection& p, std::span<const float> v);
Eigen::VectorXd Project(const Projection& p, const Eigen::VectorXd& v);

struct GridConfig {
  std::size_t partitions = 1;  // m
  std::vector<double> lower;   // lb_d
  std::vector<double> upper;   // ub_d

  std::size_t dims() const { return lower.size(); }
  double Width(std::size_t d) const {
    return (upper[d] - lower[d]) / static_cast<double>(partitions);
  }
  // Lower edge of interval i on axis d. Edge m is upper[d] exactly.
  double Edge(std::size_t d, std::int64_t i) const;
};

// Bounds are the per-column min and max of `projected` (N x k). A column with
// zero spread gets upper = lower + 1.
GridConfig FitGrid(const Eigen::MatrixXd& projected, std::size_t partitions);

// Interval index per axis. Intervals are half-open [Edge(i), Edge(i+1)),
// except that the top in-range interval also contains upper. Values outside
// the bounds yield indices < 0 or >= m.
std::vector<std::int32_t> CellIndices(const GridConfig& g,
                                      const Eigen::VectorXd& v);

inline AbstractState AbstractStateOf(const GridConfig& g,
                                     const Eigen::VectorXd& v) {
  return AbstractState{CellIndices(g, v)};
}

// Manhattan distance between index tuples. Throws ValidationError when the
// dimensions differ.
std::int64_t Distance(const AbstractState& a, const AbstractState& b);

// Layers of the unbounded integer lattice around `visited`: element i-1
// holds exactly the cells whose minimal distance to `visited` is i, for
// i in [1, steps]. Throws ValidationError if `visited` is empty or mixes
// dimensions.
std::vector<std::set<AbstractState>> BoundaryRegion(
    const std::set<AbstractState>& visited, std::size_t steps);

}  // namespace rnncov

#endif  // RNNCOV_ABSTRACTION_H_
