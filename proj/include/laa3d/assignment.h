/* Copyright 2026 The laa3d-eval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Matching primitives: confidence-ordered greedy matching and optimal linear
// assignment over cost matrices with explicitly forbidden pairs.

#ifndef LAA3D_ASSIGNMENT_H_
#define LAA3D_ASSIGNMENT_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace laa3d {

// Dense rows x cols matrix of non-negative finite costs. Entries marked
// forbidden can never be selected; no sentinel cost value is involved.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(size_t rows, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  // Throws kInvariant if cost is negative or non-finite.
  void Set(size_t r, size_t c, double cost);
  void Forbid(size_t r, size_t c);
  bool feasible(size_t r, size_t c) const { return feasible_[r * cols_ + c]; }
  // Only meaningful when feasible(r, c).
  double at(size_t r, size_t c) const { return costs_[r * cols_ + c]; }

  CostMatrix Transposed() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> costs_;
  std::vector<bool> feasible_;
};

struct Matching {
  std::vector<std::pair<size_t, size_t>> pairs;  // (row, col)
  std::vector<size_t> unmatched_rows;
  std::vector<size_t> unmatched_cols;

  // Sum of costs over the matched pairs.
  double TotalCost(const CostMatrix& costs) const;
  // Column matched to `row`, if any.
  std::optional<size_t> ColFor(size_t row) const;
};

// Greedy matching in descending score order. Each prediction takes the
// nearest still-unmatched ground truth with distance <= gate. Equal scores
// are resolved by the smaller nearest distance, then by input order; equal
// distances pick the lower ground-truth index. Pairs are returned in the
// order they were formed. `distance(pred, gt)` must be finite.
Matching GreedyMatch(std::span<const double> scores, size_t num_gt,
                     const std::function<double(size_t, size_t)>& distance,
                     double gate);

// Minimum-cost assignment of size min(rows, cols). Throws kInfeasible when
// forbidden pairs rule out every assignment of that size.
Matching Hungarian(const CostMatrix& costs);

// Partial assignment: maximizes the number of matched pairs, and among
// those minimizes total cost. Never throws.
Matching MinCostMaxCardinality(const CostMatrix& costs);

// Partial assignment maximizing the summed weight of the selected feasible
// pairs. Weights must be non-negative.
Matching MaxWeightMatching(const CostMatrix& weights);

}  // namespace laa3d

#endif  // LAA3D_ASSIGNMENT_H_
