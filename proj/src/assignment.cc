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

#include "laa3d/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "laa3d/error.h"

namespace laa3d {
namespace {

// Lexicographic cost (primary, secondary). Lets the partial-assignment
// solver rank cardinality strictly above distance without a big-M constant.
struct LexCost {
  double primary = 0.0;
  double secondary = 0.0;

  LexCost operator+(const LexCost& o) const {
    return {primary + o.primary, secondary + o.secondary};
  }
  LexCost operator-(const LexCost& o) const {
    return {primary - o.primary, secondary - o.secondary};
  }
  LexCost& operator+=(const LexCost& o) { return *this = *this + o; }
  LexCost& operator-=(const LexCost& o) { return *this = *this - o; }
  bool operator<(const LexCost& o) const {
    return primary < o.primary ||
           (primary == o.primary && secondary < o.secondary);
  }
};

template <typename T>
T Infinity();
template <>
double Infinity<double>() {
  return std::numeric_limits<double>::infinity();
}
template <>
LexCost Infinity<LexCost>() {
  return {std::numeric_limits<double>::infinity(), 0.0};
}

bool IsInfinite(double v) { return std::isinf(v); }
bool IsInfinite(const LexCost& v) { return std::isinf(v.primary); }

// Shortest-augmenting-path Hungarian method (potentials form) for an
// n x m problem with n <= m. cost(i, j) returns nullopt for forbidden
// pairs. Returns the column of every row, or nullopt if some row cannot
// be assigned.
template <typename T, typename CostFn>
std::optional<std::vector<size_t>> SolveRows(size_t n, size_t m,
                                             const CostFn& cost) {
  const T inf = Infinity<T>();
  std::vector<T> u(n + 1), v(m + 1);
  std::vector<size_t> p(m + 1, 0), way(m + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<T> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const size_t i0 = p[j0];
      T delta = inf;
      size_t j1 = 0;
      for (size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::optional<T> c = cost(i0 - 1, j - 1);
        if (c) {
          const T cur = *c - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0 || IsInfinite(delta)) return std::nullopt;
      for (size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else if (!IsInfinite(minv[j])) {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<size_t> assignment(n, 0);
  for (size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

Matching BuildMatching(size_t rows, size_t cols,
                       std::vector<std::pair<size_t, size_t>> pairs) {
  Matching m;
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> row_used(rows, 0), col_used(cols, 0);
  for (const auto& [r, c] : pairs) {
    row_used[r] = 1;
    col_used[c] = 1;
  }
  m.pairs = std::move(pairs);
  for (size_t r = 0; r < rows; ++r) {
    if (!row_used[r]) m.unmatched_rows.push_back(r);
  }
  for (size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) m.unmatched_cols.push_back(c);
  }
  return m;
}

// Runs the solver with rows <= cols, transposing if needed, with `real`
// costs for feasible pairs and `skip` cost for leaving a row unmatched
// (when `skip` is set). Returns matched (row, col) pairs of the original.
template <typename T, typename RealFn>
std::optional<std::vector<std::pair<size_t, size_t>>> SolvePartial(
    const CostMatrix& costs, const RealFn& real, std::optional<T> skip) {
  const bool transpose = costs.rows() > costs.cols();
  const size_t n = transpose ? costs.cols() : costs.rows();
  const size_t m = transpose ? costs.rows() : costs.cols();
  const size_t width = skip ? m + n : m;
  auto cost = [&](size_t i, size_t j) -> std::optional<T> {
    if (j >= m) {
      // Dummy column j - m belongs to row i only.
      if (j - m == i) return *skip;
      return std::nullopt;
    }
    const size_t r = transpose ? j : i;
    const size_t c = transpose ? i : j;
    if (!costs.feasible(r, c)) return std::nullopt;
    return real(costs.at(r, c));
  };
  const auto rows = SolveRows<T>(n, width, cost);
  if (!rows) return std::nullopt;
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (*rows)[i];
    if (j >= m) continue;
    pairs.emplace_back(transpose ? j : i, transpose ? i : j);
  }
  return pairs;
}

}  // namespace

CostMatrix::CostMatrix(size_t rows, size_t cols)
    : rows_(rows),
      cols_(cols),
      costs_(rows * cols, 0.0),
      feasible_(rows * cols, true) {}

void CostMatrix::Set(size_t r, size_t c, double cost) {
  if (!std::isfinite(cost) || cost < 0.0) {
    throw Error(ErrorCode::kInvariant,
                "cost must be finite and non-negative, got " +
                    std::to_string(cost));
  }
  costs_[r * cols_ + c] = cost;
  feasible_[r * cols_ + c] = true;
}

void CostMatrix::Forbid(size_t r, size_t c) { feasible_[r * cols_ + c] = false; }

CostMatrix CostMatrix::Transposed() const {
  CostMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) {
      if (feasible(r, c)) {
        t.Set(c, r, at(r, c));
      } else {
        t.Forbid(c, r);
      }
    }
  }
  return t;
}

double Matching::TotalCost(const CostMatrix& costs) const {
  double total = 0.0;
  for (const auto& [r, c] : pairs) total += costs.at(r, c);
  return total;
}

std::optional<size_t> Matching::ColFor(size_t row) const {
  for (const auto& [r, c] : pairs) {
    if (r == row) return c;
  }
  return std::nullopt;
}

Matching GreedyMatch(std::span<const double> scores, size_t num_gt,
                     const std::function<double(size_t, size_t)>& distance,
                     double gate) {
  const size_t num_pred = scores.size();
  std::vector<size_t> order(num_pred);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<char> gt_taken(num_gt, 0);
  std::vector<char> pred_done(num_pred, 0);
  std::vector<std::pair<size_t, size_t>> pairs;

  // Nearest free ground truth within the gate for one prediction.
  auto nearest = [&](size_t pred) -> std::pair<std::optional<size_t>, double> {
    std::optional<size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < num_gt; ++g) {
      if (gt_taken[g]) continue;
      const double d = distance(pred, g);
      if (d <= gate && d < best_d) {
        best = g;
        best_d = d;
      }
    }
    return {best, best_d};
  };

  size_t begin = 0;
  while (begin < num_pred) {
    size_t end = begin + 1;
    while (end < num_pred && scores[order[end]] == scores[order[begin]]) ++end;
    // Within a group of equal scores, repeatedly commit the prediction
    // whose nearest free ground truth is closest.
    for (size_t round = begin; round < end; ++round) {
      std::optional<size_t> pick_pred, pick_gt;
      double pick_d = std::numeric_limits<double>::infinity();
      for (size_t k = begin; k < end; ++k) {
        const size_t pred = order[k];
        if (pred_done[pred]) continue;
        const auto [g, d] = nearest(pred);
        if (!g) continue;
        if (!pick_pred || d < pick_d) {
          pick_pred = pred;
          pick_gt = g;
          pick_d = d;
        }
      }
      if (!pick_pred) break;
      pred_done[*pick_pred] = 1;
      gt_taken[*pick_gt] = 1;
      pairs.emplace_back(*pick_pred, *pick_gt);
    }
    begin = end;
  }

  Matching m;
  m.pairs = pairs;
  std::vector<char> pred_matched(num_pred, 0);
  for (const auto& [p, g] : pairs) pred_matched[p] = 1;
  for (size_t k : order) {
    if (!pred_matched[k]) m.unmatched_rows.push_back(k);
  }
  for (size_t g = 0; g < num_gt; ++g) {
    if (!gt_taken[g]) m.unmatched_cols.push_back(g);
  }
  return m;
}

Matching Hungarian(const CostMatrix& costs) {
  auto pairs = SolvePartial<double>(
      costs, [](double c) { return c; }, std::nullopt);
  if (!pairs) {
    throw Error(ErrorCode::kInfeasible,
                "no complete assignment of size " +
                    std::to_string(std::min(costs.rows(), costs.cols())));
  }
  return BuildMatching(costs.rows(), costs.cols(), std::move(*pairs));
}

Matching MinCostMaxCardinality(const CostMatrix& costs) {
  auto pairs = SolvePartial<LexCost>(
      costs, [](double c) { return LexCost{0.0, c}; },
      std::optional<LexCost>(LexCost{1.0, 0.0}));
  return BuildMatching(costs.rows(), costs.cols(), std::move(*pairs));
}

Matching MaxWeightMatching(const CostMatrix& weights) {
  auto pairs = SolvePartial<double>(
      weights, [](double w) { return -w; }, std::optional<double>(0.0));
  // A zero-weight pair contributes nothing; drop it so unmatched stays
  // meaningful.
  std::erase_if(*pairs, [&](const auto& rc) {
    return weights.at(rc.first, rc.second) == 0.0;
  });
  return BuildMatching(weights.rows(), weights.cols(), std::move(*pairs));
}

}  // namespace laa3d
