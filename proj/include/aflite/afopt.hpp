// Copyright 2026 The AFLite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exhaustive reference computations for tiny datasets: the exact
// representation bias of a subset (expected held-out accuracy over every
// fixed-size train/test split) and the subset of size >= n minimizing it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aflite/classifiers.hpp"
#include "aflite/core.hpp"

namespace aflite {

// Trains on (train_x, train_y) and returns one predicted label per row of
// test_x, or nullopt to drop the split from the enumeration.
using SplitTrainer = std::function<std::optional<std::vector<int>>(
    const Matrix& train_x, std::span<const int> train_y, const Matrix& test_x)>;

// What a trainer does with a single-class training split.
enum class DegenerateSplit {
  // Drop the split. The kept splits are the ones score_phase can draw.
  kExclude,
  // Predict the one training class everywhere. Every split stays defined and
  // q stays uniform over all C(|S|, t) splits.
  kConstantPrediction,
};

// Linear trainer with a fixed config and seed.
SplitTrainer linear_split_trainer(TrainConfig config = {}, std::uint64_t seed = 0,
                                  std::size_t num_classes = 0,
                                  DegenerateSplit policy = DegenerateSplit::kExclude);

inline constexpr unsigned long long kDefaultSplitBudget = 50'000;
inline constexpr std::size_t kMaxAfoptDatasetSize = 14;

// q is uniform over the splits the trainer did not drop. Per-instance
// vectors are indexed by position in `subset`.
struct ExactBiasReport {
  std::vector<std::size_t> subset;  // dataset row indices, ascending
  double bias = 0.0;                // == bias_direct
  // Mean over kept splits of the split's test accuracy.
  double bias_direct = 0.0;
  // Sum over i of p(i) = q(i) * E[f_i / |T| | T contains i]. Equal to
  // bias_direct for any q.
  double bias_factored = 0.0;
  // Sum over i of p~(i) = E[f_i | T contains i] / |S|. Equal to bias_direct
  // when no split was dropped, since then q(i) = |T|/|S|.
  double bias_uniform_factored = 0.0;
  // E[f_i | T contains i]; 0 for an instance never tested.
  std::vector<double> conditional_accuracy;
  std::vector<double> p;
  std::vector<double> p_tilde;
  // q(i): fraction of kept splits whose test set contains i.
  std::vector<double> marginal_inclusion;
  unsigned long long evaluated_splits = 0;  // C(|S|, t)
  unsigned long long excluded_splits = 0;
};

// Exact binomial coefficient; saturates at ULLONG_MAX.
unsigned long long binomial(std::size_t n, std::size_t k);

// Enumerates every size-t training subset of `subset`. Throws
// BudgetExceeded when C(|S|, t) > budget, InvalidPartition unless
// 1 <= t < |S|, DegenerateTraining when the trainer drops every split.
ExactBiasReport exact_representation_bias(const DatasetView& subset, std::size_t t,
                                          const SplitTrainer& trainer,
                                          unsigned long long budget = kDefaultSplitBudget);

struct AfoptResult {
  ExactBiasReport best;
  std::size_t subsets_evaluated = 0;
  // Subsets on which the trainer dropped every split (e.g. single-class).
  std::size_t subsets_skipped = 0;
};

// Minimizes exact bias over all subsets of size >= n. Ties (within 1e-12)
// go to the lexicographically smallest index set. Requires |D| <= 14 and
// t < n.
AfoptResult afopt_search(const EmbeddedDataset& dataset, std::size_t n, std::size_t t,
                         const SplitTrainer& trainer,
                         unsigned long long budget = kDefaultSplitBudget);

}  // namespace aflite
