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

// Adversarial filtering: each phase trains an ensemble of linear models on
// random partitions of the surviving instances, scores every instance by how
// often its label is predicted correctly when held out, and removes the most
// predictable ones.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aflite/classifiers.hpp"
#include "aflite/core.hpp"
#include "aflite/rng.hpp"

namespace aflite {

enum class Strategy {
  kGreedy,          // one instance per phase
  kGreedySlicing,   // top-k per phase
  kGumbelSampling,  // k sampled without replacement, proportional to score
};

std::string_view to_string(Strategy s);
// Accepts "greedy", "greedy_slicing", "gumbel_sampling".
Strategy parse_strategy(std::string_view name);

struct FilterConfig {
  std::size_t n = 0;    // target minimum retained size
  std::size_t m = 128;  // partitions per phase
  std::size_t t = 100;  // train size per partition
  std::size_t k = 1;    // slice size
  double tau = 0.75;    // scores >= tau are removable
  Strategy strategy = Strategy::kGreedySlicing;
  std::uint64_t seed = 0;

  TrainConfig train;
  // Worker threads for partition jobs; 0 means hardware concurrency.
  std::size_t threads = 1;
  std::size_t max_partition_retries = 10;

  // Greedy always removes one instance at a time.
  std::size_t slice_size() const { return strategy == Strategy::kGreedy ? 1 : k; }

  // Requires 1 <= t < n <= dataset_size, m >= 1, k >= 1, tau >= 0.
  void validate(std::size_t dataset_size) const;
};

// Scores every instance of `working`. Partition j of the phase draws from
// its own stream seeded by derive_seed(phase_seed, {j}), so the result does
// not depend on config.threads. A partition whose training split is
// single-class is redrawn up to config.max_partition_retries times.
PredictabilityTable score_phase(const DatasetView& working, const FilterConfig& config,
                                std::uint64_t phase_seed);

// Indices of the k largest values of log(score) + Gumbel noise, in
// descending order of perturbed value. Non-positive scores are never chosen;
// if fewer than k remain, all of them are returned.
std::vector<std::size_t> gumbel_topk(std::span<const double> scores, std::size_t k,
                                     Rng& rng);

// Up to config.slice_size() working indices with score >= tau, ordered by
// descending score (ties by lower index). Empty when no score reaches tau.
std::vector<std::size_t> select_removals(std::span<const double> scores,
                                         const FilterConfig& config, Rng& rng);

// Runs phases until the selection comes up short or the working set reaches
// n. A slice that would undershoot n is trimmed to its highest scores.
// Errors from a phase carry the phase index (Error::phase()).
FilterResult run_filter(const EmbeddedDataset& dataset, const FilterConfig& config);

}  // namespace aflite
