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

// Before/after evaluation of a filter result against a size-matched random
// control.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "aflite/classifiers.hpp"
#include "aflite/core.hpp"
#include "aflite/rng.hpp"

namespace aflite {

struct EvaluationOptions {
  double holdout_fraction = 0.2;
  TrainConfig train;
  double rbf_regularization = 1.0;
  // 0 picks default_rbf_gamma() of each training set.
  double rbf_gamma = 0.0;
};

struct AccuracyTriple {
  double before = 0.0;          // trained on all non-holdout instances
  double after = 0.0;           // trained on retained non-holdout instances
  double random_control = 0.0;  // trained on a random subset of retained size
};

struct EvaluationReport {
  std::size_t original_size = 0;
  std::size_t retained_size = 0;
  std::size_t control_size = 0;
  double holdout_fraction = 0.0;
  std::size_t holdout_size = 0;
  AccuracyTriple linear_accuracy;
  std::optional<AccuracyTriple> rbf_accuracy;  // binary tasks only
  // Synthetic runs only.
  std::optional<double> bias_removal;
  std::optional<double> flip_removal;
  std::optional<double> clean_removal;  // bias-free instances removed
};

struct InstanceMasks {
  const std::vector<bool>* bias = nullptr;
  const std::vector<bool>* flip = nullptr;
};

// Splits the full dataset once into a label-stratified holdout and the rest.
// Each variant (full, retained, control) trains on its members outside the
// holdout and is scored on its members inside it, so every accuracy is
// measured on the distribution that variant describes. Throws
// EvaluationError when a variant has too few instances on either side.
EvaluationReport evaluate(const EmbeddedDataset& dataset, const FilterResult& result,
                          const EvaluationOptions& options, Rng& rng,
                          InstanceMasks masks = {});

// Label-stratified holdout membership: round(fraction * count) per label.
std::vector<bool> stratified_holdout(std::span<const int> labels, double fraction, Rng& rng);

}  // namespace aflite
