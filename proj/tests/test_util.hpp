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

#include <random>
#include <string>
#include <vector>

#include "aflite/core.hpp"

namespace aflite::testing {

inline std::vector<std::string> MakeIds(std::size_t n, const std::string& prefix = "i") {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

inline EmbeddedDataset MakeDataset(const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& labels) {
  return EmbeddedDataset(MakeIds(rows.size()), Matrix::from_rows(rows), labels);
}

// Labels are a threshold of feature 0; other features are Gaussian noise.
inline EmbeddedDataset ThresholdDataset(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dim);
    for (double& v : row) v = normal(rng);
    // Keep a margin so the classes are cleanly separable.
    row[0] = (i % 2 == 0 ? -1.0 : 1.0) * (0.5 + std::abs(row[0]));
    labels.push_back(row[0] > 0 ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return MakeDataset(rows, labels);
}

// Gaussian features and independent fair-coin labels.
inline EmbeddedDataset NoiseDataset(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dim);
    for (double& v : row) v = normal(rng);
    rows.push_back(std::move(row));
    labels.push_back(coin(rng) ? 1 : 0);
  }
  return MakeDataset(rows, labels);
}

}  // namespace aflite::testing
