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

// Dataset representation, train/test partitioning and predictability-score
// bookkeeping shared by every filtering strategy.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aflite/rng.hpp"

namespace aflite {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // Copy of the listed rows, in the given order.
  Matrix gather(std::span<const std::size_t> rows) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Instance ids, precomputed feature rows and integer class labels.
// Immutable once constructed; the constructor enforces all invariants.
class EmbeddedDataset {
 public:
  EmbeddedDataset() = default;
  EmbeddedDataset(std::vector<std::string> ids, Matrix features,
                  std::vector<int> labels);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return features_.cols(); }
  // One past the largest label.
  int num_classes() const { return num_classes_; }
  // Number of distinct labels actually present.
  std::size_t distinct_labels() const;

  const std::vector<std::string>& ids() const { return ids_; }
  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }

  EmbeddedDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> ids_;
  Matrix features_;
  std::vector<int> labels_;
  int num_classes_ = 0;
};

// A subset of a dataset addressed by dense row indices. Row order is the
// order of `indices`; position j in the view is "working index" j.
struct DatasetView {
  const EmbeddedDataset* data = nullptr;
  std::span<const std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  std::span<const double> row(std::size_t j) const {
    return data->features().row(indices[j]);
  }
  int label(std::size_t j) const { return data->labels()[indices[j]]; }
};

// Train/test split of a working set of size |S|, in working indices.
struct Partition {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Uniformly random size-t training subset; the test set is its complement.
// Both index lists come back sorted. Throws InvalidPartition unless
// 1 <= t < working_set_size.
Partition random_partition(std::size_t working_set_size, std::size_t t, Rng& rng);

struct Prediction {
  std::size_t index;  // working index
  int label;
};

// Per-instance correct/total prediction counts over a working set.
class PredictabilityTable {
 public:
  PredictabilityTable() = default;
  explicit PredictabilityTable(std::size_t size)
      : correct_(size, 0), total_(size, 0) {}

  std::size_t size() const { return total_.size(); }
  std::uint32_t correct(std::size_t i) const { return correct_[i]; }
  std::uint32_t total(std::size_t i) const { return total_[i]; }

  // correct/total, or 0 for an instance that was never predicted.
  double score(std::size_t i) const {
    return total_[i] == 0 ? 0.0
                          : static_cast<double>(correct_[i]) /
                                static_cast<double>(total_[i]);
  }
  std::vector<double> scores() const;

  void record(std::size_t i, bool is_correct) {
    ++total_[i];
    if (is_correct) ++correct_[i];
  }

  // Counts add. Associative and commutative.
  void merge(const PredictabilityTable& other);

  bool operator==(const PredictabilityTable&) const = default;

 private:
  std::vector<std::uint32_t> correct_;
  std::vector<std::uint32_t> total_;
};

// Adds one prediction per test index of `partition`. `predictions` must cover
// exactly the test set; `truth` is indexed by working index.
// Throws ContractViolation otherwise.
void update_table(PredictabilityTable& table, const Partition& partition,
                  std::span<const Prediction> predictions,
                  std::span<const int> truth);

struct PhaseRecord {
  std::size_t phase_index = 0;
  std::vector<std::string> removed_ids;
  std::vector<double> removed_scores;  // phase-time scores, same order
  double mean_score = 0.0;
  double max_score = 0.0;
  std::size_t remaining_count = 0;

  bool operator==(const PhaseRecord&) const = default;
};

struct FilterResult {
  std::vector<std::string> retained_ids;  // input order preserved
  std::vector<PhaseRecord> phases;        // only phases that removed something

  bool operator==(const FilterResult&) const = default;
};

}  // namespace aflite
