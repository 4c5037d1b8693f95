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

#include "aflite/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "aflite/error.hpp"

namespace aflite {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw InputError("core", "ragged row " + std::to_string(r));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::gather(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

EmbeddedDataset::EmbeddedDataset(std::vector<std::string> ids, Matrix features,
                                 std::vector<int> labels)
    : ids_(std::move(ids)), features_(std::move(features)), labels_(std::move(labels)) {
  if (ids_.size() != features_.rows() || ids_.size() != labels_.size()) {
    throw InputError("core", "ids, feature rows and labels differ in length");
  }
  if (!ids_.empty() && features_.cols() == 0) {
    throw InputError("core", "feature dimension must be at least 1");
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids_.size());
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) throw InputError("core", "duplicate id '" + id + "'");
  }
  for (double v : features_.data()) {
    if (!std::isfinite(v)) throw InputError("core", "non-finite feature value");
  }
  for (int y : labels_) {
    if (y < 0) throw InputError("core", "negative label");
    num_classes_ = std::max(num_classes_, y + 1);
  }
}

std::size_t EmbeddedDataset::distinct_labels() const {
  return std::set<int>(labels_.begin(), labels_.end()).size();
}

EmbeddedDataset EmbeddedDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    ids.push_back(ids_.at(i));
    labels.push_back(labels_[i]);
  }
  return EmbeddedDataset(std::move(ids), features_.gather(indices), std::move(labels));
}

Partition random_partition(std::size_t working_set_size, std::size_t t, Rng& rng) {
  if (t < 1 || t >= working_set_size) {
    throw InvalidPartition("core", "train size " + std::to_string(t) +
                                       " leaves no test instances in a working set of " +
                                       std::to_string(working_set_size));
  }
  std::vector<std::size_t> order(working_set_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first t slots end up a uniform size-t subset.
  for (std::size_t i = 0; i < t; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, working_set_size - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  Partition p;
  p.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t));
  p.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(t), order.end());
  std::sort(p.train_indices.begin(), p.train_indices.end());
  std::sort(p.test_indices.begin(), p.test_indices.end());
  return p;
}

std::vector<double> PredictabilityTable::scores() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = score(i);
  return out;
}

void PredictabilityTable::merge(const PredictabilityTable& other) {
  if (other.size() != size()) {
    throw ContractViolation("core", "merging predictability tables of different sizes");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    correct_[i] += other.correct_[i];
    total_[i] += other.total_[i];
  }
}

void update_table(PredictabilityTable& table, const Partition& partition,
                  std::span<const Prediction> predictions, std::span<const int> truth) {
  if (predictions.size() != partition.test_indices.size()) {
    throw ContractViolation("core", "expected " +
                                        std::to_string(partition.test_indices.size()) +
                                        " predictions, got " +
                                        std::to_string(predictions.size()));
  }
  if (truth.size() != table.size()) {
    throw ContractViolation("core", "truth labels do not cover the working set");
  }
  std::vector<char> pending(table.size(), 0);
  for (std::size_t i : partition.test_indices) {
    if (i >= table.size()) throw ContractViolation("core", "test index out of range");
    pending[i] = 1;
  }
  for (const Prediction& p : predictions) {
    if (p.index >= table.size() || !pending[p.index]) {
      throw ContractViolation("core", "prediction for index " + std::to_string(p.index) +
                                          " which is not an unscored test index");
    }
    pending[p.index] = 0;
  }
  for (const Prediction& p : predictions) table.record(p.index, p.label == truth[p.index]);
}

}  // namespace aflite
