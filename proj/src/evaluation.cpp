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

#include "aflite/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "aflite/error.hpp"

namespace aflite {
namespace {

struct Split {
  Matrix train_x;
  std::vector<int> train_y;
  Matrix test_x;
  std::vector<int> test_y;
};

Split SplitMembers(const EmbeddedDataset& dataset, const std::vector<bool>& members,
                   const std::vector<bool>& holdout, const char* variant) {
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!members[i]) continue;
    (holdout[i] ? test : train).push_back(i);
  }
  if (train.size() < 2 || test.empty()) {
    throw EvaluationError(std::string(variant) + " set is too small to evaluate (" +
                          std::to_string(train.size()) + " train, " +
                          std::to_string(test.size()) + " holdout)");
  }
  Split s;
  s.train_x = dataset.features().gather(train);
  s.test_x = dataset.features().gather(test);
  for (std::size_t i : train) s.train_y.push_back(dataset.labels()[i]);
  for (std::size_t i : test) s.test_y.push_back(dataset.labels()[i]);
  return s;
}

double LinearAccuracy(const Split& s, const TrainConfig& config, std::size_t classes,
                      const char* variant) {
  Rng rng(0);
  try {
    const LinearModel model = train_linear(s.train_x, s.train_y, config, rng, classes);
    return accuracy(model, s.test_x, s.test_y);
  } catch (const DegenerateTraining&) {
    throw EvaluationError(std::string(variant) + " training set holds a single class");
  }
}

double RbfAccuracy(const Split& s, const EvaluationOptions& options) {
  const double gamma = options.rbf_gamma > 0.0 ? options.rbf_gamma : default_rbf_gamma(s.train_x);
  const RbfModel model = train_rbf(s.train_x, s.train_y, gamma, options.rbf_regularization);
  return accuracy(model, s.test_x, s.test_y);
}

double RemovedFraction(const std::vector<bool>& mask, const std::vector<bool>& retained,
                       bool value) {
  std::size_t count = 0, removed = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] != value) continue;
    ++count;
    if (!retained[i]) ++removed;
  }
  return count == 0 ? 0.0 : static_cast<double>(removed) / static_cast<double>(count);
}

}  // namespace

std::vector<bool> stratified_holdout(std::span<const int> labels, double fraction, Rng& rng) {
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].push_back(i);
  std::vector<bool> holdout(labels.size(), false);
  for (auto& [label, members] : by_label) {
    std::shuffle(members.begin(), members.end(), rng);
    const auto take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    for (std::size_t j = 0; j < take && j < members.size(); ++j) holdout[members[j]] = true;
  }
  return holdout;
}

EvaluationReport evaluate(const EmbeddedDataset& dataset, const FilterResult& result,
                          const EvaluationOptions& options, Rng& rng, InstanceMasks masks) {
  if (!(options.holdout_fraction > 0.0 && options.holdout_fraction < 1.0)) {
    throw EvaluationError("holdout_fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = dataset.size();
  std::unordered_map<std::string_view, std::size_t> row_of;
  for (std::size_t i = 0; i < n; ++i) row_of.emplace(dataset.ids()[i], i);
  std::vector<bool> retained(n, false);
  for (const auto& id : result.retained_ids) {
    const auto it = row_of.find(id);
    if (it == row_of.end()) throw EvaluationError("retained id '" + id + "' is not in the dataset");
    retained[it->second] = true;
  }

  const std::vector<bool> holdout = stratified_holdout(dataset.labels(), options.holdout_fraction, rng);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> control(n, false);
  for (std::size_t j = 0; j < result.retained_ids.size(); ++j) control[order[j]] = true;

  EvaluationReport report;
  report.original_size = n;
  report.retained_size = result.retained_ids.size();
  report.control_size = result.retained_ids.size();
  report.holdout_fraction = options.holdout_fraction;
  report.holdout_size = static_cast<std::size_t>(std::count(holdout.begin(), holdout.end(), true));

  const std::vector<bool> everyone(n, true);
  const Split full = SplitMembers(dataset, everyone, holdout, "full");
  const Split kept = SplitMembers(dataset, retained, holdout, "retained");
  const Split random = SplitMembers(dataset, control, holdout, "control");

  const auto classes = static_cast<std::size_t>(dataset.num_classes());
  report.linear_accuracy = {LinearAccuracy(full, options.train, classes, "full"),
                            LinearAccuracy(kept, options.train, classes, "retained"),
                            LinearAccuracy(random, options.train, classes, "control")};
  if (dataset.num_classes() <= 2) {
    report.rbf_accuracy = AccuracyTriple{RbfAccuracy(full, options), RbfAccuracy(kept, options),
                                         RbfAccuracy(random, options)};
  }
  if (masks.bias != nullptr) {
    report.bias_removal = RemovedFraction(*masks.bias, retained, true);
    report.clean_removal = RemovedFraction(*masks.bias, retained, false);
  }
  if (masks.flip != nullptr) report.flip_removal = RemovedFraction(*masks.flip, retained, true);
  return report;
}

}  // namespace aflite
