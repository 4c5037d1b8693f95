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

#include "aflite/afopt.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <numeric>
#include <set>
#include <string>

#include "aflite/error.hpp"

namespace aflite {

SplitTrainer linear_split_trainer(TrainConfig config, std::uint64_t seed,
                                  std::size_t num_classes, DegenerateSplit policy) {
  return [config, seed, num_classes, policy](
             const Matrix& train_x, std::span<const int> train_y,
             const Matrix& test_x) -> std::optional<std::vector<int>> {
    std::vector<int> out(test_x.rows());
    if (std::set<int>(train_y.begin(), train_y.end()).size() < 2) {
      if (policy == DegenerateSplit::kExclude) return std::nullopt;
      std::fill(out.begin(), out.end(), train_y.empty() ? 0 : train_y.front());
      return out;
    }
    Rng rng(seed);
    const LinearModel model = train_linear(train_x, train_y, config, rng, num_classes);
    for (std::size_t r = 0; r < test_x.rows(); ++r) out[r] = predict(model, test_x.row(r));
    return out;
  };
}

unsigned long long binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const unsigned __int128 next =
        static_cast<unsigned __int128>(result) * (n - k + i) / i;
    if (next > ULLONG_MAX) return ULLONG_MAX;
    result = static_cast<unsigned long long>(next);
  }
  return result;
}

ExactBiasReport exact_representation_bias(const DatasetView& subset, std::size_t t,
                                          const SplitTrainer& trainer,
                                          unsigned long long budget) {
  const std::size_t s = subset.size();
  if (t < 1 || t >= s) {
    throw InvalidPartition("afopt", "train size " + std::to_string(t) +
                                        " must lie in [1, " + std::to_string(s) + ")");
  }
  const unsigned long long splits = binomial(s, t);
  if (splits > budget) {
    throw BudgetExceeded("afopt",
                         "exact enumeration needs " + std::to_string(splits) +
                             " splits, budget is " + std::to_string(budget),
                         splits);
  }

  ExactBiasReport report;
  report.subset.assign(subset.indices.begin(), subset.indices.end());
  std::vector<unsigned long long> correct(s, 0), appearances(s, 0);
  double accuracy_sum = 0.0;

  // mask[i] == 1 marks a training position; prev_permutation walks every
  // size-t mask exactly once.
  std::vector<char> mask(s, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(t), 1);
  std::vector<std::size_t> train_rows, test_pos;
  std::vector<int> train_y;
  do {
    train_rows.clear();
    train_y.clear();
    test_pos.clear();
    for (std::size_t i = 0; i < s; ++i) {
      if (mask[i]) {
        train_rows.push_back(subset.indices[i]);
        train_y.push_back(subset.label(i));
      } else {
        test_pos.push_back(i);
      }
    }
    std::vector<std::size_t> test_rows(test_pos.size());
    for (std::size_t j = 0; j < test_pos.size(); ++j) test_rows[j] = subset.indices[test_pos[j]];
    const Matrix& features = subset.data->features();
    ++report.evaluated_splits;
    const std::optional<std::vector<int>> predicted =
        trainer(features.gather(train_rows), train_y, features.gather(test_rows));
    if (!predicted) {
      ++report.excluded_splits;
      continue;
    }

    std::size_t split_correct = 0;
    for (std::size_t j = 0; j < test_pos.size(); ++j) {
      const std::size_t i = test_pos[j];
      ++appearances[i];
      if (predicted->at(j) == subset.label(i)) {
        ++correct[i];
        ++split_correct;
      }
    }
    accuracy_sum += static_cast<double>(split_correct) / static_cast<double>(test_pos.size());
  } while (std::prev_permutation(mask.begin(), mask.end()));

  const unsigned long long kept = report.evaluated_splits - report.excluded_splits;
  if (kept == 0) {
    throw DegenerateTraining("afopt", "every train/test split of the subset was dropped");
  }
  const double n_splits = static_cast<double>(kept);
  const double test_size = static_cast<double>(s - t);
  const double inv_size = 1.0 / static_cast<double>(s);
  report.bias_direct = accuracy_sum / n_splits;
  report.conditional_accuracy.assign(s, 0.0);
  report.p.assign(s, 0.0);
  report.p_tilde.assign(s, 0.0);
  report.marginal_inclusion.assign(s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    if (appearances[i] == 0) continue;
    const double q = static_cast<double>(appearances[i]) / n_splits;
    report.marginal_inclusion[i] = q;
    report.conditional_accuracy[i] =
        static_cast<double>(correct[i]) / static_cast<double>(appearances[i]);
    report.p[i] = q * report.conditional_accuracy[i] / test_size;
    report.p_tilde[i] = report.conditional_accuracy[i] * inv_size;
    report.bias_factored += report.p[i];
    report.bias_uniform_factored += report.p_tilde[i];
  }
  report.bias = report.bias_direct;
  return report;
}

AfoptResult afopt_search(const EmbeddedDataset& dataset, std::size_t n, std::size_t t,
                         const SplitTrainer& trainer, unsigned long long budget) {
  const std::size_t size = dataset.size();
  if (size > kMaxAfoptDatasetSize) {
    throw BudgetExceeded("afopt",
                         "exhaustive subset search is capped at " +
                             std::to_string(kMaxAfoptDatasetSize) + " instances, got " +
                             std::to_string(size),
                         1ULL << size);
  }
  if (t >= n) throw InputError("afopt", "t must be smaller than n");
  if (n > size) throw InputError("afopt", "n exceeds the dataset size");

  AfoptResult result;
  bool have_best = false;
  constexpr double kTieTolerance = 1e-12;
  std::vector<std::size_t> members;
  for (std::uint32_t bits = 1; bits < (1U << size); ++bits) {
    if (static_cast<std::size_t>(std::popcount(bits)) < n) continue;
    members.clear();
    for (std::size_t i = 0; i < size; ++i) {
      if (bits & (1U << i)) members.push_back(i);
    }
    ExactBiasReport report;
    try {
      report = exact_representation_bias(DatasetView{&dataset, members}, t, trainer, budget);
    } catch (const DegenerateTraining&) {
      ++result.subsets_skipped;
      continue;
    }
    ++result.subsets_evaluated;
    const bool better =
        !have_best || report.bias < result.best.bias - kTieTolerance ||
        (report.bias <= result.best.bias + kTieTolerance && report.subset < result.best.subset);
    if (better) {
      result.best = std::move(report);
      have_best = true;
    }
  }
  if (!have_best) throw DegenerateTraining("afopt", "no subset admits a non-degenerate split");
  return result;
}

}  // namespace aflite
