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

#include "aflite/filter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "aflite/error.hpp"

namespace aflite {
namespace {

// Stream tag for the per-phase selection rng, disjoint from partition indices.
constexpr std::uint64_t kSelectionStream = ~std::uint64_t{0};

std::size_t WorkerCount(std::size_t requested, std::size_t jobs) {
  std::size_t workers = requested;
  if (workers == 0) workers = std::max<unsigned>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(workers, jobs));
}

// Orders working indices by descending score, lower index first on ties.
void SortByScore(std::vector<std::size_t>& indices, std::span<const double> scores) {
  std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
}

void ScorePartition(const DatasetView& working, const FilterConfig& config,
                    std::span<const int> truth, std::uint64_t seed,
                    PredictabilityTable& table) {
  Rng rng(seed);
  const auto classes = static_cast<std::size_t>(working.data->num_classes());
  for (std::size_t attempt = 0;; ++attempt) {
    const Partition partition = random_partition(working.size(), config.t, rng);

    std::vector<std::size_t> rows(partition.train_indices.size());
    std::vector<int> labels(partition.train_indices.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      rows[r] = working.indices[partition.train_indices[r]];
      labels[r] = truth[partition.train_indices[r]];
    }
    const Matrix train_x = working.data->features().gather(rows);

    LinearModel model;
    try {
      model = train_linear(train_x, labels, config.train, rng, classes);
    } catch (const DegenerateTraining&) {
      if (attempt < config.max_partition_retries) continue;
      throw DegenerateTraining(
          "aflite", "partition training split stayed single-class after " +
                        std::to_string(config.max_partition_retries) + " resamples");
    }

    std::vector<Prediction> predictions;
    predictions.reserve(partition.test_indices.size());
    for (std::size_t j : partition.test_indices) {
      predictions.push_back({j, predict(model, working.row(j))});
    }
    update_table(table, partition, predictions, truth);
    return;
  }
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kGreedy:
      return "greedy";
    case Strategy::kGreedySlicing:
      return "greedy_slicing";
    case Strategy::kGumbelSampling:
      return "gumbel_sampling";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "greedy_slicing") return Strategy::kGreedySlicing;
  if (name == "gumbel_sampling") return Strategy::kGumbelSampling;
  throw InputError("aflite", "unknown strategy '" + std::string(name) + "'");
}

void FilterConfig::validate(std::size_t dataset_size) const {
  auto fail = [](const std::string& why) { throw InputError("aflite", why); };
  if (t < 1) fail("t must be at least 1");
  if (t >= n) fail("t (" + std::to_string(t) + ") must be smaller than n (" + std::to_string(n) + ")");
  if (n > dataset_size) {
    fail("n (" + std::to_string(n) + ") exceeds the dataset size (" +
         std::to_string(dataset_size) + ")");
  }
  if (m < 1) fail("m must be at least 1");
  if (k < 1) fail("k must be at least 1");
  if (!(tau >= 0.0) || !std::isfinite(tau)) fail("tau must be a finite non-negative number");
  train.validate();
}

PredictabilityTable score_phase(const DatasetView& working, const FilterConfig& config,
                                std::uint64_t phase_seed) {
  if (working.data == nullptr) throw InputError("aflite", "null dataset view");
  if (working.size() <= config.t) {
    throw InvalidPartition("aflite", "working set of " + std::to_string(working.size()) +
                                         " is not larger than t=" + std::to_string(config.t));
  }
  std::vector<int> truth(working.size());
  for (std::size_t j = 0; j < working.size(); ++j) truth[j] = working.label(j);

  const std::size_t workers = WorkerCount(config.threads, config.m);
  std::vector<PredictabilityTable> tables(workers, PredictabilityTable(working.size()));
  std::vector<std::exception_ptr> failures(config.m);
  std::atomic<std::size_t> next{0};

  auto job = [&](std::size_t worker) {
    for (std::size_t j = next.fetch_add(1); j < config.m; j = next.fetch_add(1)) {
      try {
        ScorePartition(working, config, truth, derive_seed(phase_seed, {j}), tables[worker]);
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(job, w);
  }

  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  PredictabilityTable merged(working.size());
  for (const auto& t : tables) merged.merge(t);
  return merged;
}

std::vector<std::size_t> gumbel_topk(std::span<const double> scores, std::size_t k,
                                     Rng& rng) {
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    // Draw for every slot so the stream does not depend on which are excluded.
    const double gumbel = -std::log(-std::log(open_unit(rng)));
    if (scores[i] > 0.0) keyed.emplace_back(std::log(scores[i]) + gumbel, i);
  }
  const std::size_t take = std::min(k, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take),
                    keyed.end(), [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::vector<std::size_t> out(take);
  for (std::size_t i = 0; i < take; ++i) out[i] = keyed[i].second;
  return out;
}

std::vector<std::size_t> select_removals(std::span<const double> scores,
                                         const FilterConfig& config, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= config.tau) eligible.push_back(i);
  }
  if (eligible.empty()) return {};

  const std::size_t k = config.slice_size();
  if (config.strategy == Strategy::kGumbelSampling) {
    std::vector<double> eligible_scores(eligible.size());
    for (std::size_t e = 0; e < eligible.size(); ++e) eligible_scores[e] = scores[eligible[e]];
    std::vector<std::size_t> picked;
    for (std::size_t e : gumbel_topk(eligible_scores, k, rng)) picked.push_back(eligible[e]);
    SortByScore(picked, scores);
    return picked;
  }

  SortByScore(eligible, scores);
  if (eligible.size() > k) eligible.resize(k);
  return eligible;
}

FilterResult run_filter(const EmbeddedDataset& dataset, const FilterConfig& config) {
  config.validate(dataset.size());

  std::vector<std::size_t> working(dataset.size());
  std::iota(working.begin(), working.end(), std::size_t{0});
  FilterResult result;

  for (std::size_t phase = 0; working.size() > config.n; ++phase) {
    const DatasetView view{&dataset, working};
    PredictabilityTable table;
    try {
      table = score_phase(view, config, derive_seed(config.seed, {phase}));
    } catch (Error& e) {
      e.set_phase(phase);
      throw;
    }
    const std::vector<double> scores = table.scores();

    Rng selection_rng(derive_seed(config.seed, {phase, kSelectionStream}));
    std::vector<std::size_t> selection = select_removals(scores, config, selection_rng);

    const std::size_t room = working.size() - config.n;
    if (config.strategy == Strategy::kGumbelSampling) {
      if (selection.empty()) break;
    } else if (selection.size() < std::min(config.slice_size(), room)) {
      break;
    }
    // select_removals returns highest scores first.
    if (selection.size() > room) selection.resize(room);

    PhaseRecord record;
    record.phase_index = phase;
    record.mean_score =
        std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    record.max_score = *std::max_element(scores.begin(), scores.end());
    std::vector<char> drop(working.size(), 0);
    for (std::size_t j : selection) {
      drop[j] = 1;
      record.removed_ids.push_back(dataset.ids()[working[j]]);
      record.removed_scores.push_back(scores[j]);
    }
    std::vector<std::size_t> survivors;
    survivors.reserve(working.size() - selection.size());
    for (std::size_t j = 0; j < working.size(); ++j) {
      if (!drop[j]) survivors.push_back(working[j]);
    }
    working.swap(survivors);
    record.remaining_count = working.size();
    result.phases.push_back(std::move(record));
  }

  result.retained_ids.reserve(working.size());
  for (std::size_t i : working) result.retained_ids.push_back(dataset.ids()[i]);
  return result;
}

}  // namespace aflite
