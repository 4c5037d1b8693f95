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
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "aflite/error.hpp"
#include "test_util.hpp"

namespace aflite {
namespace {

using testing::MakeDataset;

TEST(Matrix, FromRowsAndGather) {
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(2, 1), 6.0);
  const std::vector<std::size_t> pick{2, 0};
  EXPECT_EQ(m.gather(pick), Matrix::from_rows({{5, 6}, {1, 2}}));
  EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), InputError);
}

TEST(EmbeddedDataset, Validates) {
  const Matrix two = Matrix::from_rows({{0.0}, {1.0}});
  EXPECT_THROW(EmbeddedDataset({"a"}, two, {0, 1}), InputError);
  EXPECT_THROW(EmbeddedDataset({"a", "a"}, two, {0, 1}), InputError);
  EXPECT_THROW(EmbeddedDataset({"a", "b"}, two, {0, -1}), InputError);
  EXPECT_THROW(EmbeddedDataset({"a", "b"}, Matrix(2, 0), {0, 1}), InputError);
  const Matrix bad = Matrix::from_rows({{0.0}, {std::numeric_limits<double>::quiet_NaN()}});
  EXPECT_THROW(EmbeddedDataset({"a", "b"}, bad, {0, 1}), InputError);
  const Matrix inf = Matrix::from_rows({{0.0}, {std::numeric_limits<double>::infinity()}});
  EXPECT_THROW(EmbeddedDataset({"a", "b"}, inf, {0, 1}), InputError);
}

TEST(EmbeddedDataset, ClassesAndSubset) {
  const EmbeddedDataset d = MakeDataset({{0}, {1}, {2}, {3}}, {0, 3, 3, 0});
  EXPECT_EQ(d.num_classes(), 4);
  EXPECT_EQ(d.distinct_labels(), 2u);
  const std::vector<std::size_t> idx{3, 1};
  const EmbeddedDataset s = d.subset(idx);
  EXPECT_EQ(s.ids(), (std::vector<std::string>{"i3", "i1"}));
  EXPECT_EQ(s.labels(), (std::vector<int>{0, 3}));
  EXPECT_EQ(s.features()(0, 0), 3.0);
}

TEST(RandomPartition, RejectsDegenerateSizes) {
  Rng rng(1);
  EXPECT_THROW(random_partition(5, 0, rng), InvalidPartition);
  EXPECT_THROW(random_partition(5, 5, rng), InvalidPartition);
  EXPECT_THROW(random_partition(5, 6, rng), InvalidPartition);
  EXPECT_NO_THROW(random_partition(2, 1, rng));
}

TEST(RandomPartition, IsSortedDisjointCover) {
  Rng rng(2);
  for (std::size_t size = 2; size < 30; ++size) {
    for (std::size_t t = 1; t < size; t += 3) {
      const Partition p = random_partition(size, t, rng);
      ASSERT_EQ(p.train_indices.size(), t);
      ASSERT_EQ(p.test_indices.size(), size - t);
      EXPECT_TRUE(std::is_sorted(p.train_indices.begin(), p.train_indices.end()));
      EXPECT_TRUE(std::is_sorted(p.test_indices.begin(), p.test_indices.end()));
      std::vector<std::size_t> all = p.train_indices;
      all.insert(all.end(), p.test_indices.begin(), p.test_indices.end());
      std::sort(all.begin(), all.end());
      std::vector<std::size_t> expect(size);
      std::iota(expect.begin(), expect.end(), 0u);
      EXPECT_EQ(all, expect);
    }
  }
}

TEST(RandomPartition, SubsetsAreUniform) {
  // C(5, 2) = 10 equally likely training sets.
  Rng rng(3);
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) ++counts[random_partition(5, 2, rng).train_indices];
  ASSERT_EQ(counts.size(), 10u);
  for (const auto& [subset, c] : counts) EXPECT_NEAR(c / double(draws), 0.1, 0.01);
}

TEST(RandomPartition, DeterministicForSeed) {
  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) {
    const Partition pa = random_partition(17, 9, a);
    const Partition pb = random_partition(17, 9, b);
    EXPECT_EQ(pa.train_indices, pb.train_indices);
  }
}

TEST(PredictabilityTable, ScoreConvention) {
  PredictabilityTable t(3);
  EXPECT_EQ(t.score(0), 0.0);
  t.record(0, true);
  t.record(0, false);
  t.record(0, true);
  t.record(1, false);
  EXPECT_DOUBLE_EQ(t.score(0), 2.0 / 3.0);
  EXPECT_EQ(t.score(1), 0.0);
  EXPECT_EQ(t.score(2), 0.0);
  EXPECT_EQ(t.total(2), 0u);
  EXPECT_EQ(t.scores(), (std::vector<double>{2.0 / 3.0, 0.0, 0.0}));
}

TEST(PredictabilityTable, MergeIsOrderIndependent) {
  Rng rng(4);
  std::vector<PredictabilityTable> parts(5, PredictabilityTable(8));
  for (auto& p : parts) {
    for (int r = 0; r < 30; ++r) p.record(rng() % 8, rng() % 2 == 0);
  }
  PredictabilityTable forward(8), backward(8);
  for (const auto& p : parts) forward.merge(p);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) backward.merge(*it);
  EXPECT_EQ(forward, backward);
  std::uint32_t total = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_LE(forward.correct(i), forward.total(i));
    total += forward.total(i);
  }
  EXPECT_EQ(total, 150u);
  EXPECT_THROW(forward.merge(PredictabilityTable(7)), ContractViolation);
}

TEST(UpdateTable, RecordsTestPredictionsOnly) {
  PredictabilityTable table(4);
  const Partition p{{0, 2}, {1, 3}};
  const std::vector<int> truth{0, 1, 0, 1};
  const std::vector<Prediction> preds{{3, 0}, {1, 1}};
  update_table(table, p, preds, truth);
  EXPECT_EQ(table.total(0), 0u);
  EXPECT_EQ(table.total(1), 1u);
  EXPECT_EQ(table.correct(1), 1u);
  EXPECT_EQ(table.total(3), 1u);
  EXPECT_EQ(table.correct(3), 0u);
}

TEST(UpdateTable, RejectsBadPredictionsWithoutSideEffects) {
  const Partition p{{0, 2}, {1, 3}};
  const std::vector<int> truth{0, 1, 0, 1};
  const PredictabilityTable empty(4);
  PredictabilityTable table(4);
  // Training index predicted.
  EXPECT_THROW(update_table(table, p, std::vector<Prediction>{{1, 1}, {2, 0}}, truth),
               ContractViolation);
  // Duplicate.
  EXPECT_THROW(update_table(table, p, std::vector<Prediction>{{1, 1}, {1, 1}}, truth),
               ContractViolation);
  // Wrong count.
  EXPECT_THROW(update_table(table, p, std::vector<Prediction>{{1, 1}}, truth),
               ContractViolation);
  // Out of range.
  EXPECT_THROW(update_table(table, p, std::vector<Prediction>{{1, 1}, {9, 1}}, truth),
               ContractViolation);
  // Truth not covering the table.
  EXPECT_THROW(update_table(table, p, std::vector<Prediction>{{1, 1}, {3, 1}},
                            std::vector<int>{0, 1}),
               ContractViolation);
  EXPECT_EQ(table, empty);
}

TEST(DeriveSeed, DistinctPathsGiveDistinctSeeds) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(7, {a, b}));
  }
  EXPECT_EQ(seen.size(), 2500u);
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {1}));
  EXPECT_NE(derive_seed(0, {}), derive_seed(0, {0}));
  static_assert(derive_seed(3, {4, 5}) == derive_seed(3, {4, 5}));
}

TEST(OpenUnit, StaysInsideOpenInterval) {
  Rng rng(0);
  for (int i = 0; i < 100000; ++i) {
    const double u = open_unit(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace aflite
