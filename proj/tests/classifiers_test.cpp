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


#include "aflite/classifiers.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "aflite/error.hpp"
#include "test_util.hpp"

namespace aflite {
namespace {

std::vector<double> Flatten(const LinearModel& m) {
  std::vector<double> p(m.weights.data().begin(), m.weights.data().end());
  p.insert(p.end(), m.bias.begin(), m.bias.end());
  return p;
}

// Concentric circles, radius 1 for class 0 and 2 for class 1.
EmbeddedDataset Circles(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const double a = angle(rng);
      const double r = (c == 0 ? 1.0 : 2.0) + jitter(rng);
      rows.push_back({r * std::cos(a), r * std::sin(a)});
      labels.push_back(c);
    }
  }
  return testing::MakeDataset(rows, labels);
}

TEST(LogisticObjective, ZeroParametersGiveLogClasses) {
  const Matrix x = Matrix::from_rows({{1, 2}, {-1, 0}, {3, 3}});
  const std::vector<int> y{0, 2, 1};
  const std::vector<double> params(3 * 3, 0.0);
  const LogisticObjective obj = logistic_objective(x, y, 3, params, 0.5);
  EXPECT_NEAR(obj.loss, std::log(3.0), 1e-15);
  // Bias gradient: mean of (1/3 - onehot) per class.
  EXPECT_NEAR(obj.gradient[6], 1.0 / 3.0 - 1.0 / 3.0, 1e-15);
  // Weight gradient for class 0, feature 0: mean over rows of (1/3 - [y=0]) x0.
  EXPECT_NEAR(obj.gradient[0], ((1.0 / 3 - 1) * 1 + (1.0 / 3) * -1 + (1.0 / 3) * 3) / 3, 1e-15);
}

TEST(LogisticObjective, PenaltyCoversWeightsOnly) {
  const Matrix x = Matrix::from_rows({{1}, {2}});
  const std::vector<int> y{0, 1};
  const std::vector<double> params{0.3, -0.2, 5.0, -5.0};  // W (2x1), then bias
  const double l2 = 0.7;
  const auto with = logistic_objective(x, y, 2, params, l2);
  const auto without = logistic_objective(x, y, 2, params, 0.0);
  EXPECT_NEAR(with.loss - without.loss, 0.5 * l2 * (0.09 + 0.04), 1e-14);
  EXPECT_NEAR(with.gradient[0] - without.gradient[0], l2 * 0.3, 1e-14);
  EXPECT_NEAR(with.gradient[2], without.gradient[2], 1e-15);
  EXPECT_NEAR(with.gradient[3], without.gradient[3], 1e-15);
}

TEST(LogisticObjective, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int instance = 0; instance < 25; ++instance) {
    const std::size_t n = 4 + rng() % 10, d = 1 + rng() % 4, classes = 2 + rng() % 3;
    Matrix x(n, d);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < d; ++c) x(i, c) = normal(rng);
      y[i] = static_cast<int>(rng() % classes);
    }
    std::vector<double> params(classes * (d + 1));
    for (double& p : params) p = normal(rng);
    const double l2 = 0.05 * (instance % 3);
    const auto obj = logistic_objective(x, y, classes, params, l2);
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double h = 1e-6;
      auto plus = params, minus = params;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (logistic_objective(x, y, classes, plus, l2).loss -
                         logistic_objective(x, y, classes, minus, l2).loss) /
                        (2 * h);
      EXPECT_NEAR(obj.gradient[j], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(LogisticObjective, RejectsBadShapes) {
  const Matrix x = Matrix::from_rows({{1}, {2}});
  EXPECT_THROW(logistic_objective(x, std::vector<int>{0}, 2, std::vector<double>(4), 0.0),
               InputError);
  EXPECT_THROW(logistic_objective(x, std::vector<int>{0, 1}, 2, std::vector<double>(3), 0.0),
               InputError);
  EXPECT_THROW(logistic_objective(x, std::vector<int>{0, 2}, 2, std::vector<double>(4), 0.0),
               InputError);
}

TEST(TrainLinear, SeparatesThresholdData) {
  const EmbeddedDataset d = testing::ThresholdDataset(200, 3, 1);
  Rng rng(0);
  const LinearModel m = train_linear(d.features(), d.labels(), TrainConfig{}, rng);
  EXPECT_EQ(m.num_classes(), 2u);
  EXPECT_EQ(m.dim(), 3u);
  EXPECT_GE(accuracy(m, d.features(), d.labels()), 0.98);
}

TEST(TrainLinear, ReducesLoss) {
  const EmbeddedDataset d = testing::NoiseDataset(60, 4, 2);
  Rng rng(0);
  const TrainConfig cfg;
  const LinearModel m = train_linear(d.features(), d.labels(), cfg, rng);
  const double trained =
      logistic_objective(d.features(), d.labels(), 2, Flatten(m), cfg.l2_penalty).loss;
  EXPECT_LT(trained, std::log(2.0));
}

TEST(TrainLinear, MulticlassBlobs) {
  std::mt19937_64 g(5);
  std::normal_distribution<double> normal(0.0, 0.3);
  const double centers[3][2] = {{0, 3}, {3, 0}, {-3, -3}};
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 40; ++i) {
      rows.push_back({centers[c][0] + normal(g), centers[c][1] + normal(g)});
      labels.push_back(c);
    }
  }
  const EmbeddedDataset d = testing::MakeDataset(rows, labels);
  Rng rng(0);
  const LinearModel m = train_linear(d.features(), d.labels(), TrainConfig{}, rng);
  EXPECT_EQ(m.num_classes(), 3u);
  EXPECT_EQ(accuracy(m, d.features(), d.labels()), 1.0);
}

TEST(TrainLinear, RespectsExplicitClassCount) {
  const EmbeddedDataset d = testing::ThresholdDataset(20, 2, 3);
  Rng rng(0);
  const LinearModel m = train_linear(d.features(), d.labels(), TrainConfig{}, rng, 4);
  EXPECT_EQ(m.num_classes(), 4u);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_LT(predict(m, d.features().row(i)), 2);
  EXPECT_THROW(train_linear(d.features(), d.labels(), TrainConfig{}, rng, 1), InputError);
}

TEST(TrainLinear, SingleClassIsDegenerate) {
  const Matrix x = Matrix::from_rows({{1}, {2}, {3}});
  Rng rng(0);
  EXPECT_THROW(train_linear(x, std::vector<int>{1, 1, 1}, TrainConfig{}, rng),
               DegenerateTraining);
}

TEST(TrainLinear, InvalidConfigRejected) {
  const EmbeddedDataset d = testing::ThresholdDataset(10, 1, 3);
  Rng rng(0);
  TrainConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(train_linear(d.features(), d.labels(), c, rng), InputError);
  c = {};
  c.l2_penalty = -1;
  EXPECT_THROW(train_linear(d.features(), d.labels(), c, rng), InputError);
  c = {};
  c.max_epochs = 0;
  EXPECT_THROW(train_linear(d.features(), d.labels(), c, rng), InputError);
}

TEST(TrainLinear, StrongerPenaltyShrinksWeights) {
  const EmbeddedDataset d = testing::ThresholdDataset(80, 3, 4);
  double previous = std::numeric_limits<double>::infinity();
  for (double l2 : {0.0, 0.01, 0.1, 1.0}) {
    TrainConfig c;
    c.l2_penalty = l2;
    c.max_epochs = 3000;
    Rng rng(0);
    const LinearModel m = train_linear(d.features(), d.labels(), c, rng);
    double norm = 0.0;
    for (double w : m.weights.data()) norm += w * w;
    EXPECT_LT(norm, previous) << l2;
    previous = norm;
  }
}

TEST(TrainLinear, DeterministicGivenSeed) {
  const EmbeddedDataset d = testing::NoiseDataset(50, 3, 6);
  TrainConfig c;
  c.init_stddev = 0.1;
  Rng a(9), b(9);
  const LinearModel ma = train_linear(d.features(), d.labels(), c, a);
  const LinearModel mb = train_linear(d.features(), d.labels(), c, b);
  EXPECT_EQ(Flatten(ma), Flatten(mb));
}

TEST(Predict, TiesGoToLowestClassAndDimensionChecked) {
  LinearModel m;
  m.weights = Matrix(3, 2);
  m.bias = {0.0, 0.0, 0.0};
  const std::vector<double> x{1.0, -1.0};
  EXPECT_EQ(predict(m, x), 0);
  m.bias = {0.0, 1.0, 1.0};
  EXPECT_EQ(predict(m, x), 1);
  EXPECT_THROW(predict(m, std::vector<double>{1.0}), InputError);
}

TEST(Accuracy, EmptySetRejected) {
  LinearModel m;
  m.weights = Matrix(2, 1);
  m.bias = {0.0, 0.0};
  EXPECT_THROW(accuracy(m, Matrix(0, 1), std::span<const int>{}), InputError);
}

TEST(Rbf, GramIsSymmetricPositiveSemidefinite) {
  const EmbeddedDataset d = testing::NoiseDataset(40, 3, 7);
  const Matrix g = rbf_gram(d.features(), 0.7);
  Eigen::MatrixXd e(40, 40);
  for (int i = 0; i < 40; ++i) {
    EXPECT_EQ(g(i, i), 1.0);
    for (int j = 0; j < 40; ++j) {
      EXPECT_EQ(g(i, j), g(j, i));
      EXPECT_GT(g(i, j), 0.0);
      e(i, j) = g(i, j);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
  EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-10);
}

TEST(Rbf, DefaultGammaIsInverseDimTimesVariance) {
  const Matrix x = Matrix::from_rows({{0, 2}, {2, 0}});
  // Values {0, 2, 2, 0}: mean 1, variance 1, two columns.
  EXPECT_DOUBLE_EQ(default_rbf_gamma(x), 0.5);
  EXPECT_EQ(default_rbf_gamma(Matrix::from_rows({{3, 3}})), 1.0);
}

TEST(Rbf, SolvesXor) {
  const Matrix x = Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<int> y{0, 0, 1, 1};
  const RbfModel rbf = train_rbf(x, y, 2.0, 10.0);
  EXPECT_EQ(accuracy(rbf, x, y), 1.0);
  Rng rng(0);
  const LinearModel lin = train_linear(x, y, TrainConfig{}, rng);
  EXPECT_LE(accuracy(lin, x, y), 0.75);
}

TEST(Rbf, SolvesConcentricCircles) {
  const EmbeddedDataset train = Circles(150, 1);
  const EmbeddedDataset test = Circles(100, 2);
  const RbfModel rbf = train_rbf(train.features(), train.labels(),
                                 default_rbf_gamma(train.features()), 1.0);
  EXPECT_GE(accuracy(rbf, test.features(), test.labels()), 0.95);
  Rng rng(0);
  const LinearModel lin = train_linear(train.features(), train.labels(), TrainConfig{}, rng);
  EXPECT_LE(accuracy(lin, test.features(), test.labels()), 0.7);
}

TEST(Rbf, DualSolutionIsFeasible) {
  const EmbeddedDataset d = testing::NoiseDataset(60, 2, 8);
  const double c = 0.8;
  const RbfModel rbf = train_rbf(d.features(), d.labels(), 1.0, c);
  double sum = 0.0;
  for (double a : rbf.dual_coefficients) {
    EXPECT_GT(std::abs(a), 0.0);
    EXPECT_LE(std::abs(a), c + 1e-12);
    sum += a;
  }
  EXPECT_NEAR(sum, 0.0, 1e-9);
}

TEST(Rbf, SingleClassGivesConstantModel) {
  const Matrix x = Matrix::from_rows({{0}, {1}});
  const RbfModel ones = train_rbf(x, std::vector<int>{1, 1}, 1.0, 1.0);
  EXPECT_EQ(predict(ones, std::vector<double>{5.0}), 1);
  const RbfModel zeros = train_rbf(x, std::vector<int>{0, 0}, 1.0, 1.0);
  EXPECT_EQ(predict(zeros, std::vector<double>{5.0}), 0);
}

TEST(Rbf, RejectsBadInput) {
  const Matrix x = Matrix::from_rows({{0}, {1}});
  EXPECT_THROW(train_rbf(x, std::vector<int>{0, 2}, 1.0, 1.0), InputError);
  EXPECT_THROW(train_rbf(x, std::vector<int>{0, 1}, 0.0, 1.0), InputError);
  EXPECT_THROW(train_rbf(x, std::vector<int>{0, 1}, 1.0, 0.0), InputError);
  const RbfModel m = train_rbf(x, std::vector<int>{0, 1}, 1.0, 1.0);
  EXPECT_THROW(m.decision_value(std::vector<double>{1.0, 2.0}), InputError);
}

}  // namespace
}  // namespace aflite
