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

// The model family used by the filter: multinomial logistic regression as
// the adversary, and an RBF-kernel SVM as the stronger evaluation probe.

#include <cstddef>
#include <span>
#include <vector>

#include "aflite/core.hpp"
#include "aflite/rng.hpp"

namespace aflite {

struct TrainConfig {
  int max_epochs = 500;
  double learning_rate = 0.1;
  double l2_penalty = 1e-4;
  // Stop once an accepted step changes the loss by less than this.
  double convergence_tolerance = 1e-6;
  // Stddev of the Gaussian initial weights; 0 starts from the origin and
  // makes training independent of the rng.
  double init_stddev = 0.0;

  void validate() const;
};

struct LinearModel {
  Matrix weights;             // num_classes x dim
  std::vector<double> bias;   // num_classes

  std::size_t num_classes() const { return bias.size(); }
  std::size_t dim() const { return weights.cols(); }
};

// Binary kernel classifier:
//   f(x) = sum_j dual_coefficients[j] * exp(-gamma * |x - support_j|^2) + intercept
// and class 1 iff f(x) > 0.
struct RbfModel {
  Matrix support_points;
  std::vector<double> dual_coefficients;
  double intercept = 0.0;
  double gamma = 1.0;

  double decision_value(std::span<const double> x) const;
};

// Loss and gradient of the L2-regularized mean softmax cross-entropy.
// `params` is the weight matrix (row-major, num_classes x dim) followed by
// the bias vector; `gradient` has the same layout. The bias is not
// penalized.
struct LogisticObjective {
  double loss = 0.0;
  std::vector<double> gradient;
};

LogisticObjective logistic_objective(const Matrix& features, std::span<const int> labels,
                                     std::size_t num_classes,
                                     std::span<const double> params, double l2_penalty);

// Full-batch gradient descent with step halving; accepted steps never raise
// the loss. `num_classes` of 0 means one past the largest label.
// Throws DegenerateTraining with fewer than two distinct labels, InputError
// on shape mismatch or non-finite features.
LinearModel train_linear(const Matrix& features, std::span<const int> labels,
                         const TrainConfig& config, Rng& rng,
                         std::size_t num_classes = 0);

// 1 / (dim * variance of all feature values), or 1 when the variance is 0.
double default_rbf_gamma(const Matrix& features);

// C-SVM with hinge loss solved by SMO (second-order working-set selection).
// Labels must be 0/1. A single-class input yields a constant classifier.
RbfModel train_rbf(const Matrix& features, std::span<const int> labels, double gamma,
                   double regularization);

Matrix rbf_gram(const Matrix& features, double gamma);

// Argmax of class scores; ties go to the lowest class index.
int predict(const LinearModel& model, std::span<const double> x);
int predict(const RbfModel& model, std::span<const double> x);

// Mean 0/1 correctness. Throws InputError on an empty or mismatched set.
template <typename Model>
double accuracy(const Model& model, const Matrix& features, std::span<const int> labels);

extern template double accuracy<LinearModel>(const LinearModel&, const Matrix&,
                                             std::span<const int>);
extern template double accuracy<RbfModel>(const RbfModel&, const Matrix&,
                                          std::span<const int>);

}  // namespace aflite
