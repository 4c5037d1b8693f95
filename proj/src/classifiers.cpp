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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "aflite/error.hpp"
#include "aflite/kernels.hpp"

namespace aflite {
namespace {

void CheckShapes(const Matrix& features, std::span<const int> labels) {
  if (features.rows() != labels.size()) {
    throw InputError("classifiers", "feature rows (" + std::to_string(features.rows()) +
                                        ") and labels (" + std::to_string(labels.size()) +
                                        ") differ");
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw InputError("classifiers", "non-finite feature value");
  }
  for (int y : labels) {
    if (y < 0) throw InputError("classifiers", "negative label");
  }
}

std::size_t DistinctLabels(std::span<const int> labels) {
  return std::set<int>(labels.begin(), labels.end()).size();
}

// Writes loss into *loss and the gradient into `grad`. `scores` is scratch of
// length num_classes.
void EvaluateObjective(const Matrix& x, std::span<const int> y, std::size_t classes,
                       std::span<const double> params, double l2, double* loss,
                       std::span<double> grad, std::span<double> scores) {
  const std::size_t d = x.cols();
  const std::size_t n = x.rows();
  const std::span<const double> weights = params.first(classes * d);
  const std::span<const double> bias = params.subspan(classes * d, classes);
  std::fill(grad.begin(), grad.end(), 0.0);

  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = x.row(r);
    kernels::matvec(weights, classes, d, row, scores);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes; ++c) {
      scores[c] += bias[c];
      peak = std::max(peak, scores[c]);
    }
    double norm = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      scores[c] = std::exp(scores[c] - peak);
      norm += scores[c];
    }
    const auto target = static_cast<std::size_t>(y[r]);
    total += std::log(norm) - std::log(scores[target]);
    for (std::size_t c = 0; c < classes; ++c) {
      const double residual = scores[c] / norm - (c == target ? 1.0 : 0.0);
      kernels::axpy(residual, row, grad.subspan(c * d, d));
      grad[classes * d + c] += residual;
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& g : grad) g *= inv_n;
  double penalty = 0.0;
  for (std::size_t i = 0; i < classes * d; ++i) {
    penalty += weights[i] * weights[i];
    grad[i] += l2 * weights[i];
  }
  *loss = total * inv_n + 0.5 * l2 * penalty;
}

}  // namespace

void TrainConfig::validate() const {
  if (max_epochs < 1) throw InputError("classifiers", "max_epochs must be positive");
  if (!(learning_rate > 0.0)) throw InputError("classifiers", "learning_rate must be positive");
  if (!(l2_penalty >= 0.0)) throw InputError("classifiers", "l2_penalty must be non-negative");
  if (!(convergence_tolerance > 0.0)) {
    throw InputError("classifiers", "convergence_tolerance must be positive");
  }
  if (!(init_stddev >= 0.0)) throw InputError("classifiers", "init_stddev must be non-negative");
}

double RbfModel::decision_value(std::span<const double> x) const {
  if (x.size() != support_points.cols() && !support_points.empty()) {
    throw InputError("classifiers", "dimension mismatch: model expects " +
                                        std::to_string(support_points.cols()) +
                                        " features, got " + std::to_string(x.size()));
  }
  double f = intercept;
  for (std::size_t j = 0; j < support_points.rows(); ++j) {
    f += dual_coefficients[j] *
         std::exp(-gamma * kernels::squared_distance(support_points.row(j), x));
  }
  return f;
}

LogisticObjective logistic_objective(const Matrix& features, std::span<const int> labels,
                                     std::size_t num_classes,
                                     std::span<const double> params, double l2_penalty) {
  CheckShapes(features, labels);
  if (features.empty()) throw InputError("classifiers", "empty training set");
  if (params.size() != num_classes * (features.cols() + 1)) {
    throw InputError("classifiers", "parameter vector has the wrong length");
  }
  for (int y : labels) {
    if (static_cast<std::size_t>(y) >= num_classes) {
      throw InputError("classifiers", "label outside [0, num_classes)");
    }
  }
  LogisticObjective out;
  out.gradient.assign(params.size(), 0.0);
  std::vector<double> scores(num_classes);
  EvaluateObjective(features, labels, num_classes, params, l2_penalty, &out.loss,
                    out.gradient, scores);
  return out;
}

LinearModel train_linear(const Matrix& features, std::span<const int> labels,
                         const TrainConfig& config, Rng& rng, std::size_t num_classes) {
  config.validate();
  CheckShapes(features, labels);
  if (features.empty() || features.cols() == 0) {
    throw InputError("classifiers", "empty training set");
  }
  if (DistinctLabels(labels) < 2) {
    throw DegenerateTraining("classifiers", "training labels contain a single class");
  }
  const std::size_t max_label =
      static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end()));
  if (num_classes == 0) num_classes = max_label + 1;
  if (max_label >= num_classes) {
    throw InputError("classifiers", "label outside [0, num_classes)");
  }

  const std::size_t d = features.cols();
  const std::size_t n_params = num_classes * (d + 1);
  std::vector<double> params(n_params, 0.0);
  if (config.init_stddev > 0.0) {
    std::normal_distribution<double> init(0.0, config.init_stddev);
    for (std::size_t i = 0; i < num_classes * d; ++i) params[i] = init(rng);
  }

  std::vector<double> grad(n_params), trial(n_params), trial_grad(n_params);
  std::vector<double> scores(num_classes);
  double loss = 0.0;
  EvaluateObjective(features, labels, num_classes, params, config.l2_penalty, &loss, grad,
                    scores);

  double step = config.learning_rate;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    for (std::size_t i = 0; i < n_params; ++i) trial[i] = params[i] - step * grad[i];
    double trial_loss = 0.0;
    EvaluateObjective(features, labels, num_classes, trial, config.l2_penalty, &trial_loss,
                      trial_grad, scores);
    if (!(trial_loss <= loss)) {
      step *= 0.5;
      if (step < 1e-12) break;
      continue;
    }
    const double change = loss - trial_loss;
    params.swap(trial);
    grad.swap(trial_grad);
    loss = trial_loss;
    if (change < config.convergence_tolerance) break;
  }

  LinearModel model;
  model.weights = Matrix(num_classes, d);
  std::copy(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(num_classes * d),
            model.weights.data().begin());
  model.bias.assign(params.begin() + static_cast<std::ptrdiff_t>(num_classes * d),
                    params.end());
  return model;
}

double default_rbf_gamma(const Matrix& features) {
  const auto values = features.data();
  if (values.empty() || features.cols() == 0) return 1.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (!(var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(features.cols()) * var);
}

Matrix rbf_gram(const Matrix& features, double gamma) {
  const std::size_t n = features.rows();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    gram(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k =
          std::exp(-gamma * kernels::squared_distance(features.row(i), features.row(j)));
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

RbfModel train_rbf(const Matrix& features, std::span<const int> labels, double gamma,
                   double regularization) {
  CheckShapes(features, labels);
  if (features.empty()) throw InputError("classifiers", "empty training set");
  if (!(gamma > 0.0)) throw InputError("classifiers", "gamma must be positive");
  if (!(regularization > 0.0)) {
    throw InputError("classifiers", "regularization must be positive");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw InputError("classifiers", "RBF model is binary; labels must be 0/1");
  }

  RbfModel model;
  model.gamma = gamma;
  if (DistinctLabels(labels) < 2) {
    model.support_points = Matrix(0, features.cols());
    model.intercept = labels.front() == 1 ? 1.0 : -1.0;
    return model;
  }

  const std::size_t n = features.rows();
  const double c = regularization;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;
  const Matrix gram = rbf_gram(features, gamma);
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * gram(i, j); };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  constexpr double kEps = 1e-3;
  constexpr double kTau = 1e-12;
  const std::size_t max_iter = std::max<std::size_t>(10'000'000, 100 * n);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // Maximal violating i, then j by second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t gmax_idx = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (alpha[t] < c && -grad[t] >= gmax) {
          gmax = -grad[t];
          gmax_idx = static_cast<std::ptrdiff_t>(t);
        }
      } else if (alpha[t] > 0 && grad[t] >= gmax) {
        gmax = grad[t];
        gmax_idx = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (gmax_idx < 0) break;
    const auto i = static_cast<std::size_t>(gmax_idx);

    double gmax2 = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t gmin_idx = -1;
    double obj_diff_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j] > 0) {
        if (alpha[j] > 0) {
          const double grad_diff = gmax + grad[j];
          gmax2 = std::max(gmax2, grad[j]);
          if (grad_diff > 0) {
            double quad = 2.0 - 2.0 * y[i] * q(i, j);
            if (quad <= 0) quad = kTau;
            const double obj_diff = -(grad_diff * grad_diff) / quad;
            if (obj_diff <= obj_diff_min) {
              gmin_idx = static_cast<std::ptrdiff_t>(j);
              obj_diff_min = obj_diff;
            }
          }
        }
      } else if (alpha[j] < c) {
        const double grad_diff = gmax - grad[j];
        gmax2 = std::max(gmax2, -grad[j]);
        if (grad_diff > 0) {
          double quad = 2.0 + 2.0 * y[i] * q(i, j);
          if (quad <= 0) quad = kTau;
          const double obj_diff = -(grad_diff * grad_diff) / quad;
          if (obj_diff <= obj_diff_min) {
            gmin_idx = static_cast<std::ptrdiff_t>(j);
            obj_diff_min = obj_diff;
          }
        }
      }
    }
    if (gmax + gmax2 < kEps || gmin_idx < 0) break;
    const auto j = static_cast<std::size_t>(gmin_idx);

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double qij = q(i, j);
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t k = 0; k < n; ++k) grad[k] += q(i, k) * dai + q(j, k) * daj;
  }

  // Intercept from free vectors, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yg = y[i] * grad[i];
    if (alpha[i] >= c) {
      if (y[i] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[i] <= 0) {
      if (y[i] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2;

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0) support.push_back(i);
  }
  model.support_points = features.gather(support);
  model.dual_coefficients.reserve(support.size());
  for (std::size_t i : support) model.dual_coefficients.push_back(alpha[i] * y[i]);
  model.intercept = -rho;
  return model;
}

int predict(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw InputError("classifiers", "dimension mismatch: model expects " +
                                        std::to_string(model.dim()) + " features, got " +
                                        std::to_string(x.size()));
  }
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    const double s = kernels::dot(model.weights.row(c), x) + model.bias[c];
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(c);
    }
  }
  return best;
}

int predict(const RbfModel& model, std::span<const double> x) {
  return model.decision_value(x) > 0.0 ? 1 : 0;
}

template <typename Model>
double accuracy(const Model& model, const Matrix& features, std::span<const int> labels) {
  if (features.empty()) throw InputError("classifiers", "accuracy over an empty set");
  if (features.rows() != labels.size()) {
    throw InputError("classifiers", "feature rows and labels differ");
  }
  std::size_t correct = 0;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    if (predict(model, features.row(r)) == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.rows());
}

template double accuracy<LinearModel>(const LinearModel&, const Matrix&, std::span<const int>);
template double accuracy<RbfModel>(const RbfModel&, const Matrix&, std::span<const int>);

}  // namespace aflite
