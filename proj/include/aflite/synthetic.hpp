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

// Concentric-circles binary task with injected class-correlated features.
//
// Class 0 lies on a circle of radius inner_radius, class 1 on a circle of
// radius inner_radius + gap, both with Gaussian radial jitter. A fixed
// fraction of each class gets `bias_dims` extra columns drawn from a
// class-specific Gaussian; everyone else gets zero-mean noise in those
// columns. At the largest gap some biased instances have their label
// flipped, and their bias columns follow the flipped label.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aflite/core.hpp"

namespace aflite {

struct SyntheticSpec {
  std::size_t n_points = 500;  // per class
  std::vector<double> separations{1.5, 1.0, 0.6, 0.3};
  double inner_radius = 1.0;
  double radial_jitter = 0.1;
  double bias_fraction = 0.75;
  std::size_t bias_dims = 2;
  std::vector<double> bias_mean_class0{-1.0, -1.0};
  std::vector<double> bias_mean_class1{1.0, 1.0};
  double bias_stddev = 0.5;
  double noise_stddev = 1.0;
  double flip_fraction = 0.1;  // of biased instances, largest gap only
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t largest_separation_index() const;
};

struct SyntheticDataset {
  EmbeddedDataset dataset;  // columns: x, y, bias_0 .. bias_{dims-1}
  std::vector<bool> bias_mask;
  std::vector<bool> flip_mask;
};

SyntheticDataset generate(const SyntheticSpec& spec, std::size_t separation_index);

}  // namespace aflite
