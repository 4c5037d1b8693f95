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

#include "aflite/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "aflite/error.hpp"
#include "aflite/rng.hpp"

namespace aflite {
namespace {

std::size_t RoundCount(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
}

// First `count` entries of a uniformly shuffled copy of `pool`.
std::vector<std::size_t> Choose(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  return pool;
}

}  // namespace

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& why) { throw InputError("synthetic", why); };
  if (n_points < 1) fail("n_points must be positive");
  if (separations.empty()) fail("at least one separation is required");
  for (double gap : separations) {
    if (!(gap > 0.0)) fail("separation gaps must be positive (annuli would overlap)");
  }
  if (!(inner_radius > 0.0)) fail("inner_radius must be positive");
  if (!(radial_jitter >= 0.0)) fail("radial_jitter must be non-negative");
  if (!(bias_fraction >= 0.0 && bias_fraction <= 1.0)) fail("bias_fraction must lie in [0, 1]");
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) fail("flip_fraction must lie in [0, 1]");
  if (bias_dims < 1) fail("bias_dims must be at least 1");
  if (bias_mean_class0.size() != bias_dims || bias_mean_class1.size() != bias_dims) {
    fail("bias means must have bias_dims entries");
  }
  if (bias_mean_class0 == bias_mean_class1) fail("bias means must differ between classes");
  if (!(bias_stddev > 0.0)) fail("bias_stddev must be positive");
  if (!(noise_stddev > 0.0)) fail("noise_stddev must be positive");
}

std::size_t SyntheticSpec::largest_separation_index() const {
  return static_cast<std::size_t>(
      std::max_element(separations.begin(), separations.end()) - separations.begin());
}

SyntheticDataset generate(const SyntheticSpec& spec, std::size_t separation_index) {
  spec.validate();
  if (separation_index >= spec.separations.size()) {
    throw InputError("synthetic", "separation index " + std::to_string(separation_index) +
                                      " out of range");
  }
  Rng rng(derive_seed(spec.seed, {separation_index}));
  const std::size_t total = 2 * spec.n_points;
  const double gap = spec.separations[separation_index];

  std::vector<int> labels(total);
  std::vector<double> radius_x(total), radius_y(total);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, spec.radial_jitter);
  for (std::size_t i = 0; i < total; ++i) {
    const int label = i < spec.n_points ? 0 : 1;
    const double r = spec.inner_radius + (label == 1 ? gap : 0.0) +
                     (spec.radial_jitter > 0.0 ? jitter(rng) : 0.0);
    const double theta = angle(rng);
    labels[i] = label;
    radius_x[i] = r * std::cos(theta);
    radius_y[i] = r * std::sin(theta);
  }

  std::vector<bool> bias_mask(total, false), flip_mask(total, false);
  const std::size_t per_class = RoundCount(spec.bias_fraction, spec.n_points);
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> members(spec.n_points);
    std::iota(members.begin(), members.end(), static_cast<std::size_t>(c) * spec.n_points);
    for (std::size_t i : Choose(std::move(members), per_class, rng)) bias_mask[i] = true;
  }

  if (separation_index == spec.largest_separation_index()) {
    std::vector<std::size_t> biased;
    for (std::size_t i = 0; i < total; ++i) {
      if (bias_mask[i]) biased.push_back(i);
    }
    const std::size_t flips = RoundCount(spec.flip_fraction, biased.size());
    for (std::size_t i : Choose(std::move(biased), flips, rng)) {
      flip_mask[i] = true;
      labels[i] = 1 - labels[i];
    }
  }

  const std::size_t dim = 2 + spec.bias_dims;
  Matrix features(total, dim);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < total; ++i) {
    auto row = features.row(i);
    row[0] = radius_x[i];
    row[1] = radius_y[i];
    const auto& mean = labels[i] == 0 ? spec.bias_mean_class0 : spec.bias_mean_class1;
    for (std::size_t b = 0; b < spec.bias_dims; ++b) {
      row[2 + b] = bias_mask[i] ? mean[b] + spec.bias_stddev * unit(rng)
                                : spec.noise_stddev * unit(rng);
    }
  }

  // Shuffle rows so index order carries no class information.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::string> ids(total);
  std::vector<int> shuffled_labels(total);
  SyntheticDataset out;
  out.bias_mask.resize(total);
  out.flip_mask.resize(total);
  for (std::size_t r = 0; r < total; ++r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%zu_%05zu", separation_index, r);
    ids[r] = buf;
    shuffled_labels[r] = labels[order[r]];
    out.bias_mask[r] = bias_mask[order[r]];
    out.flip_mask[r] = flip_mask[order[r]];
  }
  out.dataset = EmbeddedDataset(std::move(ids), features.gather(order), std::move(shuffled_labels));
  return out;
}

}  // namespace aflite
