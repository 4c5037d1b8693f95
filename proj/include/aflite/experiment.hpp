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

// Config-driven pipelines behind the command-line tool.
//
// Modes:
//   filter           load embeddings, filter, evaluate
//   synthetic-sweep  generate + filter + evaluate at every separation level
//   afopt-check      exact optimum vs. greedy slicing on a tiny dataset
//   generate         write one synthetic dataset as an embeddings file
//
// All artifacts are rendered in memory and written only once the whole
// pipeline has succeeded.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aflite/evaluation.hpp"
#include "aflite/filter.hpp"
#include "aflite/synthetic.hpp"
#include "json.hpp"

namespace aflite {

struct ExperimentConfig {
  std::string mode = "filter";
  std::filesystem::path embeddings;
  std::filesystem::path out_dir = "aflite_out";
  std::uint64_t seed = 0;
  // 0 means t + 1.
  FilterConfig filter;
  SyntheticSpec synthetic;
  std::size_t separation_index = 0;  // generate mode
  EvaluationOptions evaluation;
  bool emit_plot_data = false;
};

// Strict: unknown keys and wrong types raise ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct Artifact {
  std::filesystem::path relative_path;
  std::string content;
};

// Runs the selected pipeline and returns the files it would write.
std::vector<Artifact> build_artifacts(const ExperimentConfig& config, std::ostream& log);

// build_artifacts, then writes every artifact under config.out_dir.
void run_experiment(const ExperimentConfig& config, std::ostream& log);

std::string render_retained_ids(const FilterResult& result);
std::string render_history(const FilterResult& result);
nlohmann::json report_to_json(const EvaluationReport& report);

}  // namespace aflite
