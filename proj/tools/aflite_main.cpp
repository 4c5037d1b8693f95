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

// Command-line front end:
//
//   aflite --mode synthetic-sweep --out-dir out/
//   aflite --config run.json --embeddings data.csv --tau 0.8
//
// Flags override the matching keys of the JSON config.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aflite/error.hpp"
#include "aflite/experiment.hpp"
#include "json.hpp"

namespace {

void Diagnose(const std::string& module, const std::optional<std::size_t>& phase,
              const std::string& cause) {
  std::cerr << "aflite: error module=" << module
            << " phase=" << (phase ? std::to_string(*phase) : "-") << " cause=" << cause << "\n";
}

std::optional<std::size_t> ThreadsFromEnv() {
  const char* env = std::getenv("AFLITE_THREADS");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoul(env));
  } catch (const std::exception&) {
    throw aflite::ConfigError(std::string("AFLITE_THREADS is not a count: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial filtering of spuriously predictable dataset instances"};

  std::string config_path;
  std::optional<std::string> mode, embeddings, out_dir, strategy;
  std::optional<std::size_t> m, t, k, n, threads, separation_index;
  std::optional<double> tau;
  std::optional<std::uint64_t> seed;
  bool emit_plot_data = false;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "filter | synthetic-sweep | afopt-check | generate");
  app.add_option("--embeddings", embeddings, "Embeddings CSV (id,f0,...,label)");
  app.add_option("--out-dir", out_dir, "Directory for output artifacts");
  app.add_option("--m", m, "Partitions per phase");
  app.add_option("--t", t, "Training set size per partition");
  app.add_option("--k", k, "Slice size");
  app.add_option("--tau", tau, "Early-stopping predictability threshold");
  app.add_option("--n", n, "Minimum retained size (default t + 1)");
  app.add_option("--strategy", strategy, "greedy | greedy_slicing | gumbel_sampling");
  app.add_option("--seed", seed, "Master random seed");
  app.add_option("--threads", threads,
                 "Worker threads for partition jobs (0 = all cores; env AFLITE_THREADS)");
  app.add_option("--separation-index", separation_index, "Separation level for generate mode");
  app.add_flag("--emit-plot-data", emit_plot_data,
               "Also write per-instance (x, y, masks, retained) rows");

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw aflite::ConfigError("cannot parse " + config_path + ": " + e.what());
      }
    }
    if (!doc.is_object()) throw aflite::ConfigError("config root must be an object");
    if (mode) doc["mode"] = *mode;
    if (embeddings) doc["embeddings"] = *embeddings;
    if (out_dir) doc["out_dir"] = *out_dir;
    if (seed) doc["seed"] = *seed;
    if (emit_plot_data) doc["emit_plot_data"] = true;
    if (m) doc["filter"]["m"] = *m;
    if (t) doc["filter"]["t"] = *t;
    if (k) doc["filter"]["k"] = *k;
    if (n) doc["filter"]["n"] = *n;
    if (tau) doc["filter"]["tau"] = *tau;
    if (strategy) doc["filter"]["strategy"] = *strategy;
    if (separation_index) doc["synthetic"]["separation_index"] = *separation_index;

    aflite::ExperimentConfig config = aflite::config_from_json(doc);
    if (threads) {
      config.filter.threads = *threads;
    } else if (const auto env = ThreadsFromEnv()) {
      config.filter.threads = *env;
    } else if (!doc.contains("threads")) {
      config.filter.threads = 0;
    }

    aflite::run_experiment(config, std::cerr);
  } catch (const aflite::ConfigError& e) {
    Diagnose(e.module(), e.phase(), e.what());
    return 2;
  } catch (const aflite::Error& e) {
    Diagnose(e.module(), e.phase(), e.what());
    return 1;
  } catch (const std::exception& e) {
    Diagnose("cli", std::nullopt, e.what());
    return 1;
  }
  return 0;
}
