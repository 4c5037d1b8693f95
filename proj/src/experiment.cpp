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

#include "aflite/experiment.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "aflite/afopt.hpp"
#include "aflite/error.hpp"
#include "aflite/io.hpp"

namespace aflite {
namespace {

using nlohmann::json;

// Evaluation draws from its own stream so it never perturbs filtering.
constexpr std::uint64_t kEvaluationStream = 0xE7A1;

void CheckKeys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
void Read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + where + "." + key + "': " + e.what());
  }
}

json TrainToJson(const TrainConfig& c) {
  return {{"max_epochs", c.max_epochs},
          {"learning_rate", c.learning_rate},
          {"l2_penalty", c.l2_penalty},
          {"convergence_tolerance", c.convergence_tolerance},
          {"init_stddev", c.init_stddev}};
}

std::string PlotData(const SyntheticDataset* synthetic, const EmbeddedDataset& dataset,
                     const FilterResult& result) {
  std::set<std::string_view> kept(result.retained_ids.begin(), result.retained_ids.end());
  std::ostringstream out;
  out << "id,x,y,bias_mask,flip_mask,retained\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = dataset.features().row(i);
    out << dataset.ids()[i] << ',' << format_double(row[0]) << ','
        << format_double(row.size() > 1 ? row[1] : 0.0) << ','
        << (synthetic && synthetic->bias_mask[i] ? 1 : 0) << ','
        << (synthetic && synthetic->flip_mask[i] ? 1 : 0) << ','
        << (kept.count(dataset.ids()[i]) ? 1 : 0) << '\n';
  }
  return out.str();
}

FilterConfig ResolvedFilter(const ExperimentConfig& config) {
  FilterConfig f = config.filter;
  f.seed = config.seed;
  if (f.n == 0) f.n = f.t + 1;
  return f;
}

json RunRecord(const ExperimentConfig& config, const FilterConfig& filter) {
  return {{"seed", config.seed},
          {"filter",
           {{"n", filter.n},
            {"m", filter.m},
            {"t", filter.t},
            {"k", filter.k},
            {"tau", filter.tau},
            {"strategy", std::string(to_string(filter.strategy))}}},
          {"train", TrainToJson(filter.train)},
          {"evaluation_stream", kEvaluationStream}};
}

struct Pipeline {
  FilterResult result;
  EvaluationReport report;
};

Pipeline FilterAndEvaluate(const EmbeddedDataset& dataset, const FilterConfig& filter,
                           const ExperimentConfig& config, InstanceMasks masks) {
  Pipeline p;
  p.result = run_filter(dataset, filter);
  Rng eval_rng(derive_seed(config.seed, {kEvaluationStream}));
  p.report = evaluate(dataset, p.result, config.evaluation, eval_rng, masks);
  return p;
}

void AppendRunArtifacts(std::vector<Artifact>& out, const std::filesystem::path& dir,
                        const Pipeline& p, json report, const ExperimentConfig& config,
                        const EmbeddedDataset& dataset, const SyntheticDataset* synthetic) {
  out.push_back({dir / "retained_ids.txt", render_retained_ids(p.result)});
  out.push_back({dir / "history.csv", render_history(p.result)});
  out.push_back({dir / "report.json", report.dump(2) + "\n"});
  if (config.emit_plot_data) {
    out.push_back({dir / "plot_data.csv", PlotData(synthetic, dataset, p.result)});
  }
}

std::string OptionalCell(const std::optional<double>& v) {
  return v ? format_double(*v) : "";
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  CheckKeys(doc, "config",
            {"mode", "embeddings", "out_dir", "seed", "threads", "emit_plot_data", "filter",
             "train", "synthetic", "evaluation"});
  ExperimentConfig c;
  Read(doc, "mode", c.mode, "config");
  std::string path;
  Read(doc, "embeddings", path, "config");
  c.embeddings = path;
  if (doc.contains("out_dir")) {
    Read(doc, "out_dir", path, "config");
    c.out_dir = path;
  }
  Read(doc, "seed", c.seed, "config");
  Read(doc, "threads", c.filter.threads, "config");
  Read(doc, "emit_plot_data", c.emit_plot_data, "config");

  if (doc.contains("filter")) {
    const json& f = doc.at("filter");
    CheckKeys(f, "filter", {"n", "m", "t", "k", "tau", "strategy", "max_partition_retries"});
    Read(f, "n", c.filter.n, "filter");
    Read(f, "m", c.filter.m, "filter");
    Read(f, "t", c.filter.t, "filter");
    Read(f, "k", c.filter.k, "filter");
    Read(f, "tau", c.filter.tau, "filter");
    Read(f, "max_partition_retries", c.filter.max_partition_retries, "filter");
    if (f.contains("strategy")) {
      std::string s;
      Read(f, "strategy", s, "filter");
      try {
        c.filter.strategy = parse_strategy(s);
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (doc.contains("train")) {
    const json& t = doc.at("train");
    CheckKeys(t, "train", {"max_epochs", "learning_rate", "l2_penalty", "convergence_tolerance",
                           "init_stddev"});
    Read(t, "max_epochs", c.filter.train.max_epochs, "train");
    Read(t, "learning_rate", c.filter.train.learning_rate, "train");
    Read(t, "l2_penalty", c.filter.train.l2_penalty, "train");
    Read(t, "convergence_tolerance", c.filter.train.convergence_tolerance, "train");
    Read(t, "init_stddev", c.filter.train.init_stddev, "train");
  }
  c.evaluation.train = c.filter.train;
  if (doc.contains("synthetic")) {
    const json& s = doc.at("synthetic");
    CheckKeys(s, "synthetic",
              {"n_points", "separations", "inner_radius", "radial_jitter", "bias_fraction",
               "bias_dims", "bias_means", "bias_stddev", "noise_stddev", "flip_fraction",
               "separation_index"});
    SyntheticSpec& spec = c.synthetic;
    Read(s, "n_points", spec.n_points, "synthetic");
    Read(s, "separations", spec.separations, "synthetic");
    Read(s, "inner_radius", spec.inner_radius, "synthetic");
    Read(s, "radial_jitter", spec.radial_jitter, "synthetic");
    Read(s, "bias_fraction", spec.bias_fraction, "synthetic");
    Read(s, "bias_dims", spec.bias_dims, "synthetic");
    Read(s, "bias_stddev", spec.bias_stddev, "synthetic");
    Read(s, "noise_stddev", spec.noise_stddev, "synthetic");
    Read(s, "flip_fraction", spec.flip_fraction, "synthetic");
    Read(s, "separation_index", c.separation_index, "synthetic");
    if (s.contains("bias_means")) {
      std::vector<std::vector<double>> means;
      Read(s, "bias_means", means, "synthetic");
      if (means.size() != 2) throw ConfigError("synthetic.bias_means needs two vectors");
      spec.bias_mean_class0 = means[0];
      spec.bias_mean_class1 = means[1];
    }
  }
  if (doc.contains("evaluation")) {
    const json& e = doc.at("evaluation");
    CheckKeys(e, "evaluation", {"holdout_fraction", "rbf_regularization", "rbf_gamma"});
    Read(e, "holdout_fraction", c.evaluation.holdout_fraction, "evaluation");
    Read(e, "rbf_regularization", c.evaluation.rbf_regularization, "evaluation");
    Read(e, "rbf_gamma", c.evaluation.rbf_gamma, "evaluation");
  }

  static const std::set<std::string> kModes{"filter", "synthetic-sweep", "afopt-check",
                                            "generate"};
  if (!kModes.count(c.mode)) throw ConfigError("unknown mode '" + c.mode + "'");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  const SyntheticSpec& s = c.synthetic;
  return {{"mode", c.mode},
          {"embeddings", c.embeddings.string()},
          {"out_dir", c.out_dir.string()},
          {"seed", c.seed},
          {"threads", c.filter.threads},
          {"emit_plot_data", c.emit_plot_data},
          {"filter",
           {{"n", c.filter.n},
            {"m", c.filter.m},
            {"t", c.filter.t},
            {"k", c.filter.k},
            {"tau", c.filter.tau},
            {"strategy", std::string(to_string(c.filter.strategy))},
            {"max_partition_retries", c.filter.max_partition_retries}}},
          {"train", TrainToJson(c.filter.train)},
          {"synthetic",
           {{"n_points", s.n_points},
            {"separations", s.separations},
            {"inner_radius", s.inner_radius},
            {"radial_jitter", s.radial_jitter},
            {"bias_fraction", s.bias_fraction},
            {"bias_dims", s.bias_dims},
            {"bias_means", {s.bias_mean_class0, s.bias_mean_class1}},
            {"bias_stddev", s.bias_stddev},
            {"noise_stddev", s.noise_stddev},
            {"flip_fraction", s.flip_fraction},
            {"separation_index", c.separation_index}}},
          {"evaluation",
           {{"holdout_fraction", c.evaluation.holdout_fraction},
            {"rbf_regularization", c.evaluation.rbf_regularization},
            {"rbf_gamma", c.evaluation.rbf_gamma}}}};
}

std::string render_retained_ids(const FilterResult& result) {
  std::string out;
  for (const auto& id : result.retained_ids) {
    out += id;
    out += '\n';
  }
  return out;
}

std::string render_history(const FilterResult& result) {
  std::ostringstream out;
  out << "phase,removed_count,mean_score,max_score,remaining\n";
  for (const auto& p : result.phases) {
    out << p.phase_index << ',' << p.removed_ids.size() << ',' << format_double(p.mean_score)
        << ',' << format_double(p.max_score) << ',' << p.remaining_count << '\n';
  }
  return out.str();
}

json report_to_json(const EvaluationReport& r) {
  auto triple = [](const AccuracyTriple& t) {
    return json{{"before", t.before}, {"after", t.after}, {"random_control", t.random_control}};
  };
  auto optional = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"dataset_sizes",
           {{"original", r.original_size},
            {"retained", r.retained_size},
            {"control", r.control_size}}},
          {"holdout", {{"fraction", r.holdout_fraction}, {"size", r.holdout_size}, {"stratified", true}}},
          {"linear_accuracy", triple(r.linear_accuracy)},
          {"rbf_accuracy", r.rbf_accuracy ? triple(*r.rbf_accuracy) : json(nullptr)},
          {"bias_removal", optional(r.bias_removal)},
          {"flip_removal", optional(r.flip_removal)},
          {"clean_removal", optional(r.clean_removal)}};
}

std::vector<Artifact> build_artifacts(const ExperimentConfig& config, std::ostream& log) {
  std::vector<Artifact> artifacts;
  const FilterConfig filter = ResolvedFilter(config);

  if (config.mode == "filter") {
    if (config.embeddings.empty()) throw ConfigError("filter mode requires --embeddings");
    const EmbeddedDataset dataset = load_embeddings(config.embeddings);
    log << "loaded " << dataset.size() << " instances, " << dataset.dim() << " features\n";
    const Pipeline p = FilterAndEvaluate(dataset, filter, config, {});
    json report = report_to_json(p.report);
    report["run"] = RunRecord(config, filter);
    report["run"]["embeddings"] = config.embeddings.string();
    AppendRunArtifacts(artifacts, "", p, std::move(report), config, dataset, nullptr);
    log << "retained " << p.result.retained_ids.size() << " of " << dataset.size() << " after "
        << p.result.phases.size() << " removal phases\n";

  } else if (config.mode == "synthetic-sweep") {
    std::ostringstream summary;
    summary << "separation_index,gap,original,retained,bias_removal,clean_removal,flip_removal,"
               "linear_before,linear_after,linear_control,rbf_before,rbf_after,rbf_control\n";
    SyntheticSpec spec = config.synthetic;
    spec.seed = config.seed;
    for (std::size_t level = 0; level < spec.separations.size(); ++level) {
      const SyntheticDataset synthetic = generate(spec, level);
      const Pipeline p = FilterAndEvaluate(synthetic.dataset, filter, config,
                                           {&synthetic.bias_mask, &synthetic.flip_mask});
      json report = report_to_json(p.report);
      report["run"] = RunRecord(config, filter);
      report["run"]["separation_index"] = level;
      report["run"]["separation_gap"] = spec.separations[level];
      const std::filesystem::path dir = "separation_" + std::to_string(level);
      AppendRunArtifacts(artifacts, dir, p, std::move(report), config, synthetic.dataset,
                         &synthetic);
      const EvaluationReport& r = p.report;
      const AccuracyTriple rbf = r.rbf_accuracy.value_or(AccuracyTriple{});
      summary << level << ',' << format_double(spec.separations[level]) << ',' << r.original_size
              << ',' << r.retained_size << ',' << OptionalCell(r.bias_removal) << ','
              << OptionalCell(r.clean_removal) << ',' << OptionalCell(r.flip_removal) << ','
              << format_double(r.linear_accuracy.before) << ','
              << format_double(r.linear_accuracy.after) << ','
              << format_double(r.linear_accuracy.random_control) << ','
              << format_double(rbf.before) << ',' << format_double(rbf.after) << ','
              << format_double(rbf.random_control) << '\n';
      log << "separation " << level << " (gap " << spec.separations[level] << "): retained "
          << r.retained_size << "/" << r.original_size << ", bias removed "
          << *r.bias_removal << ", linear " << r.linear_accuracy.before << " -> "
          << r.linear_accuracy.after << "\n";
    }
    artifacts.push_back({"summary.csv", summary.str()});

  } else if (config.mode == "afopt-check") {
    if (config.embeddings.empty()) throw ConfigError("afopt-check mode requires --embeddings");
    const EmbeddedDataset dataset = load_embeddings(config.embeddings);
    const SplitTrainer trainer = linear_split_trainer(
        filter.train, config.seed, static_cast<std::size_t>(dataset.num_classes()));
    const AfoptResult optimum = afopt_search(dataset, filter.n, filter.t, trainer);
    const FilterResult heuristic = run_filter(dataset, filter);
    std::set<std::string_view> kept(heuristic.retained_ids.begin(), heuristic.retained_ids.end());
    std::vector<std::size_t> kept_rows;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (kept.count(dataset.ids()[i])) kept_rows.push_back(i);
    }
    const ExactBiasReport heuristic_bias =
        exact_representation_bias(DatasetView{&dataset, kept_rows}, filter.t, trainer);
    auto ids_of = [&](const std::vector<std::size_t>& rows) {
      std::vector<std::string> ids;
      for (std::size_t i : rows) ids.push_back(dataset.ids()[i]);
      return ids;
    };
    json doc = {{"afopt",
                 {{"subset", ids_of(optimum.best.subset)},
                  {"bias", optimum.best.bias},
                  {"subsets_evaluated", optimum.subsets_evaluated}}},
                {"aflite",
                 {{"retained_ids", heuristic.retained_ids},
                  {"bias", heuristic_bias.bias},
                  {"phases", heuristic.phases.size()}}},
                {"bias_gap", heuristic_bias.bias - optimum.best.bias},
                {"run", RunRecord(config, filter)}};
    artifacts.push_back({"afopt.json", doc.dump(2) + "\n"});
    artifacts.push_back({"retained_ids.txt", render_retained_ids(heuristic)});
    artifacts.push_back({"history.csv", render_history(heuristic)});
    log << "afopt bias " << optimum.best.bias << ", greedy slicing bias " << heuristic_bias.bias
        << "\n";

  } else if (config.mode == "generate") {
    SyntheticSpec spec = config.synthetic;
    spec.seed = config.seed;
    const SyntheticDataset synthetic = generate(spec, config.separation_index);
    std::ostringstream data, masks;
    write_embeddings(data, synthetic.dataset);
    masks << "id,bias_mask,flip_mask\n";
    for (std::size_t i = 0; i < synthetic.dataset.size(); ++i) {
      masks << synthetic.dataset.ids()[i] << ',' << (synthetic.bias_mask[i] ? 1 : 0) << ','
            << (synthetic.flip_mask[i] ? 1 : 0) << '\n';
    }
    artifacts.push_back({"embeddings.csv", data.str()});
    artifacts.push_back({"masks.csv", masks.str()});
    log << "generated " << synthetic.dataset.size() << " instances\n";

  } else {
    throw ConfigError("unknown mode '" + config.mode + "'");
  }
  return artifacts;
}

void run_experiment(const ExperimentConfig& config, std::ostream& log) {
  const std::vector<Artifact> artifacts = build_artifacts(config, log);
  for (const Artifact& a : artifacts) {
    const std::filesystem::path path = config.out_dir / a.relative_path;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cli", "cannot write '" + path.string() + "'");
    out << a.content;
  }
  log << "wrote " << artifacts.size() << " files to " << config.out_dir.string() << "\n";
}

}  // namespace aflite
