// Copyright 2026 The lsent Authors. All Rights Reserved.
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

// Command-line front end: ingest, entropy, group, sample, train, evaluate,
// experiment, synth, report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsent.hpp"

namespace fs = std::filesystem;
using namespace lsent;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string log_base = "natural";
  std::string classifier = "builtin";
  std::string out = ".";
  std::size_t jobs = 0;
};

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

Corpus read_corpus(const std::string& path) { return load_corpus(path, format_from_path(path)); }

ClassifierConfig classifier_config(const std::string& config_path) {
  if (config_path.empty()) return {};
  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot open config '" + config_path + "'");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError("config '" + config_path + "' is not valid JSON");
  return classifier_config_from_json(j.contains("classifier") ? j["classifier"] : j);
}

std::vector<GroupingMethod> methods_from(const std::string& name) {
  if (name == "both") return {GroupingMethod::kQuantile, GroupingMethod::kKMeans};
  return {parse_grouping_method(name)};
}

Grouping build_grouping(const std::vector<LyricistStats>& stats, GroupingMethod method) {
  Grouping quantile = group_quantile(stats);
  return method == GroupingMethod::kQuantile ? quantile : group_kmeans(stats, quantile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyricist-singer entropy and lyric-lyricist classification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--log-base", g.log_base, "Entropy log base: natural, 2 or 10");
  app.add_option("--classifier", g.classifier, "builtin or plugin:<command>");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Datasets trained in parallel (0 = all cores)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus, apply remaps and the minimum-song filter");
  std::string ingest_input, ingest_format, ingest_remap;
  std::size_t ingest_min_songs = 10, ingest_max_dist = 1;
  ingest->add_option("--input", ingest_input, "Corpus file (JSONL or CSV)")->required();
  ingest->add_option("--format", ingest_format, "jsonl or csv (default: from extension)");
  ingest->add_option("--remap", ingest_remap, "Two-column CSV (from_id,to_id) of manual identity merges");
  ingest->add_option("--min-songs", ingest_min_songs, "Drop lyricists with fewer songs")->check(CLI::PositiveNumber);
  ingest->add_option("--max-dist", ingest_max_dist, "Name-variant edit distance threshold");

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Per-lyricist singer entropy and histogram");
  std::string entropy_corpus;
  double bin_width = 0.25;
  entropy->add_option("--corpus", entropy_corpus)->required();
  entropy->add_option("--bin-width", bin_width, "Histogram bin width");

  // group
  auto* group = app.add_subcommand("group", "Partition lyricists into five entropy groups");
  std::string group_corpus, group_method = "both";
  group->add_option("--corpus", group_corpus)->required();
  group->add_option("--method", group_method, "quantile, kmeans or both");

  // sample
  auto* sample = app.add_subcommand("sample", "Write experiment dataset manifests");
  std::string sample_corpus, sample_method = "quantile", sample_mode = "homogenous";
  std::optional<std::size_t> sample_group, sample_reps;
  sample->add_option("--corpus", sample_corpus)->required();
  sample->add_option("--method", sample_method, "quantile or kmeans");
  sample->add_option("--mode", sample_mode, "homogenous or heterogenous");
  sample->add_option("--group", sample_group, "Only this group (homogenous)");
  sample->add_option("--repetitions", sample_reps, "Datasets per unit (default 10 / 50)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train on one dataset and predict its test split");
  std::string train_corpus, train_dataset, train_config;
  train_cmd->add_option("--corpus", train_corpus)->required();
  train_cmd->add_option("--dataset", train_dataset, "Dataset manifest JSON")->required();
  train_cmd->add_option("--config", train_config, "Classifier config JSON");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Per-lyricist precision, recall and F1 of one result");
  std::string eval_dataset, eval_result;
  evaluate->add_option("--dataset", eval_dataset)->required();
  evaluate->add_option("--result", eval_result, "Result JSON written by train")->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run or resume the full pipeline");
  std::string exp_corpus, exp_config;
  bool exp_fail_fast = false;
  experiment->add_option("--corpus", exp_corpus)->required();
  experiment->add_option("--config", exp_config, "Pipeline config JSON");
  experiment->add_flag("--fail-fast", exp_fail_fast, "Abort on the first failed dataset");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  std::string synth_params;
  bool synth_hypothesis = false;
  synth->add_option("--params", synth_params, "Synthesis parameters JSON");
  synth->add_flag("--hypothesis", synth_hypothesis, "Use the fixed hypothesis recipe");

  // report
  auto* report = app.add_subcommand("report", "Regenerate tables, correlations and charts of a run");
  std::string report_run;
  bool report_pooled = false, report_no_svg = false;
  report->add_option("--run", report_run, "Run directory (default: --out)");
  report->add_flag("--pooled", report_pooled, "Metrics from pooled counts instead of averaged pairs");
  report->add_flag("--no-svg", report_no_svg, "Skip SVG charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    const fs::path out = g.out;
    const LogBase base = parse_log_base(g.log_base);

    if (*ingest) {
      const CorpusFormat format = ingest_format.empty() ? format_from_path(ingest_input)
                                                        : parse_corpus_format(ingest_format);
      Corpus raw = load_corpus(ingest_input, format);
      std::cout << "loaded: |X|=" << raw.song_count() << " |I|=" << raw.lyricist_count()
                << " |J|=" << raw.singer_count() << "\n";
      if (!ingest_remap.empty()) raw = apply_remap(raw, load_remap(ingest_remap));
      const auto report_variants = find_name_variants(raw, ingest_max_dist);
      if (report_variants.skipped_unnamed > 0) {
        std::cerr << "warning: " << report_variants.skipped_unnamed
                  << " lyricists have no name and were skipped in the name-variant check\n";
      }
      const Corpus filtered = filter_min_songs(raw, ingest_min_songs);
      fs::create_directories(out);
      save_corpus(filtered, out / "corpus.jsonl", CorpusFormat::kJsonl);
      write_text(out / "name_variants.csv", render([&](std::ostream& o) {
                   write_name_variants_csv(report_variants, lyricist_names(raw), o);
                 }));
      std::cout << "filtered (>= " << ingest_min_songs << " songs): |X|=" << filtered.song_count()
                << " |I|=" << filtered.lyricist_count() << " |J|=" << filtered.singer_count() << "\n"
                << report_variants.pairs.size() << " name-variant pairs written for review\n";
    } else if (*entropy) {
      const Corpus corpus = read_corpus(entropy_corpus);
      const auto stats = compute_lyricist_stats(corpus, base);
      write_text(out / "entropy.csv", render([&](std::ostream& o) { write_entropy_csv(stats, o); }));
      write_text(out / "histogram.csv",
                 render([&](std::ostream& o) { write_histogram_csv(entropy_histogram(stats, bin_width), o); }));
      std::cout << stats.size() << " lyricists written to " << (out / "entropy.csv").string() << "\n";
    } else if (*group) {
      const Corpus corpus = read_corpus(group_corpus);
      const auto stats = compute_lyricist_stats(corpus, base);
      for (GroupingMethod method : methods_from(group_method)) {
        const Grouping grouping = build_grouping(stats, method);
        const std::string m = to_string(method);
        const std::string table = render([&](std::ostream& o) { write_group_table_csv(grouping, o); });
        write_text(out / ("groups_" + m + ".csv"), table);
        write_text(out / ("groups_" + m + ".json"), to_json(grouping).dump(2) + "\n");
        write_text(out / ("assignments_" + m + ".csv"),
                   render([&](std::ostream& o) { write_assignment_csv(grouping, stats, o); }));
        std::cout << table;
      }
    } else if (*sample) {
      const Corpus corpus = read_corpus(sample_corpus);
      const auto stats = compute_lyricist_stats(corpus, base);
      const Grouping grouping = build_grouping(stats, parse_grouping_method(sample_method));
      const SamplingMode mode = parse_sampling_mode(sample_mode);
      std::vector<ExperimentDataset> plan;
      if (mode == SamplingMode::kHomogenous && sample_group) {
        for (std::size_t r = 0; r < sample_reps.value_or(default_repetitions(mode)); ++r) {
          plan.push_back(sample_homogenous(corpus, grouping, *sample_group, g.seed + r));
        }
      } else {
        plan = plan_experiment(corpus, grouping, mode, sample_reps, g.seed);
      }
      fs::create_directories(out / "datasets");
      for (const ExperimentDataset& ds : plan) save_dataset(ds, out / "datasets" / (ds.dataset_id + ".json"));
      std::cout << plan.size() << " dataset manifests written to " << (out / "datasets").string() << "\n";
    } else if (*train_cmd) {
      const Corpus corpus = read_corpus(train_corpus);
      const ExperimentDataset ds = load_dataset(train_dataset);
      validate_dataset(ds, &corpus);
      ClassifierConfig config = classifier_config(train_config);
      config.seed = g.seed;
      nlohmann::ordered_json result;
      result["dataset_id"] = ds.dataset_id;
      fs::create_directories(out);
      if (auto command = plugin_command(g.classifier)) {
        const ExternalRun run = external_classifier(*command, ds, corpus, config);
        result["classifier"] = "plugin:" + run.plugin_name;
        result["test_probs"] = run.test_probs;
      } else {
        const TrainedModel model = train(ds, corpus, config);
        save_model(model, out / (ds.dataset_id + ".model.json"));
        result["classifier"] = "builtin";
        result["test_probs"] = predict_test(model, ds, corpus);
        result["trace"] = to_json(model.trace);
        std::cout << "stopped at epoch " << model.trace.stopped_epoch << ", best epoch " << model.trace.best_epoch
                  << "\n";
      }
      write_text(out / (ds.dataset_id + ".result.json"), result.dump() + "\n");
      std::cout << "result written to " << (out / (ds.dataset_id + ".result.json")).string() << "\n";
    } else if (*evaluate) {
      const ExperimentDataset ds = load_dataset(eval_dataset);
      const RunScore score = score_result(ds, eval_result);
      const std::string table = render([&](std::ostream& o) {
        csv::write_row(o, {"lyricist_id", "group", "tp", "fp", "fn", "precision", "recall", "f1"});
        for (std::size_t i = 0; i < score.lyricist_ids.size(); ++i) {
          const Confusion& c = score.confusion[i];
          const Metrics m = metrics(c);
          csv::write_row(o, {score.lyricist_ids[i], std::to_string(ds.candidates[i].group), std::to_string(c.tp),
                             std::to_string(c.fp), std::to_string(c.fn), format_fixed(m.precision, 6),
                             format_fixed(m.recall, 6), format_fixed(m.f1, 6)});
        }
      });
      write_text(out / (ds.dataset_id + ".evaluation.csv"), table);
      std::cout << table << "accuracy " << format_fixed(score.accuracy(), 4) << "\n";
    } else if (*experiment) {
      PipelineConfig config = exp_config.empty() ? PipelineConfig{} : load_pipeline_config(exp_config);
      if (app.count("--seed")) config.seed = g.seed;
      if (app.count("--log-base")) config.log_base = base;
      if (app.count("--classifier")) config.backend = g.classifier;
      if (app.count("--jobs")) config.jobs = g.jobs;
      if (exp_fail_fast) config.fail_fast = true;
      const ExperimentOutcome outcome =
          run_experiment(fs::path(exp_corpus), config, out, [](const std::string& line) { std::cerr << line << "\n"; });
      for (const GroupTable& table : outcome.tables) std::cout << format_group_table(table) << "\n";
      std::cout << "correlation summary: " << (out / "tables" / "correlation.json").string() << "\n";
      if (outcome.manifest.count(DatasetStatus::kFailed) > 0) return static_cast<int>(ExitCode::kData);
    } else if (*synth) {
      SynthParams params = hypothesis_params(g.seed);
      if (!synth_hypothesis) {
        params = SynthParams{};
        params.seed = g.seed;
        if (!synth_params.empty()) {
          std::ifstream in(synth_params);
          if (!in) throw UsageError("cannot open params '" + synth_params + "'");
          nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
          if (j.is_discarded()) throw UsageError("params '" + synth_params + "' is not valid JSON");
          if (!j.contains("seed")) j["seed"] = g.seed;
          params = synth_params_from_json(j, params);
        }
      }
      const Corpus corpus = generate_corpus(params);
      fs::create_directories(out);
      save_corpus(corpus, out / "corpus.jsonl", CorpusFormat::kJsonl);
      std::cout << "synthetic corpus: |X|=" << corpus.song_count() << " |I|=" << corpus.lyricist_count()
                << " |J|=" << corpus.singer_count() << " -> " << (out / "corpus.jsonl").string() << "\n";
    } else if (*report) {
      const fs::path run_dir = report_run.empty() ? out : fs::path(report_run);
      for (const GroupTable& table : write_report(run_dir, report_pooled, !report_no_svg)) {
        std::cout << format_group_table(table) << "\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  }
  return 0;
}
