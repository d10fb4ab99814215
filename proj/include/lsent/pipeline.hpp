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

#pragma once

// End-to-end experiment runner: filter -> entropy -> groupings -> dataset
// plans -> training -> scoring -> group tables and correlations. All state
// lives under one output directory and a re-invocation resumes from the
// manifest.
//
// Output layout:
//   manifest.json                  config snapshot and per-dataset status
//   entropy.csv, histogram.csv     per-lyricist entropy and its histogram
//   groups_<method>.csv/.json      group statistics; assignments_<method>.csv
//   datasets/<id>.json             dataset manifests
//   results/<id>.json              test-split probabilities (+ training trace)
//   tables/metrics_<combo>.csv/.txt/.svg, tables/correlation.json
//
// Seeds: the plan for (grouping g, mode m) uses base seed
// substream(seed, 2·g + m); repetition r then uses that base + r.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lsent/classifier.hpp"
#include "lsent/corpus.hpp"
#include "lsent/entropy.hpp"
#include "lsent/error.hpp"
#include "lsent/evaluation.hpp"
#include "lsent/grouping.hpp"
#include "lsent/plugin.hpp"
#include "lsent/rng.hpp"
#include "lsent/sampling.hpp"

namespace lsent {

namespace fs = std::filesystem;

struct PipelineConfig {
  std::uint64_t seed = 1;
  LogBase log_base = LogBase::kNatural;
  std::size_t min_songs = 10;
  std::string remap;  // optional remap CSV path
  std::vector<GroupingMethod> groupings{GroupingMethod::kQuantile, GroupingMethod::kKMeans};
  std::vector<SamplingMode> modes{SamplingMode::kHomogenous, SamplingMode::kHeterogenous};
  std::optional<std::size_t> homogenous_repetitions;
  std::optional<std::size_t> heterogenous_repetitions;
  ClassifierConfig classifier;
  /// "builtin" or "plugin:<shell command>".
  std::string backend = "builtin";
  nlohmann::json plugin_options = nlohmann::json::object();
  std::size_t plugin_timeout_ms = 10 * 60 * 1000;
  std::size_t kmeans_max_iters = 1000;
  double histogram_bin_width = 0.25;
  bool pooled = false;
  bool svg = true;
  /// Not part of the snapshot: parallelism never changes outputs.
  std::size_t jobs = 0;
  bool fail_fast = false;
};

inline std::optional<std::string> plugin_command(const std::string& backend) {
  if (backend == "builtin") return std::nullopt;
  if (backend.starts_with("plugin:") && backend.size() > 7) return backend.substr(7);
  throw UsageError("classifier backend must be 'builtin' or 'plugin:<cmd>', got '" + backend + "'");
}

/// Every field that influences outputs, in a fixed key order.
inline nlohmann::ordered_json snapshot(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["log_base"] = to_string(c.log_base);
  j["min_songs"] = c.min_songs;
  j["remap"] = c.remap;
  std::vector<std::string> groupings, modes;
  for (auto g : c.groupings) groupings.push_back(to_string(g));
  for (auto m : c.modes) modes.push_back(to_string(m));
  j["groupings"] = groupings;
  j["modes"] = modes;
  nlohmann::ordered_json reps;
  reps["homogenous"] = c.homogenous_repetitions.value_or(default_repetitions(SamplingMode::kHomogenous));
  reps["heterogenous"] = c.heterogenous_repetitions.value_or(default_repetitions(SamplingMode::kHeterogenous));
  j["repetitions"] = reps;
  j["classifier"] = to_json(c.classifier);
  j["backend"] = c.backend;
  j["plugin_options"] = nlohmann::ordered_json(c.plugin_options);
  j["plugin_timeout_ms"] = c.plugin_timeout_ms;
  j["kmeans_max_iters"] = c.kmeans_max_iters;
  j["histogram_bin_width"] = c.histogram_bin_width;
  j["pooled"] = c.pooled;
  j["svg"] = c.svg;
  return j;
}

inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j, PipelineConfig c = {}) {
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("log_base")) c.log_base = parse_log_base(j["log_base"].get<std::string>());
    if (j.contains("min_songs")) c.min_songs = j["min_songs"].get<std::size_t>();
    if (j.contains("remap")) c.remap = j["remap"].is_null() ? "" : j["remap"].get<std::string>();
    if (j.contains("groupings")) {
      c.groupings.clear();
      for (const auto& g : j["groupings"]) c.groupings.push_back(parse_grouping_method(g.get<std::string>()));
    }
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j["modes"]) c.modes.push_back(parse_sampling_mode(m.get<std::string>()));
    }
    if (j.contains("repetitions")) {
      const auto& r = j["repetitions"];
      if (r.contains("homogenous")) c.homogenous_repetitions = r["homogenous"].get<std::size_t>();
      if (r.contains("heterogenous")) c.heterogenous_repetitions = r["heterogenous"].get<std::size_t>();
    }
    if (j.contains("classifier")) c.classifier = classifier_config_from_json(j["classifier"], c.classifier);
    if (j.contains("backend")) c.backend = j["backend"].get<std::string>();
    if (j.contains("plugin_options")) c.plugin_options = j["plugin_options"];
    if (j.contains("plugin_timeout_ms")) c.plugin_timeout_ms = j["plugin_timeout_ms"].get<std::size_t>();
    if (j.contains("kmeans_max_iters")) c.kmeans_max_iters = j["kmeans_max_iters"].get<std::size_t>();
    if (j.contains("histogram_bin_width")) c.histogram_bin_width = j["histogram_bin_width"].get<double>();
    if (j.contains("pooled")) c.pooled = j["pooled"].get<bool>();
    if (j.contains("svg")) c.svg = j["svg"].get<bool>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<std::size_t>();
    if (j.contains("fail_fast")) c.fail_fast = j["fail_fast"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid pipeline config: ") + e.what());
  }
  plugin_command(c.backend);
  if (c.groupings.empty() || c.modes.empty()) throw UsageError("config selects no grouping or no sampling mode");
  return c;
}

inline PipelineConfig load_pipeline_config(const fs::path& path, PipelineConfig base = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config '" + path.string() + "'");
  try {
    return pipeline_config_from_json(nlohmann::json::parse(in), std::move(base));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

enum class DatasetStatus { kPending, kTrained, kScored, kFailed };

inline std::string to_string(DatasetStatus s) {
  switch (s) {
    case DatasetStatus::kTrained: return "trained";
    case DatasetStatus::kScored: return "scored";
    case DatasetStatus::kFailed: return "failed";
    default: return "pending";
  }
}

inline DatasetStatus parse_dataset_status(std::string_view s) {
  if (s == "pending") return DatasetStatus::kPending;
  if (s == "trained") return DatasetStatus::kTrained;
  if (s == "scored") return DatasetStatus::kScored;
  if (s == "failed") return DatasetStatus::kFailed;
  throw DataError("unknown dataset status '" + std::string(s) + "'");
}

struct DatasetEntry {
  std::string dataset_id;
  std::string table;  // "<grouping>_<mode>"
  DatasetStatus status = DatasetStatus::kPending;
  std::string reason;  // failure reason
  std::string dataset_path;
  std::string result_path;
};

struct RunManifest {
  std::string run_id;
  std::string corpus_digest;
  nlohmann::ordered_json config;
  std::vector<DatasetEntry> datasets;
  std::map<std::string, std::string> artifacts;

  /// Statuses only move forward: pending -> trained -> scored, or -> failed.
  void advance(std::size_t index, DatasetStatus next, std::string reason = {}) {
    DatasetEntry& e = datasets.at(index);
    const bool ok = next == DatasetStatus::kFailed ? e.status != DatasetStatus::kScored
                                                   : static_cast<int>(next) > static_cast<int>(e.status) &&
                                                         e.status != DatasetStatus::kFailed;
    if (!ok) {
      throw DataError("dataset '" + e.dataset_id + "': illegal status change " + to_string(e.status) + " -> " +
                      to_string(next));
    }
    e.status = next;
    e.reason = std::move(reason);
  }

  std::size_t count(DatasetStatus s) const {
    std::size_t n = 0;
    for (const auto& e : datasets) n += e.status == s;
    return n;
  }
};

inline nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["run_id"] = m.run_id;
  j["corpus_digest"] = m.corpus_digest;
  j["config"] = m.config;
  nlohmann::ordered_json ds = nlohmann::ordered_json::array();
  for (const DatasetEntry& e : m.datasets) {
    nlohmann::ordered_json ej;
    ej["dataset_id"] = e.dataset_id;
    ej["table"] = e.table;
    ej["status"] = to_string(e.status);
    if (!e.reason.empty()) ej["reason"] = e.reason;
    ej["dataset"] = e.dataset_path;
    ej["result"] = e.result_path;
    ds.push_back(std::move(ej));
  }
  j["datasets"] = std::move(ds);
  j["artifacts"] = m.artifacts;
  return j;
}

inline std::string dump_manifest(const RunManifest& m) { return to_json(m).dump(2) + "\n"; }

inline RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.corpus_digest = j.at("corpus_digest").get<std::string>();
    m.config = j.at("config");
    for (const auto& ej : j.at("datasets")) {
      DatasetEntry e;
      e.dataset_id = ej.at("dataset_id").get<std::string>();
      e.table = ej.at("table").get<std::string>();
      e.status = parse_dataset_status(ej.at("status").get<std::string>());
      e.reason = ej.value("reason", std::string());
      e.dataset_path = ej.at("dataset").get<std::string>();
      e.result_path = ej.at("result").get<std::string>();
      m.datasets.push_back(std::move(e));
    }
    m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run manifest: ") + e.what());
  }
}

inline RunManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open run manifest '" + path.string() + "'");
  try {
    return manifest_from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

namespace detail {

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes via a temporary file and rename so readers never see a partial file.
inline void write_file(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

inline std::uint64_t plan_seed(std::uint64_t seed, GroupingMethod g, SamplingMode m) {
  return substream(seed, 2 * static_cast<std::uint64_t>(g) + static_cast<std::uint64_t>(m));
}

}  // namespace detail

/// Digest of the corpus content (songs in order, JSONL rendering).
inline std::string corpus_digest(const Corpus& corpus) {
  return detail::fnv1a_hex(detail::render([&](std::ostream& out) { write_corpus_jsonl(corpus, out); }));
}

/// The prepared inputs of a run: filtered corpus, entropy stats, groupings.
struct PreparedRun {
  Corpus corpus;
  std::vector<LyricistStats> stats;
  std::map<GroupingMethod, Grouping> groupings;
};

inline PreparedRun prepare(const Corpus& raw, const PipelineConfig& config) {
  PreparedRun run;
  Corpus remapped = config.remap.empty() ? raw : apply_remap(raw, load_remap(config.remap));
  run.corpus = filter_min_songs(remapped, config.min_songs);
  run.stats = compute_lyricist_stats(run.corpus, config.log_base);
  Grouping quantile = group_quantile(run.stats);
  for (GroupingMethod method : config.groupings) {
    if (method == GroupingMethod::kKMeans) {
      run.groupings[method] = group_kmeans(run.stats, quantile, config.kmeans_max_iters);
    }
  }
  run.groupings[GroupingMethod::kQuantile] = std::move(quantile);
  return run;
}

/// Reads a result file and scores it against its dataset.
inline RunScore score_result(const ExperimentDataset& dataset, const fs::path& result_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_file(result_path));
    return score_run(dataset, j.at("test_probs").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(result_path.string() + ": " + e.what());
  }
}

/// Regenerates all tables of a run directory from its manifest and results.
inline std::vector<GroupTable> write_report(const fs::path& out_dir, bool pooled, bool svg) {
  const RunManifest manifest = load_manifest(out_dir / "manifest.json");
  std::map<std::string, std::vector<RunScore>> by_table;
  for (const DatasetEntry& e : manifest.datasets) {
    by_table[e.table];
    if (e.status != DatasetStatus::kScored) continue;
    const ExperimentDataset ds = load_dataset(out_dir / e.dataset_path);
    by_table[e.table].push_back(score_result(ds, out_dir / e.result_path));
  }

  fs::create_directories(out_dir / "tables");
  std::vector<GroupTable> tables;
  nlohmann::ordered_json correlations = nlohmann::ordered_json::array();
  for (auto& [name, runs] : by_table) {
    const auto sep = name.find('_');
    const GroupingMethod method = parse_grouping_method(name.substr(0, sep));
    const SamplingMode mode = parse_sampling_mode(name.substr(sep + 1));
    const Grouping grouping =
        grouping_from_json(nlohmann::json::parse(detail::read_file(out_dir / ("groups_" + to_string(method) + ".json"))));
    GroupTable table = aggregate(runs, grouping, mode, pooled);
    const fs::path base = out_dir / "tables" / ("metrics_" + name);
    detail::write_file(base.string() + ".csv", detail::render([&](std::ostream& o) { write_group_metrics_csv(table, o); }));
    detail::write_file(base.string() + ".txt", format_group_table(table));
    if (svg) detail::write_file(base.string() + ".svg", svg_bar_chart(table));
    correlations.push_back(to_json(table_correlation(table, grouping)));
    tables.push_back(std::move(table));
  }
  nlohmann::ordered_json summary;
  summary["run_id"] = manifest.run_id;
  summary["pooled"] = pooled;
  summary["tables"] = std::move(correlations);
  detail::write_file(out_dir / "tables" / "correlation.json", summary.dump(2) + "\n");
  return tables;
}

struct ExperimentOutcome {
  RunManifest manifest;
  std::vector<GroupTable> tables;
  std::size_t trained_now = 0;  // datasets trained during this invocation
};

/// Runs (or resumes) the whole experiment for an in-memory corpus.
inline ExperimentOutcome run_experiment(const Corpus& raw, const PipelineConfig& config, const fs::path& out_dir,
                                        std::function<void(const std::string&)> log = {}) {
  auto say = [&](const std::string& line) {
    if (log) log(line);
  };
  config.classifier.validate();
  const auto command = plugin_command(config.backend);
  fs::create_directories(out_dir / "datasets");
  fs::create_directories(out_dir / "results");

  const PreparedRun prepared = prepare(raw, config);
  const Corpus& corpus = prepared.corpus;
  say("corpus: " + std::to_string(corpus.song_count()) + " songs, " + std::to_string(corpus.lyricist_count()) +
      " lyricists, " + std::to_string(corpus.singer_count()) + " singers after filtering");

  const fs::path manifest_path = out_dir / "manifest.json";
  const nlohmann::ordered_json snap = snapshot(config);
  const std::string digest = corpus_digest(corpus);

  RunManifest manifest;
  const bool resuming = fs::exists(manifest_path);
  if (resuming) {
    manifest = load_manifest(manifest_path);
    if (manifest.config != snap) throw UsageError("'" + out_dir.string() + "' holds a run with a different config");
    if (manifest.corpus_digest != digest) throw UsageError("'" + out_dir.string() + "' holds a run over a different corpus");
  } else {
    manifest.run_id = "run-" + detail::fnv1a_hex(snap.dump() + digest);
    manifest.corpus_digest = digest;
    manifest.config = snap;
  }

  std::map<std::string, std::string> artifacts;
  auto artifact = [&](const std::string& key, const std::string& rel, const std::string& content) {
    detail::write_file(out_dir / rel, content);
    artifacts[key] = rel;
  };
  artifact("entropy", "entropy.csv", detail::render([&](std::ostream& o) { write_entropy_csv(prepared.stats, o); }));
  artifact("histogram", "histogram.csv", detail::render([&](std::ostream& o) {
             write_histogram_csv(entropy_histogram(prepared.stats, config.histogram_bin_width), o);
           }));
  for (const auto& [method, grouping] : prepared.groupings) {
    const std::string m = to_string(method);
    artifact("groups_" + m, "groups_" + m + ".csv",
             detail::render([&](std::ostream& o) { write_group_table_csv(grouping, o); }));
    artifact("groups_" + m + "_json", "groups_" + m + ".json", to_json(grouping).dump(2) + "\n");
    artifact("assignments_" + m, "assignments_" + m + ".csv",
             detail::render([&](std::ostream& o) { write_assignment_csv(grouping, prepared.stats, o); }));
  }

  // Plan every dataset; on resume the plan must match the manifest.
  std::vector<ExperimentDataset> plan;
  std::vector<std::string> plan_tables;
  for (GroupingMethod method : config.groupings) {
    for (SamplingMode mode : config.modes) {
      const auto reps = mode == SamplingMode::kHomogenous ? config.homogenous_repetitions
                                                          : config.heterogenous_repetitions;
      for (ExperimentDataset& ds : plan_experiment(corpus, prepared.groupings.at(method), mode, reps,
                                                   detail::plan_seed(config.seed, method, mode))) {
        plan.push_back(std::move(ds));
        plan_tables.push_back(to_string(method) + "_" + to_string(mode));
      }
    }
  }
  if (resuming && manifest.datasets.size() != plan.size()) throw DataError("run manifest does not match the plan");
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const std::string rel_ds = "datasets/" + plan[i].dataset_id + ".json";
    const std::string content = dump_dataset(plan[i]);
    if (resuming) {
      if (manifest.datasets[i].dataset_id != plan[i].dataset_id ||
          detail::read_file(out_dir / rel_ds) != content) {
        throw DataError("dataset '" + plan[i].dataset_id + "' differs from the recorded run");
      }
    } else {
      detail::write_file(out_dir / rel_ds, content);
      manifest.datasets.push_back({plan[i].dataset_id, plan_tables[i], DatasetStatus::kPending, {}, rel_ds,
                                   "results/" + plan[i].dataset_id + ".json"});
    }
  }
  manifest.artifacts = artifacts;

  std::mutex manifest_mutex;
  auto persist = [&] { detail::write_file(manifest_path, dump_manifest(manifest)); };
  persist();

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < manifest.datasets.size(); ++i) {
    const DatasetStatus s = manifest.datasets[i].status;
    if (s == DatasetStatus::kPending || s == DatasetStatus::kTrained) todo.push_back(i);
  }
  say(std::to_string(plan.size()) + " datasets planned, " + std::to_string(todo.size()) + " to process");

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> trained_now{0};
  std::atomic<bool> abort{false};
  std::exception_ptr first_error;

  auto work = [&] {
    for (;;) {
      if (abort) return;
      const std::size_t t = next++;
      if (t >= todo.size()) return;
      const std::size_t i = todo[t];
      const ExperimentDataset& ds = plan[i];
      const fs::path result_path = out_dir / manifest.datasets[i].result_path;
      try {
        DatasetStatus status;
        {
          std::lock_guard lock(manifest_mutex);
          status = manifest.datasets[i].status;
        }
        if (status == DatasetStatus::kPending) {
          ClassifierConfig cc = config.classifier;
          cc.seed = ds.provenance.seed;
          nlohmann::ordered_json result;
          result["dataset_id"] = ds.dataset_id;
          if (command) {
            ExternalRun run = external_classifier(*command, ds, corpus, cc, config.plugin_options,
                                                  std::chrono::milliseconds(config.plugin_timeout_ms));
            result["classifier"] = "plugin:" + run.plugin_name;
            result["test_probs"] = run.test_probs;
          } else {
            const TrainedModel model = train(ds, corpus, cc);
            result["classifier"] = "builtin";
            result["test_probs"] = predict_test(model, ds, corpus);
            result["trace"] = to_json(model.trace);
          }
          detail::write_file(result_path, result.dump() + "\n");
          ++trained_now;
          std::lock_guard lock(manifest_mutex);
          manifest.advance(i, DatasetStatus::kTrained);
          persist();
        }
        score_result(ds, result_path);  // a malformed result fails here
        std::lock_guard lock(manifest_mutex);
        manifest.advance(i, DatasetStatus::kScored);
        persist();
      } catch (const Error& e) {
        std::lock_guard lock(manifest_mutex);
        manifest.advance(i, DatasetStatus::kFailed, e.what());
        persist();
        say("dataset " + ds.dataset_id + " failed: " + e.what());
        if (config.fail_fast) {
          if (!first_error) first_error = std::current_exception();
          abort = true;
        }
      }
    }
  };

  std::size_t jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(todo.size(), 1));
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < jobs; ++w) threads.emplace_back(work);
    for (auto& th : threads) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentOutcome outcome;
  outcome.tables = write_report(out_dir, config.pooled, config.svg);
  manifest.artifacts["correlation"] = "tables/correlation.json";
  for (const GroupTable& table : outcome.tables) {
    manifest.artifacts["metrics_" + table.name] = "tables/metrics_" + table.name + ".csv";
  }
  persist();
  outcome.manifest = manifest;
  outcome.trained_now = trained_now;
  say("trained " + std::to_string(outcome.trained_now) + ", scored " +
      std::to_string(manifest.count(DatasetStatus::kScored)) + ", failed " +
      std::to_string(manifest.count(DatasetStatus::kFailed)));
  return outcome;
}

inline ExperimentOutcome run_experiment(const fs::path& corpus_path, const PipelineConfig& config,
                                        const fs::path& out_dir, std::function<void(const std::string&)> log = {}) {
  return run_experiment(load_corpus(corpus_path, format_from_path(corpus_path)), config, out_dir, std::move(log));
}

}  // namespace lsent
