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

// Built-in lyric -> lyricist classifier: TF-IDF features and multinomial
// logistic regression trained by full-batch gradient descent on mean
// cross-entropy plus an L2 penalty on the weights (not the biases), with
// validation-loss early stopping.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lsent/corpus.hpp"
#include "lsent/error.hpp"
#include "lsent/features.hpp"
#include "lsent/sampling.hpp"
#include "lsent/tokenize.hpp"

namespace lsent {

enum class PatienceMode { kCumulative, kConsecutive };

inline std::string to_string(PatienceMode mode) {
  return mode == PatienceMode::kCumulative ? "cumulative" : "consecutive";
}

inline PatienceMode parse_patience_mode(std::string_view name) {
  if (name == "cumulative") return PatienceMode::kCumulative;
  if (name == "consecutive") return PatienceMode::kConsecutive;
  throw UsageError("unknown patience mode '" + std::string(name) + "'");
}

struct ClassifierConfig {
  std::size_t max_tokens = 512;
  std::size_t max_epochs = 200;
  std::size_t patience_events = 3;
  PatienceMode patience_mode = PatienceMode::kCumulative;
  double learning_rate = 0.1;
  double l2_penalty = 1e-4;
  FeatureSpec features;
  /// Undo any step that raises the training objective and retry it with half
  /// the learning rate.
  bool backtrack_on_increase = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_tokens < 1) throw UsageError("max_tokens must be at least 1");
    if (patience_events < 1) throw UsageError("patience_events must be at least 1");
    if (max_epochs < 1) throw UsageError("max_epochs must be at least 1");
    if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
    if (!(l2_penalty >= 0.0)) throw UsageError("l2_penalty must be non-negative");
    if (features.char_ngram_min > features.char_ngram_max) throw UsageError("char n-gram range is empty");
  }
};

inline nlohmann::ordered_json to_json(const ClassifierConfig& c) {
  nlohmann::ordered_json j;
  j["max_tokens"] = c.max_tokens;
  j["max_epochs"] = c.max_epochs;
  j["patience_events"] = c.patience_events;
  j["patience_mode"] = to_string(c.patience_mode);
  j["learning_rate"] = c.learning_rate;
  j["l2_penalty"] = c.l2_penalty;
  j["char_ngram_min"] = c.features.char_ngram_min;
  j["char_ngram_max"] = c.features.char_ngram_max;
  j["backtrack_on_increase"] = c.backtrack_on_increase;
  j["seed"] = c.seed;
  return j;
}

/// Reads the keys present in j over the defaults in `base`.
inline ClassifierConfig classifier_config_from_json(const nlohmann::json& j, ClassifierConfig base = {}) {
  try {
    if (j.contains("max_tokens")) base.max_tokens = j["max_tokens"].get<std::size_t>();
    if (j.contains("max_epochs")) base.max_epochs = j["max_epochs"].get<std::size_t>();
    if (j.contains("patience_events")) base.patience_events = j["patience_events"].get<std::size_t>();
    if (j.contains("patience_mode")) base.patience_mode = parse_patience_mode(j["patience_mode"].get<std::string>());
    if (j.contains("learning_rate")) base.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("l2_penalty")) base.l2_penalty = j["l2_penalty"].get<double>();
    if (j.contains("char_ngram_min")) base.features.char_ngram_min = j["char_ngram_min"].get<std::size_t>();
    if (j.contains("char_ngram_max")) base.features.char_ngram_max = j["char_ngram_max"].get<std::size_t>();
    if (j.contains("backtrack_on_increase")) base.backtrack_on_increase = j["backtrack_on_increase"].get<bool>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid classifier config: ") + e.what());
  }
  base.validate();
  return base;
}

/// Row-major weights (classes x features) and one bias per class.
struct SoftmaxModel {
  std::size_t classes = 0;
  std::size_t features = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  SoftmaxModel() = default;
  SoftmaxModel(std::size_t k, std::size_t f) : classes(k), features(f), weights(k * f, 0.0), bias(k, 0.0) {}

  double weight(std::size_t c, std::size_t j) const { return weights[c * features + j]; }
};

/// In-place numerically stable softmax.
inline void softmax(std::span<double> scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

inline std::vector<double> predict_proba(const SoftmaxModel& model, const SparseVector& x) {
  std::vector<double> scores(model.bias);
  for (std::size_t c = 0; c < model.classes; ++c) {
    const double* row = model.weights.data() + c * model.features;
    for (const auto& [j, v] : x) scores[c] += row[j] * v;
  }
  softmax(scores);
  return scores;
}

/// A labelled design matrix.
struct Problem {
  std::vector<SparseVector> rows;
  std::vector<std::size_t> labels;
};

/// Mean negative log-likelihood of the labels.
inline double cross_entropy(const SoftmaxModel& model, const Problem& problem) {
  if (problem.rows.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t n = 0; n < problem.rows.size(); ++n) {
    const auto p = predict_proba(model, problem.rows[n]);
    total -= std::log(std::max(p[problem.labels[n]], std::numeric_limits<double>::min()));
  }
  return total / static_cast<double>(problem.rows.size());
}

/// Summed negative log-likelihood + (l2 / 2)·||W||². The sum (not the mean)
/// keeps the step size independent of the training-set size.
inline double objective(const SoftmaxModel& model, const Problem& problem, double l2) {
  double sq = 0.0;
  for (double w : model.weights) sq += w * w;
  return cross_entropy(model, problem) * static_cast<double>(problem.rows.size()) + 0.5 * l2 * sq;
}

/// Analytic gradient of objective(): Σ (p − onehot)·xᵀ + l2·W for the
/// weights and Σ (p − onehot) for the biases.
inline SoftmaxModel gradient(const SoftmaxModel& model, const Problem& problem, double l2) {
  SoftmaxModel grad(model.classes, model.features);
  for (std::size_t n = 0; n < problem.rows.size(); ++n) {
    auto diff = predict_proba(model, problem.rows[n]);
    diff[problem.labels[n]] -= 1.0;
    for (std::size_t c = 0; c < model.classes; ++c) {
      const double d = diff[c];
      grad.bias[c] += d;
      double* row = grad.weights.data() + c * model.features;
      for (const auto& [j, v] : problem.rows[n]) row[j] += d * v;
    }
  }
  for (std::size_t i = 0; i < model.weights.size(); ++i) grad.weights[i] += l2 * model.weights[i];
  return grad;
}

/// Counts validation-loss increase events. An event is an epoch whose loss
/// strictly exceeds the previous epoch's. Training stops once the count
/// reaches `patience` (cumulative), or once that many events occur in a row
/// (consecutive). Also tracks the epoch of minimal loss (first on ties).
class EarlyStopping {
 public:
  EarlyStopping(std::size_t patience, PatienceMode mode) : patience_(patience), mode_(mode) {}

  /// Feeds the loss of the next epoch (1-based); returns true to stop.
  bool update(double loss) {
    ++epoch_;
    if (epoch_ > 1 && loss > previous_) {
      ++events_;
      ++run_;
    } else {
      if (mode_ == PatienceMode::kConsecutive) run_ = 0;
    }
    if (epoch_ == 1 || loss < best_loss_) {
      best_loss_ = loss;
      best_epoch_ = epoch_;
    }
    previous_ = loss;
    const std::size_t count = mode_ == PatienceMode::kCumulative ? events_ : run_;
    return count >= patience_;
  }

  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t events() const noexcept { return events_; }
  std::size_t best_epoch() const noexcept { return best_epoch_; }
  double best_loss() const noexcept { return best_loss_; }

 private:
  std::size_t patience_;
  PatienceMode mode_;
  std::size_t epoch_ = 0;
  std::size_t events_ = 0;
  std::size_t run_ = 0;
  std::size_t best_epoch_ = 0;
  double previous_ = 0.0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct TrainingTrace {
  std::vector<double> train_loss;  // objective / N after each epoch's update
  std::vector<double> val_loss;
  std::size_t stopped_epoch = 0;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

struct FitResult {
  SoftmaxModel model;
  TrainingTrace trace;
};

/// Gradient descent from zero weights; returns the weights of the epoch with
/// the lowest validation loss.
inline FitResult fit_softmax(const Problem& train, const Problem& val, std::size_t classes, std::size_t features,
                             const ClassifierConfig& config) {
  SoftmaxModel model(classes, features);
  FitResult result{model, {}};
  EarlyStopping stopper(config.patience_events, config.patience_mode);
  double lr = config.learning_rate;
  double current = objective(model, train, config.l2_penalty);

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const SoftmaxModel grad = gradient(model, train, config.l2_penalty);
    SoftmaxModel next = model;
    double next_objective = 0.0;
    for (int halvings = 0;; ++halvings) {
      for (std::size_t i = 0; i < next.weights.size(); ++i) next.weights[i] = model.weights[i] - lr * grad.weights[i];
      for (std::size_t c = 0; c < classes; ++c) next.bias[c] = model.bias[c] - lr * grad.bias[c];
      next_objective = objective(next, train, config.l2_penalty);
      if (!config.backtrack_on_increase || next_objective <= current || halvings >= 60) break;
      lr *= 0.5;
    }
    if (config.backtrack_on_increase && next_objective > current) {
      next = model;  // no descent step left at this precision
      next_objective = current;
    }
    model = std::move(next);
    current = next_objective;

    const double val_loss = cross_entropy(model, val);
    result.trace.train_loss.push_back(train.rows.empty() ? current : current / static_cast<double>(train.rows.size()));
    result.trace.val_loss.push_back(val_loss);
    const bool stop = stopper.update(val_loss);
    if (stopper.best_epoch() == epoch) result.model = model;
    result.trace.stopped_epoch = epoch;
    if (stop) {
      result.trace.early_stopped = true;
      break;
    }
  }
  result.trace.best_epoch = stopper.best_epoch();
  return result;
}

struct LabeledText {
  std::size_t label = 0;
  std::string text;
};

struct TrainedModel {
  std::vector<std::string> candidates;
  ClassifierConfig config;
  TfidfVectorizer vectorizer;
  SoftmaxModel linear;
  TrainingTrace trace;
};

inline TermCounts text_terms(std::string_view text, const ClassifierConfig& config) {
  return extract_terms(tokenize(text, config.max_tokens), config.features);
}

inline Problem vectorize(const TfidfVectorizer& vectorizer, const std::vector<LabeledText>& items,
                         const ClassifierConfig& config) {
  Problem p;
  for (const LabeledText& item : items) {
    p.rows.push_back(vectorizer.transform(text_terms(item.text, config)));
    p.labels.push_back(item.label);
  }
  return p;
}

/// Trains on raw labelled texts. The vectorizer sees only the training texts.
inline TrainedModel train_texts(const std::vector<std::string>& candidates, const std::vector<LabeledText>& train_items,
                                const std::vector<LabeledText>& val_items, const ClassifierConfig& config) {
  config.validate();
  if (candidates.empty()) throw DataError("classifier needs at least one candidate");
  for (const auto* items : {&train_items, &val_items}) {
    for (const LabeledText& item : *items) {
      if (item.label >= candidates.size()) throw DataError("label out of range");
    }
  }
  TrainedModel model;
  model.candidates = candidates;
  model.config = config;
  std::vector<TermCounts> docs;
  docs.reserve(train_items.size());
  for (const LabeledText& item : train_items) docs.push_back(text_terms(item.text, config));
  model.vectorizer.fit(docs);
  if (model.vectorizer.size() == 0) throw DataError("degenerate features: the training vocabulary is empty");

  const Problem train = vectorize(model.vectorizer, train_items, config);
  const Problem val = vectorize(model.vectorizer, val_items, config);
  FitResult fit = fit_softmax(train, val, candidates.size(), model.vectorizer.size(), config);
  model.linear = std::move(fit.model);
  model.trace = std::move(fit.trace);
  return model;
}

enum class Split { kTrain, kValidation, kTest };

/// Labelled texts of one split, candidate-major in candidate order, songs in
/// manifest order.
inline std::vector<LabeledText> split_items(const ExperimentDataset& ds, const Corpus& corpus, Split split) {
  std::vector<LabeledText> items;
  for (std::size_t label = 0; label < ds.candidates.size(); ++label) {
    const CandidateSplit& c = ds.candidates[label];
    const auto& ids = split == Split::kTrain ? c.train : split == Split::kValidation ? c.validation : c.test;
    for (const std::string& id : ids) items.push_back({label, corpus.song(id).lyrics});
  }
  return items;
}

inline std::vector<std::string> candidate_ids(const ExperimentDataset& ds) {
  std::vector<std::string> ids;
  for (const CandidateSplit& c : ds.candidates) ids.push_back(c.lyricist_id);
  return ids;
}

inline TrainedModel train(const ExperimentDataset& dataset, const Corpus& corpus, const ClassifierConfig& config) {
  validate_dataset(dataset, &corpus);
  return train_texts(candidate_ids(dataset), split_items(dataset, corpus, Split::kTrain),
                     split_items(dataset, corpus, Split::kValidation), config);
}

/// Probability over the candidates; softmax of the biases when no known
/// feature fires.
inline std::vector<double> predict(const TrainedModel& model, std::string_view lyrics) {
  return predict_proba(model.linear, model.vectorizer.transform(text_terms(lyrics, model.config)));
}

inline nlohmann::json to_json(const TrainingTrace& t) {
  return {{"train_loss", t.train_loss},
          {"val_loss", t.val_loss},
          {"stopped_epoch", t.stopped_epoch},
          {"best_epoch", t.best_epoch},
          {"early_stopped", t.early_stopped}};
}

inline TrainingTrace trace_from_json(const nlohmann::json& j) {
  TrainingTrace t;
  t.train_loss = j.at("train_loss").get<std::vector<double>>();
  t.val_loss = j.at("val_loss").get<std::vector<double>>();
  t.stopped_epoch = j.at("stopped_epoch").get<std::size_t>();
  t.best_epoch = j.at("best_epoch").get<std::size_t>();
  t.early_stopped = j.at("early_stopped").get<bool>();
  return t;
}

inline void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["candidates"] = model.candidates;
  j["config"] = to_json(model.config);
  j["vectorizer"] = model.vectorizer.to_json();
  j["weights"] = model.linear.weights;
  j["bias"] = model.linear.bias;
  j["trace"] = to_json(model.trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model '" + path.string() + "'");
  out << j.dump() << '\n';
}

inline TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    TrainedModel m;
    m.candidates = j.at("candidates").get<std::vector<std::string>>();
    m.config = classifier_config_from_json(j.at("config"));
    m.vectorizer = TfidfVectorizer::from_json(j.at("vectorizer"));
    m.linear = SoftmaxModel(m.candidates.size(), m.vectorizer.size());
    m.linear.weights = j.at("weights").get<std::vector<double>>();
    m.linear.bias = j.at("bias").get<std::vector<double>>();
    if (m.linear.weights.size() != m.candidates.size() * m.vectorizer.size() ||
        m.linear.bias.size() != m.candidates.size()) {
      throw DataError("model '" + path.string() + "': weight shape mismatch");
    }
    m.trace = trace_from_json(j.at("trace"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model '" + path.string() + "': " + e.what());
  }
}

}  // namespace lsent
