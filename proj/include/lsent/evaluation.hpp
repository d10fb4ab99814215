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

// Scoring of test predictions, per-lyricist precision/recall/F1, per-group
// averaging, and the entropy/performance correlation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsent/classifier.hpp"
#include "lsent/csv.hpp"
#include "lsent/error.hpp"
#include "lsent/grouping.hpp"
#include "lsent/sampling.hpp"

namespace lsent {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision, recall and F1 with every 0/0 taken as 0.
inline Metrics metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  Metrics m;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

inline Metrics metrics(const Confusion& c) { return metrics(c.tp, c.fp, c.fn); }

/// Index of the largest entry; the lowest index wins ties.
inline std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

struct RunScore {
  std::string dataset_id;
  std::vector<std::string> lyricist_ids;  // candidate order
  std::vector<Confusion> confusion;       // per candidate
  std::vector<std::size_t> truth;         // per test song
  std::vector<std::size_t> predicted;     // per test song

  std::size_t correct() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) n += truth[i] == predicted[i];
    return n;
  }
  double accuracy() const { return truth.empty() ? 0.0 : static_cast<double>(correct()) / static_cast<double>(truth.size()); }
};

/// Scores test-split probabilities given in split_items(..., kTest) order.
inline RunScore score_run(const ExperimentDataset& dataset, const std::vector<std::vector<double>>& test_probs) {
  RunScore score;
  score.dataset_id = dataset.dataset_id;
  const std::size_t k = dataset.candidates.size();
  score.lyricist_ids = candidate_ids(dataset);
  score.confusion.assign(k, Confusion{});
  std::size_t row = 0;
  for (std::size_t label = 0; label < k; ++label) {
    for (std::size_t t = 0; t < dataset.candidates[label].test.size(); ++t, ++row) {
      if (row >= test_probs.size()) throw DataError("score_run: fewer probability rows than test songs");
      if (test_probs[row].size() != k) throw DataError("score_run: probability row has the wrong length");
      const std::size_t guess = argmax(test_probs[row]);
      score.truth.push_back(label);
      score.predicted.push_back(guess);
      if (guess == label) {
        ++score.confusion[label].tp;
      } else {
        ++score.confusion[label].fn;
        ++score.confusion[guess].fp;
      }
    }
  }
  if (row != test_probs.size()) throw DataError("score_run: more probability rows than test songs");
  return score;
}

inline std::vector<std::vector<double>> predict_test(const TrainedModel& model, const ExperimentDataset& dataset,
                                                     const Corpus& corpus) {
  std::vector<std::vector<double>> probs;
  for (const LabeledText& item : split_items(dataset, corpus, Split::kTest)) probs.push_back(predict(model, item.text));
  return probs;
}

inline RunScore score_run(const TrainedModel& model, const ExperimentDataset& dataset, const Corpus& corpus) {
  return score_run(dataset, predict_test(model, dataset, corpus));
}

struct GroupRow {
  std::size_t pairs = 0;  // (run, lyricist) pairs averaged
  Metrics mean;
};

/// Per-group metrics for one (grouping, mode) combination; rows for groups
/// 0..4 that received data.
struct GroupTable {
  std::string name;
  GroupingMethod grouping = GroupingMethod::kQuantile;
  SamplingMode mode = SamplingMode::kHomogenous;
  bool pooled = false;
  std::array<std::optional<GroupRow>, kGroupCount> rows;
};

/// Averages per-(run, lyricist) metrics within each group. Runs are folded in
/// dataset_id order so the result does not depend on input order. With
/// `pooled`, each group's metrics come from its summed confusion counts.
inline GroupTable aggregate(std::vector<RunScore> runs, const Grouping& grouping, SamplingMode mode,
                            bool pooled = false) {
  std::sort(runs.begin(), runs.end(),
            [](const RunScore& a, const RunScore& b) { return a.dataset_id < b.dataset_id; });
  const auto assignment = grouping.assignment();
  std::array<Metrics, kGroupCount> sums{};
  std::array<Confusion, kGroupCount> pooled_counts{};
  std::array<std::size_t, kGroupCount> pairs{};
  for (const RunScore& run : runs) {
    for (std::size_t i = 0; i < run.lyricist_ids.size(); ++i) {
      auto it = assignment.find(run.lyricist_ids[i]);
      if (it == assignment.end()) {
        throw DataError("lyricist '" + run.lyricist_ids[i] + "' in run '" + run.dataset_id + "' has no group");
      }
      const std::size_t g = it->second;
      const Metrics m = metrics(run.confusion[i]);
      sums[g].precision += m.precision;
      sums[g].recall += m.recall;
      sums[g].f1 += m.f1;
      pooled_counts[g].tp += run.confusion[i].tp;
      pooled_counts[g].fp += run.confusion[i].fp;
      pooled_counts[g].fn += run.confusion[i].fn;
      ++pairs[g];
    }
  }
  GroupTable table;
  table.grouping = grouping.method;
  table.mode = mode;
  table.pooled = pooled;
  table.name = to_string(grouping.method) + "_" + to_string(mode);
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    if (pairs[g] == 0) continue;
    GroupRow row;
    row.pairs = pairs[g];
    if (pooled) {
      row.mean = metrics(pooled_counts[g]);
    } else {
      const double n = static_cast<double>(pairs[g]);
      row.mean = {sums[g].precision / n, sums[g].recall / n, sums[g].f1 / n};
    }
    table.rows[g] = row;
  }
  return table;
}

struct Correlation {
  double pearson = 0.0;
  double spearman = 0.0;
};

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("correlation: inputs differ in length");
  if (xs.size() < 3) throw DataError("correlation: need at least 3 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("correlation: constant input vector");
  return sxy / std::sqrt(sxx * syy);
}

/// 1-based ranks; tied values share their average rank.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

inline Correlation correlation(std::span<const double> group_entropies, std::span<const double> group_f1) {
  return {pearson(group_entropies, group_f1), spearman(group_entropies, group_f1)};
}

struct TableCorrelation {
  std::string table;
  std::vector<std::size_t> groups;
  std::vector<double> avg_entropy;
  std::vector<double> f1;
  std::optional<Correlation> value;
  std::string note;
};

/// Correlates group average entropy with group F1 over the rows present.
inline TableCorrelation table_correlation(const GroupTable& table, const Grouping& grouping) {
  TableCorrelation out;
  out.table = table.name;
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    if (!table.rows[g]) continue;
    out.groups.push_back(g);
    out.avg_entropy.push_back(grouping.stats[g].avg_entropy);
    out.f1.push_back(table.rows[g]->mean.f1);
  }
  try {
    out.value = correlation(out.avg_entropy, out.f1);
  } catch (const DataError& e) {
    out.note = e.what();
  }
  return out;
}

inline std::string group_label(const GroupTable& table, std::size_t g) {
  return (table.grouping == GroupingMethod::kQuantile ? "A" : "B") + std::to_string(g);
}

inline void write_group_metrics_csv(const GroupTable& table, std::ostream& out) {
  csv::write_row(out, {"group", "pairs", "precision", "recall", "f1"});
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    if (!table.rows[g]) continue;
    const GroupRow& r = *table.rows[g];
    csv::write_row(out, {group_label(table, g), std::to_string(r.pairs), format_fixed(r.mean.precision, 6),
                         format_fixed(r.mean.recall, 6), format_fixed(r.mean.f1, 6)});
  }
}

/// Aligned plain-text rendering with three decimals.
inline std::string format_group_table(const GroupTable& table) {
  std::ostringstream out;
  out << "Lyric-lyricist classification performance on " << to_string(table.mode) << " sampling "
      << (table.grouping == GroupingMethod::kQuantile ? "A" : "B") << "*"
      << (table.pooled ? " (pooled counts)" : "") << "\n";
  out << "       Precision  Recall     F1\n";
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    if (!table.rows[g]) continue;
    const Metrics& m = table.rows[g]->mean;
    char line[128];
    std::snprintf(line, sizeof line, "%-6s %9.3f %7.3f %6.3f\n", group_label(table, g).c_str(), m.precision,
                  m.recall, m.f1);
    out << line;
  }
  return out.str();
}

/// Grouped bar chart (precision, recall, F1 per group) as a standalone SVG.
inline std::string svg_bar_chart(const GroupTable& table) {
  constexpr int kWidth = 520, kHeight = 300, kLeft = 50, kBottom = 40, kTop = 30;
  constexpr int kPlotHeight = kHeight - kBottom - kTop;
  const std::array<const char*, 3> colors{"#4e79a7", "#f28e2b", "#59a14f"};
  const std::array<const char*, 3> names{"Precision", "Recall", "F1"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\">" << to_string(table.mode) << " sampling "
      << (table.grouping == GroupingMethod::kQuantile ? "A" : "B") << "*</text>\n";
  for (int tick = 0; tick <= 10; tick += 2) {
    const int y = kTop + kPlotHeight - kPlotHeight * tick / 10;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kWidth - 10 << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << format_fixed(tick / 10.0, 1)
        << "</text>\n";
  }
  const int slot = (kWidth - kLeft - 10) / static_cast<int>(kGroupCount);
  const int bar = slot / 4;
  for (std::size_t g = 0; g < kGroupCount; ++g) {
    const int x0 = kLeft + static_cast<int>(g) * slot + bar / 2;
    if (table.rows[g]) {
      const Metrics& m = table.rows[g]->mean;
      const std::array<double, 3> values{m.precision, m.recall, m.f1};
      for (std::size_t s = 0; s < 3; ++s) {
        const int h = static_cast<int>(std::lround(values[s] * kPlotHeight));
        svg << "<rect x=\"" << x0 + static_cast<int>(s) * bar << "\" y=\"" << kTop + kPlotHeight - h
            << "\" width=\"" << bar - 2 << "\" height=\"" << h << "\" fill=\"" << colors[s] << "\"/>\n";
      }
    }
    svg << "<text x=\"" << x0 + 3 * bar / 2 << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
        << group_label(table, g) << "</text>\n";
  }
  for (std::size_t s = 0; s < 3; ++s) {
    const int x = kLeft + 10 + static_cast<int>(s) * 90;
    svg << "<rect x=\"" << x << "\" y=\"" << kHeight - 14 << "\" width=\"10\" height=\"10\" fill=\"" << colors[s]
        << "\"/><text x=\"" << x + 14 << "\" y=\"" << kHeight - 5 << "\">" << names[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline nlohmann::ordered_json to_json(const TableCorrelation& c) {
  nlohmann::ordered_json j;
  j["table"] = c.table;
  j["groups"] = c.groups;
  j["group_avg_entropy"] = c.avg_entropy;
  j["group_f1"] = c.f1;
  if (c.value) {
    j["pearson_r"] = c.value->pearson;
    j["spearman_rho"] = c.value->spearman;
  } else {
    j["pearson_r"] = nullptr;
    j["spearman_rho"] = nullptr;
    j["note"] = c.note;
  }
  return j;
}

}  // namespace lsent
