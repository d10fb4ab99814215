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

// Partitions lyricists into five entropy groups. Group 0 always holds the
// zero-entropy lyricists (a single singer); groups 1..4 split the rest either
// into equal-count quantiles or by 1-D k-means seeded from those quantiles.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lsent/csv.hpp"
#include "lsent/entropy.hpp"
#include "lsent/error.hpp"

namespace lsent {

inline constexpr std::size_t kGroupCount = 5;
inline constexpr std::size_t kNonzeroGroups = kGroupCount - 1;

enum class GroupingMethod { kQuantile, kKMeans };

inline std::string to_string(GroupingMethod method) {
  return method == GroupingMethod::kQuantile ? "quantile" : "kmeans";
}

inline GroupingMethod parse_grouping_method(std::string_view name) {
  if (name == "quantile" || name == "A") return GroupingMethod::kQuantile;
  if (name == "kmeans" || name == "B") return GroupingMethod::kKMeans;
  throw UsageError("unknown grouping method '" + std::string(name) + "' (expected quantile or kmeans)");
}

struct GroupStats {
  std::size_t n_lyricists = 0;
  double avg_songs = 0.0;
  std::size_t total_songs = 0;
  double avg_entropy = 0.0;
  double min_entropy = 0.0;
  double max_entropy = 0.0;
};

struct Grouping {
  GroupingMethod method = GroupingMethod::kQuantile;
  /// Lyricist ids per group, ascending by (entropy, lyricist_id).
  std::array<std::vector<std::string>, kGroupCount> groups;
  std::array<GroupStats, kGroupCount> stats;
  /// k-means only: iterations run, and the within-group sum of squared
  /// deviations of the initial grouping followed by one value per iteration.
  std::size_t iterations = 0;
  std::vector<double> objective_trace;

  std::map<std::string, std::size_t> assignment() const {
    std::map<std::string, std::size_t> out;
    for (std::size_t k = 0; k < kGroupCount; ++k) {
      for (const std::string& id : groups[k]) out.emplace(id, k);
    }
    return out;
  }
};

namespace detail {

inline std::map<std::string, const LyricistStats*> stats_by_id(const std::vector<LyricistStats>& stats) {
  std::map<std::string, const LyricistStats*> out;
  for (const LyricistStats& s : stats) {
    if (!out.emplace(s.lyricist_id, &s).second) throw DataError("duplicate lyricist '" + s.lyricist_id + "' in stats");
  }
  return out;
}

inline bool entropy_less(const LyricistStats* a, const LyricistStats* b) {
  if (a->entropy != b->entropy) return a->entropy < b->entropy;
  return a->lyricist_id < b->lyricist_id;
}

inline GroupStats summarize(const std::vector<const LyricistStats*>& members) {
  GroupStats g;
  g.n_lyricists = members.size();
  if (members.empty()) return g;
  double entropy_sum = 0.0;
  g.min_entropy = std::numeric_limits<double>::infinity();
  g.max_entropy = -std::numeric_limits<double>::infinity();
  for (const LyricistStats* s : members) {
    g.total_songs += s->song_count;
    entropy_sum += s->entropy;
    g.min_entropy = std::min(g.min_entropy, s->entropy);
    g.max_entropy = std::max(g.max_entropy, s->entropy);
  }
  g.avg_songs = static_cast<double>(g.total_songs) / static_cast<double>(members.size());
  g.avg_entropy = entropy_sum / static_cast<double>(members.size());
  return g;
}

inline void fill(Grouping& grouping, std::array<std::vector<const LyricistStats*>, kGroupCount>& members) {
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    std::sort(members[k].begin(), members[k].end(), entropy_less);
    grouping.groups[k].clear();
    for (const LyricistStats* s : members[k]) grouping.groups[k].push_back(s->lyricist_id);
    grouping.stats[k] = summarize(members[k]);
  }
}

inline bool is_zero_entropy(const LyricistStats& s) { return s.singer_count() == 1; }

}  // namespace detail

/// Equal-count split: the n nonzero-entropy lyricists, sorted ascending by
/// (entropy, lyricist_id), are cut so that group k receives 1-based ranks
/// floor(n(k-1)/4)+1 .. floor(nk/4).
inline Grouping group_quantile(const std::vector<LyricistStats>& stats) {
  detail::stats_by_id(stats);  // rejects duplicates
  std::array<std::vector<const LyricistStats*>, kGroupCount> members;
  std::vector<const LyricistStats*> nonzero;
  for (const LyricistStats& s : stats) {
    if (detail::is_zero_entropy(s)) {
      members[0].push_back(&s);
    } else {
      nonzero.push_back(&s);
    }
  }
  const std::size_t n = nonzero.size();
  if (n < kNonzeroGroups) {
    throw DataError("quantile grouping needs at least 4 lyricists with nonzero entropy, got " + std::to_string(n));
  }
  std::sort(nonzero.begin(), nonzero.end(), detail::entropy_less);
  for (std::size_t k = 1; k <= kNonzeroGroups; ++k) {
    const std::size_t begin = n * (k - 1) / kNonzeroGroups;
    const std::size_t end = n * k / kNonzeroGroups;
    members[k].assign(nonzero.begin() + static_cast<std::ptrdiff_t>(begin),
                      nonzero.begin() + static_cast<std::ptrdiff_t>(end));
  }
  Grouping grouping;
  grouping.method = GroupingMethod::kQuantile;
  detail::fill(grouping, members);
  return grouping;
}

/// Sum over groups 1..4 of squared deviations from the group mean entropy.
inline double within_group_sse(const Grouping& grouping, const std::vector<LyricistStats>& stats) {
  const auto by_id = detail::stats_by_id(stats);
  double total = 0.0;
  for (std::size_t k = 1; k < kGroupCount; ++k) {
    const double mean = grouping.stats[k].avg_entropy;
    for (const std::string& id : grouping.groups[k]) {
      const double d = by_id.at(id)->entropy - mean;
      total += d * d;
    }
  }
  return total;
}

/// Lloyd's algorithm on the nonzero entropies with k = 4, centroids seeded
/// from the means of init groups 1..4. Nearest-centroid ties go to the lower
/// index; a cluster left empty takes the point farthest from its own centroid
/// (among clusters with more than one point). Stops when an iteration leaves
/// every assignment unchanged. Group 0 is copied from init.
inline Grouping group_kmeans(const std::vector<LyricistStats>& stats, const Grouping& init,
                             std::size_t max_iters = 1000) {
  const auto by_id = detail::stats_by_id(stats);

  std::vector<const LyricistStats*> points;
  std::vector<std::size_t> labels;
  std::size_t init_count = 0;
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    for (const std::string& id : init.groups[k]) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw DataError("k-means init references unknown lyricist '" + id + "'");
      ++init_count;
      if (k == 0) continue;
      points.push_back(it->second);
      labels.push_back(k - 1);
    }
  }
  if (init_count != stats.size()) throw DataError("k-means init does not cover the same lyricists as the stats");
  for (std::size_t k = 1; k < kGroupCount; ++k) {
    if (init.groups[k].empty()) throw DataError("k-means init group " + std::to_string(k) + " is empty");
  }

  const std::size_t n = points.size();
  std::array<double, kNonzeroGroups> centroids{};
  std::array<std::size_t, kNonzeroGroups> sizes{};

  auto update_centroids = [&] {
    std::array<double, kNonzeroGroups> sums{};
    sizes.fill(0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[labels[i]] += points[i]->entropy;
      ++sizes[labels[i]];
    }
    for (std::size_t c = 0; c < kNonzeroGroups; ++c) {
      if (sizes[c] > 0) centroids[c] = sums[c] / static_cast<double>(sizes[c]);
    }
  };
  auto objective = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = points[i]->entropy - centroids[labels[i]];
      total += d * d;
    }
    return total;
  };

  Grouping result;
  result.method = GroupingMethod::kKMeans;
  update_centroids();
  result.objective_trace.push_back(objective());

  bool converged = false;
  std::size_t iter = 0;
  while (iter < max_iters) {
    ++iter;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_dist = std::abs(points[i]->entropy - centroids[0]);
      for (std::size_t c = 1; c < kNonzeroGroups; ++c) {
        const double d = std::abs(points[i]->entropy - centroids[c]);
        if (d < best_dist) {
          best = c;
          best_dist = d;
        }
      }
      next[i] = best;
    }
    for (std::size_t c = 0; c < kNonzeroGroups; ++c) {
      std::array<std::size_t, kNonzeroGroups> counts{};
      for (std::size_t label : next) ++counts[label];
      if (counts[c] > 0) continue;
      std::size_t far = n;
      double far_dist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[next[i]] < 2) continue;
        const double d = std::abs(points[i]->entropy - centroids[next[i]]);
        if (d > far_dist) {
          far = i;
          far_dist = d;
        }
      }
      if (far == n) throw DataError("k-means: cannot re-seed an empty cluster (fewer than 4 points)");
      next[far] = c;
    }
    const bool unchanged = next == labels;
    labels = std::move(next);
    update_centroids();
    result.objective_trace.push_back(objective());
    if (unchanged) {
      converged = true;
      break;
    }
  }
  result.iterations = iter;
  if (!converged) {
    std::string last;
    for (std::size_t i = 0; i < n; ++i) {
      last += (i ? "," : "") + points[i]->lyricist_id + "=" + std::to_string(labels[i] + 1);
    }
    throw DataError("k-means did not converge within " + std::to_string(max_iters) +
                    " iterations; last assignment: " + last);
  }

  std::array<std::size_t, kNonzeroGroups> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return centroids[a] != centroids[b] ? centroids[a] < centroids[b] : a < b;
  });
  std::array<std::size_t, kNonzeroGroups> rank{};
  for (std::size_t r = 0; r < kNonzeroGroups; ++r) rank[order[r]] = r;

  std::array<std::vector<const LyricistStats*>, kGroupCount> members;
  for (const std::string& id : init.groups[0]) members[0].push_back(by_id.at(id));
  for (std::size_t i = 0; i < n; ++i) members[1 + rank[labels[i]]].push_back(points[i]);
  detail::fill(result, members);
  return result;
}

inline void write_group_table_csv(const Grouping& grouping, std::ostream& out) {
  csv::write_row(out, {"group", "n_lyricists", "avg_songs", "total_songs", "avg_entropy", "min_entropy",
                       "max_entropy"});
  const std::string prefix = grouping.method == GroupingMethod::kQuantile ? "A" : "B";
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    const GroupStats& g = grouping.stats[k];
    csv::write_row(out, {prefix + std::to_string(k), std::to_string(g.n_lyricists), format_fixed(g.avg_songs, 3),
                         std::to_string(g.total_songs), format_fixed(g.avg_entropy, 3),
                         format_fixed(g.min_entropy, 3), format_fixed(g.max_entropy, 3)});
  }
}

inline void write_assignment_csv(const Grouping& grouping, const std::vector<LyricistStats>& stats,
                                 std::ostream& out) {
  const auto assignment = grouping.assignment();
  csv::write_row(out, {"lyricist_id", "group", "entropy"});
  for (const LyricistStats& s : stats) {
    auto it = assignment.find(s.lyricist_id);
    if (it == assignment.end()) continue;
    csv::write_row(out, {s.lyricist_id, std::to_string(it->second), format_fixed(s.entropy, 9)});
  }
}

inline nlohmann::ordered_json to_json(const Grouping& grouping) {
  nlohmann::ordered_json j;
  j["method"] = to_string(grouping.method);
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    const GroupStats& g = grouping.stats[k];
    nlohmann::ordered_json gj;
    gj["group"] = k;
    gj["lyricists"] = grouping.groups[k];
    gj["n_lyricists"] = g.n_lyricists;
    gj["avg_songs"] = g.avg_songs;
    gj["total_songs"] = g.total_songs;
    gj["avg_entropy"] = g.avg_entropy;
    gj["min_entropy"] = g.min_entropy;
    gj["max_entropy"] = g.max_entropy;
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  j["iterations"] = grouping.iterations;
  j["objective_trace"] = grouping.objective_trace;
  return j;
}

inline Grouping grouping_from_json(const nlohmann::json& j) {
  try {
    Grouping grouping;
    grouping.method = parse_grouping_method(j.at("method").get<std::string>());
    const auto& groups = j.at("groups");
    if (!groups.is_array() || groups.size() != kGroupCount) throw DataError("grouping must have five groups");
    for (std::size_t k = 0; k < kGroupCount; ++k) {
      const auto& gj = groups[k];
      grouping.groups[k] = gj.at("lyricists").get<std::vector<std::string>>();
      GroupStats& g = grouping.stats[k];
      g.n_lyricists = gj.at("n_lyricists").get<std::size_t>();
      g.avg_songs = gj.at("avg_songs").get<double>();
      g.total_songs = gj.at("total_songs").get<std::size_t>();
      g.avg_entropy = gj.at("avg_entropy").get<double>();
      g.min_entropy = gj.at("min_entropy").get<double>();
      g.max_entropy = gj.at("max_entropy").get<double>();
    }
    grouping.iterations = j.value("iterations", std::size_t{0});
    if (j.contains("objective_trace")) grouping.objective_trace = j["objective_trace"].get<std::vector<double>>();
    return grouping;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed grouping: ") + e.what());
  }
}

}  // namespace lsent
