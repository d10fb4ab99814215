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

// Builds the 10-lyricist, 100-song experiment datasets with their fixed
// 6/2/2 train/validation/test split per lyricist.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lsent/corpus.hpp"
#include "lsent/error.hpp"
#include "lsent/grouping.hpp"
#include "lsent/rng.hpp"

namespace lsent {

inline constexpr std::size_t kCandidates = 10;
inline constexpr std::size_t kSongsPerCandidate = 10;
inline constexpr std::size_t kTrainSongs = 6;
inline constexpr std::size_t kValidationSongs = 2;
inline constexpr std::size_t kTestSongs = 2;
inline constexpr std::size_t kHeterogenousPerGroup = 2;

enum class SamplingMode { kHomogenous, kHeterogenous };

inline std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::kHomogenous ? "homogenous" : "heterogenous";
}

inline SamplingMode parse_sampling_mode(std::string_view name) {
  if (name == "homogenous" || name == "homogeneous") return SamplingMode::kHomogenous;
  if (name == "heterogenous" || name == "heterogeneous") return SamplingMode::kHeterogenous;
  throw UsageError("unknown sampling mode '" + std::string(name) + "' (expected homogenous or heterogenous)");
}

inline std::size_t default_repetitions(SamplingMode mode) { return mode == SamplingMode::kHomogenous ? 10 : 50; }

struct CandidateSplit {
  std::string lyricist_id;
  std::size_t group = 0;
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;

  friend bool operator==(const CandidateSplit&, const CandidateSplit&) = default;
};

struct DatasetProvenance {
  GroupingMethod grouping = GroupingMethod::kQuantile;
  SamplingMode mode = SamplingMode::kHomogenous;
  std::vector<std::size_t> source_groups;
  std::uint64_t seed = 0;

  friend bool operator==(const DatasetProvenance&, const DatasetProvenance&) = default;
};

/// One classification task. The one-hot target of a song is the position of
/// its lyricist in `candidates`.
struct ExperimentDataset {
  std::string dataset_id;
  std::vector<CandidateSplit> candidates;
  DatasetProvenance provenance;

  friend bool operator==(const ExperimentDataset&, const ExperimentDataset&) = default;
};

/// Throws DataError unless the dataset has 10 distinct candidates with
/// disjoint 6/2/2 splits. With a corpus, also checks every song exists and
/// belongs to its candidate.
inline void validate_dataset(const ExperimentDataset& ds, const Corpus* corpus = nullptr) {
  const std::string where = "dataset '" + ds.dataset_id + "': ";
  if (ds.candidates.size() != kCandidates) {
    throw DataError(where + "expected 10 candidate lyricists, got " + std::to_string(ds.candidates.size()));
  }
  std::set<std::string> lyricists, songs;
  for (const CandidateSplit& c : ds.candidates) {
    if (!lyricists.insert(c.lyricist_id).second) throw DataError(where + "lyricist '" + c.lyricist_id + "' repeated");
    if (c.train.size() != kTrainSongs || c.validation.size() != kValidationSongs || c.test.size() != kTestSongs) {
      throw DataError(where + "lyricist '" + c.lyricist_id + "' split is not 6/2/2");
    }
    for (const auto* split : {&c.train, &c.validation, &c.test}) {
      for (const std::string& id : *split) {
        if (!songs.insert(id).second) throw DataError(where + "song '" + id + "' appears twice");
        if (corpus && corpus->song(id).lyricist_id != c.lyricist_id) {
          throw DataError(where + "song '" + id + "' is not by lyricist '" + c.lyricist_id + "'");
        }
      }
    }
  }
}

namespace detail {

inline std::vector<std::string> eligible_members(const Corpus& corpus, const Grouping& grouping, std::size_t group) {
  std::vector<std::string> out;
  for (const std::string& id : grouping.groups.at(group)) {
    if (corpus.has_lyricist(id) && corpus.songs_of(id).size() >= kSongsPerCandidate) out.push_back(id);
  }
  return out;
}

inline CandidateSplit draw_songs(const Corpus& corpus, const std::string& lyricist_id, std::size_t group, Rng& rng) {
  std::vector<std::string> pool;
  for (std::size_t index : corpus.songs_of(lyricist_id)) pool.push_back(corpus.songs()[index].song_id);
  std::sort(pool.begin(), pool.end());
  rng.partial_shuffle(std::span<std::string>(pool), kSongsPerCandidate);
  pool.resize(kSongsPerCandidate);
  rng.shuffle(std::span<std::string>(pool));

  CandidateSplit c;
  c.lyricist_id = lyricist_id;
  c.group = group;
  auto take = [&](std::size_t from, std::size_t count) {
    std::vector<std::string> part(pool.begin() + static_cast<std::ptrdiff_t>(from),
                                  pool.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(part.begin(), part.end());
    return part;
  };
  c.train = take(0, kTrainSongs);
  c.validation = take(kTrainSongs, kValidationSongs);
  c.test = take(kTrainSongs + kValidationSongs, kTestSongs);
  return c;
}

inline std::vector<std::string> draw_lyricists(const Corpus& corpus, const Grouping& grouping, std::size_t group,
                                               std::size_t count, Rng& rng) {
  std::vector<std::string> eligible = eligible_members(corpus, grouping, group);
  if (eligible.size() < count) {
    throw DataError("group " + std::to_string(group) + " is too small: " + std::to_string(eligible.size()) +
                    " lyricists with at least 10 songs, need " + std::to_string(count));
  }
  rng.partial_shuffle(std::span<std::string>(eligible), count);
  eligible.resize(count);
  return eligible;
}

inline std::string dataset_name(const DatasetProvenance& p) {
  std::string name = to_string(p.grouping) + "_" + to_string(p.mode);
  if (p.mode == SamplingMode::kHomogenous && !p.source_groups.empty()) {
    name += "_g" + std::to_string(p.source_groups.front());
  }
  return name + "_s" + std::to_string(p.seed);
}

}  // namespace detail

/// Ten lyricists drawn uniformly without replacement from one group, then ten
/// songs per lyricist, then a uniform 6/2/2 split. Determined by rng_seed.
inline ExperimentDataset sample_homogenous(const Corpus& corpus, const Grouping& grouping, std::size_t group_index,
                                           std::uint64_t rng_seed) {
  if (group_index >= kGroupCount) throw UsageError("group index must be in 0..4");
  Rng rng(rng_seed);
  ExperimentDataset ds;
  ds.provenance = {grouping.method, SamplingMode::kHomogenous, {group_index}, rng_seed};
  for (const std::string& id : detail::draw_lyricists(corpus, grouping, group_index, kCandidates, rng)) {
    ds.candidates.push_back(detail::draw_songs(corpus, id, group_index, rng));
  }
  ds.dataset_id = detail::dataset_name(ds.provenance);
  return ds;
}

/// Two lyricists from each of the five groups, concatenated in group order.
inline ExperimentDataset sample_heterogenous(const Corpus& corpus, const Grouping& grouping,
                                             std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  ExperimentDataset ds;
  ds.provenance = {grouping.method, SamplingMode::kHeterogenous, {0, 1, 2, 3, 4}, rng_seed};
  std::vector<std::pair<std::string, std::size_t>> chosen;
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    for (std::string& id : detail::draw_lyricists(corpus, grouping, k, kHeterogenousPerGroup, rng)) {
      chosen.emplace_back(std::move(id), k);
    }
  }
  for (const auto& [id, k] : chosen) ds.candidates.push_back(detail::draw_songs(corpus, id, k, rng));
  ds.dataset_id = detail::dataset_name(ds.provenance);
  return ds;
}

/// Homogenous: `repetitions` datasets for each group 0..4 (5·r in total,
/// group-major). Heterogenous: `repetitions` datasets. Repetition r uses seed
/// base_seed + r; repetitions are drawn independently of each other.
inline std::vector<ExperimentDataset> plan_experiment(const Corpus& corpus, const Grouping& grouping,
                                                      SamplingMode mode, std::optional<std::size_t> repetitions,
                                                      std::uint64_t base_seed) {
  const std::size_t reps = repetitions.value_or(default_repetitions(mode));
  if (reps == 0) throw UsageError("repetitions must be positive");
  std::vector<ExperimentDataset> plan;
  auto suffix = [](std::size_t r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_r%03zu", r);
    return std::string(buf);
  };
  if (mode == SamplingMode::kHomogenous) {
    for (std::size_t k = 0; k < kGroupCount; ++k) {
      for (std::size_t r = 0; r < reps; ++r) {
        ExperimentDataset ds = sample_homogenous(corpus, grouping, k, base_seed + r);
        ds.dataset_id = to_string(grouping.method) + "_homogenous_g" + std::to_string(k) + suffix(r);
        plan.push_back(std::move(ds));
      }
    }
  } else {
    for (std::size_t r = 0; r < reps; ++r) {
      ExperimentDataset ds = sample_heterogenous(corpus, grouping, base_seed + r);
      ds.dataset_id = to_string(grouping.method) + "_heterogenous" + suffix(r);
      plan.push_back(std::move(ds));
    }
  }
  return plan;
}

inline nlohmann::ordered_json to_json(const ExperimentDataset& ds) {
  nlohmann::ordered_json j;
  j["dataset_id"] = ds.dataset_id;
  nlohmann::ordered_json candidates = nlohmann::ordered_json::array();
  for (const CandidateSplit& c : ds.candidates) {
    nlohmann::ordered_json cj;
    cj["lyricist_id"] = c.lyricist_id;
    cj["group"] = c.group;
    cj["train"] = c.train;
    cj["validation"] = c.validation;
    cj["test"] = c.test;
    candidates.push_back(std::move(cj));
  }
  j["candidates"] = std::move(candidates);
  nlohmann::ordered_json p;
  p["grouping"] = to_string(ds.provenance.grouping);
  p["mode"] = to_string(ds.provenance.mode);
  p["source_groups"] = ds.provenance.source_groups;
  p["seed"] = ds.provenance.seed;
  j["provenance"] = std::move(p);
  return j;
}

inline ExperimentDataset dataset_from_json(const nlohmann::json& j) {
  try {
    ExperimentDataset ds;
    ds.dataset_id = j.at("dataset_id").get<std::string>();
    for (const auto& cj : j.at("candidates")) {
      CandidateSplit c;
      c.lyricist_id = cj.at("lyricist_id").get<std::string>();
      c.group = cj.at("group").get<std::size_t>();
      c.train = cj.at("train").get<std::vector<std::string>>();
      c.validation = cj.at("validation").get<std::vector<std::string>>();
      c.test = cj.at("test").get<std::vector<std::string>>();
      ds.candidates.push_back(std::move(c));
    }
    const auto& p = j.at("provenance");
    ds.provenance.grouping = parse_grouping_method(p.at("grouping").get<std::string>());
    ds.provenance.mode = parse_sampling_mode(p.at("mode").get<std::string>());
    ds.provenance.source_groups = p.at("source_groups").get<std::vector<std::size_t>>();
    ds.provenance.seed = p.at("seed").get<std::uint64_t>();
    validate_dataset(ds);
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed dataset manifest: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed dataset manifest: ") + e.what());
  }
}

inline std::string dump_dataset(const ExperimentDataset& ds) { return to_json(ds).dump(2) + "\n"; }

inline void save_dataset(const ExperimentDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset manifest '" + path.string() + "'");
  out << dump_dataset(ds);
}

inline ExperimentDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return dataset_from_json(j);
}

}  // namespace lsent
