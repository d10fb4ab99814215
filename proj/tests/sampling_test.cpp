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

#include <gtest/gtest.h>

#include <set>

#include "lsent.hpp"
#include "test_util.hpp"

namespace lsent {
namespace {

struct Fixture {
  Corpus corpus;
  std::vector<LyricistStats> stats;
  Grouping grouping;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    out.corpus = generate_hypothesis_corpus(3);
    out.stats = compute_lyricist_stats(out.corpus);
    out.grouping = group_quantile(out.stats);
    return out;
  }();
  return f;
}

void expect_well_formed(const ExperimentDataset& ds, const Fixture& f) {
  ASSERT_NO_THROW(validate_dataset(ds, &f.corpus));
  const auto assignment = f.grouping.assignment();
  for (const CandidateSplit& c : ds.candidates) {
    EXPECT_EQ(assignment.at(c.lyricist_id), c.group);
    EXPECT_TRUE(std::is_sorted(c.train.begin(), c.train.end()));
    EXPECT_TRUE(std::is_sorted(c.test.begin(), c.test.end()));
  }
}

TEST(Sampling, FixtureHasFullGroups) {
  for (std::size_t k = 0; k < kGroupCount; ++k) EXPECT_EQ(fixture().grouping.groups[k].size(), 20u);
}

TEST(Sampling, HomogenousDrawsFromOneGroup) {
  const auto& f = fixture();
  for (std::size_t k = 0; k < kGroupCount; ++k) {
    const auto ds = sample_homogenous(f.corpus, f.grouping, k, 100 + k);
    expect_well_formed(ds, f);
    for (const auto& c : ds.candidates) EXPECT_EQ(c.group, k);
    EXPECT_EQ(ds.provenance.source_groups, std::vector<std::size_t>{k});
  }
}

TEST(Sampling, HeterogenousTakesTwoPerGroupInOrder) {
  const auto& f = fixture();
  const auto ds = sample_heterogenous(f.corpus, f.grouping, 5);
  expect_well_formed(ds, f);
  for (std::size_t i = 0; i < ds.candidates.size(); ++i) EXPECT_EQ(ds.candidates[i].group, i / 2);
}

TEST(Sampling, ConstraintsHoldAcrossSeeds) {
  const auto& f = fixture();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    expect_well_formed(sample_homogenous(f.corpus, f.grouping, seed % kGroupCount, seed), f);
    expect_well_formed(sample_heterogenous(f.corpus, f.grouping, seed), f);
  }
}

TEST(Sampling, DeterministicPerSeed) {
  const auto& f = fixture();
  EXPECT_EQ(sample_homogenous(f.corpus, f.grouping, 2, 17), sample_homogenous(f.corpus, f.grouping, 2, 17));
  EXPECT_EQ(dump_dataset(sample_heterogenous(f.corpus, f.grouping, 17)),
            dump_dataset(sample_heterogenous(f.corpus, f.grouping, 17)));
  EXPECT_NE(sample_heterogenous(f.corpus, f.grouping, 17), sample_heterogenous(f.corpus, f.grouping, 18));
}

TEST(Sampling, EveryMemberEventuallyChosen) {
  // Uniform selection: over many seeds every eligible lyricist of a group shows up.
  const auto& f = fixture();
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    for (const auto& c : sample_homogenous(f.corpus, f.grouping, 3, seed).candidates) seen.insert(c.lyricist_id);
  }
  EXPECT_EQ(seen.size(), f.grouping.groups[3].size());
}

TEST(Sampling, GroupTooSmall) {
  // Trim every group 1 member to nine songs.
  const auto& f = fixture();
  const auto assignment = f.grouping.assignment();
  std::map<std::string, std::size_t> kept;
  std::vector<SongRecord> songs;
  for (const SongRecord& s : f.corpus.songs()) {
    if (assignment.at(s.lyricist_id) == 1 && kept[s.lyricist_id]++ >= 9) continue;
    songs.push_back(s);
  }
  const Corpus c(std::move(songs));
  try {
    sample_homogenous(c, f.grouping, 1, 1);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("group 1 is too small"), std::string::npos) << e.what();
  }
  EXPECT_THROW(sample_heterogenous(c, f.grouping, 1), DataError);
  EXPECT_NO_THROW(sample_homogenous(c, f.grouping, 2, 1));
}

TEST(Sampling, PlanCountsAndIds) {
  const auto& f = fixture();
  const auto homo = plan_experiment(f.corpus, f.grouping, SamplingMode::kHomogenous, std::nullopt, 10);
  ASSERT_EQ(homo.size(), 50u);
  EXPECT_EQ(homo.front().dataset_id, "quantile_homogenous_g0_r000");
  EXPECT_EQ(homo.back().dataset_id, "quantile_homogenous_g4_r009");
  EXPECT_EQ(homo[1].provenance.seed, 11u);
  const auto hetero = plan_experiment(f.corpus, f.grouping, SamplingMode::kHeterogenous, std::nullopt, 10);
  ASSERT_EQ(hetero.size(), 50u);
  EXPECT_EQ(hetero[49].dataset_id, "quantile_heterogenous_r049");
  std::set<std::string> ids;
  for (const auto& ds : homo) ids.insert(ds.dataset_id);
  for (const auto& ds : hetero) ids.insert(ds.dataset_id);
  EXPECT_EQ(ids.size(), 100u);
  EXPECT_EQ(plan_experiment(f.corpus, f.grouping, SamplingMode::kHeterogenous, 3, 10).size(), 3u);
  EXPECT_THROW(plan_experiment(f.corpus, f.grouping, SamplingMode::kHeterogenous, 0, 10), UsageError);
}

TEST(Sampling, ManifestRoundTripIsByteIdentical) {
  const auto& f = fixture();
  testing::TempDir dir;
  for (const auto& ds : plan_experiment(f.corpus, f.grouping, SamplingMode::kHeterogenous, 5, 1)) {
    const auto path = dir.path() / (ds.dataset_id + ".json");
    save_dataset(ds, path);
    const auto back = load_dataset(path);
    EXPECT_EQ(back, ds);
    EXPECT_EQ(dump_dataset(back), testing::read_text(path));
  }
}

TEST(Sampling, ValidateRejectsBrokenDatasets) {
  const auto& f = fixture();
  auto ds = sample_heterogenous(f.corpus, f.grouping, 1);
  auto dup = ds;
  dup.candidates[1].test[0] = dup.candidates[1].train[0];
  EXPECT_THROW(validate_dataset(dup), DataError);
  auto short_split = ds;
  short_split.candidates[0].validation.pop_back();
  EXPECT_THROW(validate_dataset(short_split), DataError);
  auto wrong_owner = ds;
  std::swap(wrong_owner.candidates[0].test[0], wrong_owner.candidates[1].test[0]);
  EXPECT_NO_THROW(validate_dataset(wrong_owner));
  EXPECT_THROW(validate_dataset(wrong_owner, &f.corpus), DataError);
  auto nine = ds;
  nine.candidates.pop_back();
  EXPECT_THROW(validate_dataset(nine), DataError);
}

TEST(Sampling, ModeNames) {
  EXPECT_EQ(parse_sampling_mode("homogeneous"), SamplingMode::kHomogenous);
  EXPECT_EQ(parse_sampling_mode("heterogenous"), SamplingMode::kHeterogenous);
  EXPECT_THROW(parse_sampling_mode("mixed"), UsageError);
}

}  // namespace
}  // namespace lsent
