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

#include <cmath>
#include <numeric>
#include <sstream>

#include "lsent.hpp"
#include "test_util.hpp"

namespace lsent {
namespace {

using testing::make_corpus;

TEST(Entropy, KnownValues) {
  EXPECT_EQ(shannon_entropy(SingerDistribution{{"s", 10}}), 0.0);
  EXPECT_NEAR(shannon_entropy(SingerDistribution{{"a", 5}, {"b", 5}}), std::log(2.0), 1e-12);
  EXPECT_NEAR(shannon_entropy(SingerDistribution{{"a", 5}, {"b", 5}}, LogBase::kTwo), 1.0, 1e-12);
  EXPECT_NEAR(shannon_entropy(SingerDistribution{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}), std::log(4.0), 1e-12);
  EXPECT_NEAR(shannon_entropy(SingerDistribution{{"a", 29}, {"b", 1}}), 0.1461447, 1e-6);
  EXPECT_NEAR(shannon_entropy(SingerDistribution{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}, {"f", 1},
                                                 {"g", 1}, {"h", 1}, {"i", 1}, {"j", 1}},
                              LogBase::kTen),
              1.0, 1e-12);
}

TEST(Entropy, RejectsBadInput) {
  EXPECT_THROW(shannon_entropy(SingerDistribution{}), DataError);
  EXPECT_THROW(shannon_entropy(SingerDistribution{{"a", 0}, {"b", 1}}), DataError);
  EXPECT_THROW(parse_log_base("e2"), UsageError);
  EXPECT_EQ(parse_log_base("2"), LogBase::kTwo);
  EXPECT_EQ(parse_log_base("e"), LogBase::kNatural);
}

TEST(Entropy, FromCorpus) {
  const Corpus c = make_corpus({{"a", "s"}, {"a", "t"}, {"b", "s"}, {"b", "s"}, {"b", "s"}});
  const auto stats = compute_lyricist_stats(c);
  ASSERT_EQ(stats.size(), 2u);
  EXPECT_EQ(stats[0].lyricist_id, "a");
  EXPECT_NEAR(stats[0].entropy, std::log(2.0), 1e-12);
  EXPECT_EQ(stats[1].entropy, 0.0);
  EXPECT_EQ(stats[1].song_count, 3u);
}

// Random count distributions: bounds, maximum iff uniform, permutation
// invariance, and base conversion.
TEST(Entropy, PropertiesOnRandomDistributions) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = static_cast<std::size_t>(rng.between(1, 12));
    const bool uniform = rng.below(4) == 0;
    const auto level = rng.between(1, 9);
    std::vector<std::size_t> counts(m);
    for (auto& c : counts) c = uniform ? static_cast<std::size_t>(level) : static_cast<std::size_t>(rng.between(1, 30));
    SingerDistribution d;
    for (std::size_t i = 0; i < m; ++i) d["s" + std::to_string(i)] = counts[i];
    const double h = shannon_entropy(d);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(static_cast<double>(m)) + 1e-12);
    const bool all_equal = std::all_of(counts.begin(), counts.end(), [&](std::size_t c) { return c == counts[0]; });
    if (all_equal) {
      EXPECT_NEAR(h, std::log(static_cast<double>(m)), 1e-12);
    } else {
      EXPECT_LT(h, std::log(static_cast<double>(m)) - 1e-12);
    }
    if (m == 1) EXPECT_EQ(h, 0.0);

    std::vector<std::size_t> shuffled = counts;
    rng.shuffle(std::span<std::size_t>(shuffled));
    SingerDistribution p;
    for (std::size_t i = 0; i < m; ++i) p["t" + std::to_string(i)] = shuffled[i];
    EXPECT_NEAR(shannon_entropy(p), h, 1e-12);
    EXPECT_NEAR(shannon_entropy(d, LogBase::kTwo), h / std::log(2.0), 1e-12);
  }
}

// Splitting one singer's songs between two new singers never lowers entropy.
TEST(Entropy, SplittingACategoryRaisesEntropy) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    SingerDistribution d;
    const auto m = rng.between(1, 8);
    for (std::int64_t i = 0; i < m; ++i) d["s" + std::to_string(i)] = static_cast<std::size_t>(rng.between(2, 20));
    const std::string victim = "s" + std::to_string(rng.below(static_cast<std::uint64_t>(m)));
    const std::size_t total = d[victim];
    const auto part = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(total) - 1));
    SingerDistribution split = d;
    split[victim] = part;
    split["z_new"] = total - part;
    EXPECT_GT(shannon_entropy(split), shannon_entropy(d));
  }
}

// Changing the log base rescales every entropy by the same positive factor,
// so the ordering of lyricists is unchanged.
TEST(Entropy, BaseChangePreservesOrder) {
  Rng rng(100);
  std::vector<SingerDistribution> dists(200);
  for (auto& d : dists) {
    const auto m = rng.between(1, 10);
    for (std::int64_t i = 0; i < m; ++i) d["s" + std::to_string(i)] = static_cast<std::size_t>(rng.between(1, 30));
  }
  std::vector<std::size_t> idx(dists.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return shannon_entropy(dists[a]) < shannon_entropy(dists[b]); });
  for (LogBase base : {LogBase::kTwo, LogBase::kTen}) {
    for (std::size_t i = 1; i < idx.size(); ++i) {
      EXPECT_LE(shannon_entropy(dists[idx[i - 1]], base), shannon_entropy(dists[idx[i]], base));
    }
  }
}

std::vector<LyricistStats> stats_from_entropies(const std::vector<double>& values) {
  std::vector<LyricistStats> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    LyricistStats s;
    s.lyricist_id = "L" + std::to_string(i);
    s.song_count = 10;
    s.singer_counts = {{"s", 10}};
    s.entropy = values[i];
    out.push_back(s);
  }
  return out;
}

TEST(Histogram, HalfOpenBins) {
  const auto bins = entropy_histogram(stats_from_entropies({0.0, 0.1, 0.25, 0.3}), 0.25);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0].lower_edge, 0.0);
  EXPECT_EQ(bins[0].count, 2u);
  EXPECT_EQ(bins[1].lower_edge, 0.25);
  EXPECT_EQ(bins[1].count, 2u);
}

TEST(Histogram, EmptyBinsKeptAndCountsSum) {
  const auto stats = stats_from_entropies({0.0, 0.0, 1.1});
  const auto bins = entropy_histogram(stats, 0.25);
  ASSERT_EQ(bins.size(), 5u);
  EXPECT_EQ(bins[0].count, 2u);
  EXPECT_EQ(bins[1].count + bins[2].count + bins[3].count, 0u);
  EXPECT_EQ(bins[4].count, 1u);
  EXPECT_THROW(entropy_histogram(stats, 0.0), UsageError);
  EXPECT_TRUE(entropy_histogram({}, 0.5).empty());
}

TEST(EntropyOutput, CsvFormat) {
  const Corpus c = make_corpus({{"a", "s"}, {"a", "t"}});
  std::ostringstream out;
  write_entropy_csv(compute_lyricist_stats(c), out);
  EXPECT_EQ(out.str(), "lyricist_id,song_count,n_singers,entropy\na,2,2,0.693147181\n");
}

}  // namespace
}  // namespace lsent
