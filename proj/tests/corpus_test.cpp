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

#include <functional>
#include <sstream>

#include "lsent.hpp"
#include "test_util.hpp"

namespace lsent {
namespace {

using testing::make_corpus;

Corpus parse_jsonl(const std::string& text) {
  std::istringstream in(text);
  return read_corpus_jsonl(in);
}

Corpus parse_csv(const std::string& text) {
  std::istringstream in(text);
  return read_corpus_csv(in);
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(CorpusLoad, ThreeRowJsonl) {
  const Corpus c = parse_jsonl(
      R"({"song_id":"1","lyricist_id":"a","singer_id":"s","lyrics":"la la"})"
      "\n"
      R"({"song_id":"2","lyricist_id":"a","singer_id":"t","lyrics":"do re","lyricist_name":"A"})"
      "\n\n"
      R"({"song_id":"3","lyricist_id":"b","singer_id":"s","lyrics":"mi"})"
      "\n");
  EXPECT_EQ(c.song_count(), 3u);
  EXPECT_EQ(c.lyricist_count(), 2u);
  EXPECT_EQ(c.singer_count(), 2u);
  EXPECT_EQ(c.songs_of("a").size(), 2u);
  EXPECT_EQ(c.song("2").lyricist_name, std::optional<std::string>("A"));
  EXPECT_EQ(c.song("1").lyricist_name, std::nullopt);
}

TEST(CorpusLoad, DuplicateIdNamesTheIdAndLine) {
  const std::string msg = error_of([] {
    parse_jsonl(R"({"song_id":"7","lyricist_id":"a","singer_id":"s","lyrics":"x"})"
                "\n"
                R"({"song_id":"7","lyricist_id":"b","singer_id":"s","lyrics":"y"})");
  });
  EXPECT_NE(msg.find("duplicate song_id '7'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(CorpusLoad, EmptyLyricsRejected) {
  const std::string msg = error_of([] {
    parse_jsonl(R"({"song_id":"1","lyricist_id":"a","singer_id":"s","lyrics":" \t　 "})");
  });
  EXPECT_NE(msg.find("empty lyrics"), std::string::npos) << msg;
}

TEST(CorpusLoad, MalformedRowReportsLine) {
  const std::string msg = error_of([] {
    parse_jsonl(R"({"song_id":"1","lyricist_id":"a","singer_id":"s","lyrics":"x"})"
                "\n{\"song_id\": oops}\n");
  });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(error_of([] { parse_jsonl(R"({"song_id":"1","singer_id":"s","lyrics":"x"})"); }).find("lyricist_id"),
            std::string::npos);
}

TEST(CorpusLoad, CsvWithQuotedFields) {
  const Corpus c = parse_csv(
      "song_id,lyricist_id,singer_id,lyricist_name,lyrics\n"
      "1,a,s,\"Doe, Jane\",\"line one\nline \"\"two\"\"\"\n"
      "2,b,s,,plain\n");
  ASSERT_EQ(c.song_count(), 2u);
  EXPECT_EQ(c.song("1").lyrics, "line one\nline \"two\"");
  EXPECT_EQ(c.song("1").lyricist_name, std::optional<std::string>("Doe, Jane"));
  EXPECT_EQ(c.song("2").lyricist_name, std::nullopt);
}

TEST(CorpusLoad, CsvErrors) {
  EXPECT_NE(error_of([] { parse_csv("song_id,lyricist_id,lyrics\n1,a,x\n"); }).find("singer_id"), std::string::npos);
  EXPECT_NE(error_of([] { parse_csv("song_id,lyricist_id,singer_id,lyrics\n1,a,s\n"); }).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_csv("song_id,lyricist_id,singer_id,lyrics\n1,a,s,x\n1,b,s,y\n"); }).find("line 3"),
            std::string::npos);
  EXPECT_THROW(parse_csv(""), DataError);
}

TEST(CorpusLoad, MissingFileIsDataError) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl", CorpusFormat::kJsonl), DataError);
}

TEST(CorpusLoad, RoundTripJsonlAndCsv) {
  SynthParams p;
  p.n_lyricists = 6;
  p.songs_min = 2;
  p.songs_max = 4;
  p.vocab_size = 50;
  p.style_support = 5;
  p.tokens_min = 3;
  p.tokens_max = 6;
  p.seed = 11;
  Corpus original = generate_corpus(p);
  // Add awkward content: commas, quotes, newlines, non-ASCII.
  std::vector<SongRecord> songs = original.songs();
  songs[0].lyrics = "愛してる, \"baby\"\nsecond line";
  songs[1].lyricist_name = std::nullopt;
  original = Corpus(songs);

  std::ostringstream jsonl, csv;
  write_corpus_jsonl(original, jsonl);
  write_corpus_csv(original, csv);
  EXPECT_EQ(parse_jsonl(jsonl.str()), original);
  EXPECT_EQ(parse_csv(csv.str()), original);

  std::ostringstream again;
  write_corpus_jsonl(parse_jsonl(jsonl.str()), again);
  EXPECT_EQ(again.str(), jsonl.str());
}

TEST(CorpusIndex, IndicesCoverEverySongOnce) {
  const Corpus c = make_corpus({{"a", "s"}, {"a", "t"}, {"b", "t"}, {"c", "u"}, {"c", "u"}});
  std::size_t by_lyricist = 0, by_singer = 0;
  for (const auto& [id, songs] : c.by_lyricist()) by_lyricist += songs.size();
  for (const auto& [id, songs] : c.by_singer()) by_singer += songs.size();
  EXPECT_EQ(by_lyricist, c.song_count());
  EXPECT_EQ(by_singer, c.song_count());
  EXPECT_THROW(c.songs_of("zzz"), DataError);
}

Corpus lyricists_with_counts(const std::vector<std::pair<std::string, int>>& counts) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [id, n] : counts) {
    for (int i = 0; i < n; ++i) rows.emplace_back(id, "s" + std::to_string(i % 3));
  }
  return make_corpus(rows);
}

TEST(FilterMinSongs, DropsSmallLyricists) {
  const Corpus c = lyricists_with_counts({{"A", 12}, {"B", 9}});
  const Corpus f = filter_min_songs(c, 10);
  EXPECT_EQ(f.song_count(), 12u);
  EXPECT_TRUE(f.has_lyricist("A"));
  EXPECT_FALSE(f.has_lyricist("B"));
}

TEST(FilterMinSongs, IdentityAndBoundary) {
  const Corpus c = lyricists_with_counts({{"A", 3}, {"B", 1}});
  EXPECT_EQ(filter_min_songs(c, 1), c);
  const Corpus tens = lyricists_with_counts({{"A", 10}, {"B", 10}, {"C", 10}});
  EXPECT_EQ(filter_min_songs(tens, 10), tens);
  EXPECT_THROW(filter_min_songs(c, 0), UsageError);
  EXPECT_EQ(filter_min_songs(c, 50).song_count(), 0u);
}

TEST(FilterMinSongs, IdempotentOnRandomCorpora) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, int>> counts;
    const auto n = rng.between(1, 8);
    for (int i = 0; i < n; ++i) counts.emplace_back("L" + std::to_string(i), static_cast<int>(rng.between(1, 15)));
    const Corpus c = lyricists_with_counts(counts);
    const auto k = static_cast<std::size_t>(rng.between(1, 12));
    const Corpus once = filter_min_songs(c, k);
    EXPECT_EQ(filter_min_songs(once, k), once);
    for (const auto& [id, songs] : once.by_lyricist()) EXPECT_GE(songs.size(), k);
  }
}

TEST(Remap, MergesBeforeFilter) {
  // a1 and a2 are the same person under two spellings: 6 + 5 songs.
  const Corpus c = lyricists_with_counts({{"a1", 6}, {"a2", 5}, {"b", 4}});
  std::istringstream remap_csv("from_id,to_id\na2,a1\n");
  const Remap remap = read_remap(remap_csv);
  const Corpus merged = apply_remap(c, remap);
  EXPECT_EQ(merged.songs_of("a1").size(), 11u);
  EXPECT_FALSE(merged.has_lyricist("a2"));
  EXPECT_EQ(filter_min_songs(merged, 10).song_count(), 11u);
}

TEST(Remap, RejectsChainsAndBadShape) {
  std::istringstream chain("from_id,to_id\na,b\nb,c\n");
  EXPECT_THROW(read_remap(chain), DataError);
  std::istringstream wide("from_id,to_id,extra\na,b,c\n");
  EXPECT_THROW(read_remap(wide), DataError);
}

// Exponential-time recursion over the full edit lattice.
std::size_t brute_levenshtein(const std::u32string& a, const std::u32string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::u32string ta = a.substr(1), tb = b.substr(1);
  return std::min({brute_levenshtein(ta, b) + 1, brute_levenshtein(a, tb) + 1,
                   brute_levenshtein(ta, tb) + (a[0] == b[0] ? 0 : 1)});
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein("abc", "abc"), 0u);
  EXPECT_EQ(levenshtein("a", ""), 1u);
  EXPECT_EQ(levenshtein("", ""), 0u);
  EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
  EXPECT_EQ(brute_levenshtein(U"kitten", U"sitting"), 3u);
  EXPECT_EQ(levenshtein("ab", "ba"), 2u);
}

TEST(Levenshtein, CountsScalarValuesNotBytes) {
  EXPECT_EQ(levenshtein("café", "cafe"), 1u);
  EXPECT_EQ(levenshtein("秋元康", "秋元 康"), 1u);
  EXPECT_EQ(levenshtein("松本隆", "松本"), 1u);
}

TEST(Levenshtein, MetricPropertiesAgainstBruteForce) {
  Rng rng(42);
  auto random_string = [&] {
    std::u32string s;
    const auto len = rng.below(6);
    for (std::uint64_t i = 0; i < len; ++i) s.push_back(static_cast<char32_t>(U'a' + rng.below(3)));
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_string(), b = random_string(), c = random_string();
    const std::size_t ab = levenshtein(std::u32string_view(a), std::u32string_view(b));
    ASSERT_EQ(ab, brute_levenshtein(a, b));
    EXPECT_EQ(ab, levenshtein(std::u32string_view(b), std::u32string_view(a)));
    EXPECT_EQ(ab == 0, a == b);
    EXPECT_LE(levenshtein(std::u32string_view(a), std::u32string_view(c)),
              ab + levenshtein(std::u32string_view(b), std::u32string_view(c)));
  }
}

Corpus named_corpus(const std::vector<std::pair<std::string, std::optional<std::string>>>& lyricists) {
  std::vector<SongRecord> songs;
  for (std::size_t i = 0; i < lyricists.size(); ++i) {
    songs.push_back({"x" + std::to_string(i), lyricists[i].first, "s", lyricists[i].second, std::nullopt, "la"});
  }
  return Corpus(std::move(songs));
}

TEST(NameVariants, DistanceOnePairs) {
  const auto report = find_name_variants(named_corpus({{"abc", "abc"}, {"abd", "abd"}, {"xyz", "xyz"}}));
  ASSERT_EQ(report.pairs.size(), 1u);
  EXPECT_EQ(report.pairs[0], (NameVariant{"abc", "abd", 1}));
  EXPECT_EQ(report.skipped_unnamed, 0u);
}

TEST(NameVariants, ThresholdsAndSorting) {
  EXPECT_TRUE(find_name_variants(named_corpus({{"1", "abc"}, {"2", "abd"}}), 0).pairs.empty());
  const auto swapped = find_name_variants(named_corpus({{"1", "ab"}, {"2", "ba"}}), 2);
  ASSERT_EQ(swapped.pairs.size(), 1u);
  EXPECT_EQ(swapped.pairs[0].distance, 2u);

  const auto many = find_name_variants(
      named_corpus({{"d", "aaaa"}, {"c", "aaab"}, {"b", "aabb"}, {"a", "aaaa "}}), 2);
  for (std::size_t i = 1; i < many.pairs.size(); ++i) {
    const auto& p = many.pairs[i - 1];
    const auto& q = many.pairs[i];
    EXPECT_LE(std::tie(p.distance, p.first_id, p.second_id), std::tie(q.distance, q.first_id, q.second_id));
  }
  for (const auto& p : many.pairs) EXPECT_LT(p.first_id, p.second_id);
}

TEST(NameVariants, NormalizesToNfcAndSkipsUnnamed) {
  // U+00E9 versus e + U+0301: identical after NFC.
  const auto report = find_name_variants(
      named_corpus({{"1", "Ren\xC3\xA9"}, {"2", "Rene\xCC\x81"}, {"3", std::nullopt}, {"4", std::string()}}), 0);
  ASSERT_EQ(report.pairs.size(), 1u);
  EXPECT_EQ(report.pairs[0], (NameVariant{"1", "2", 0}));
  EXPECT_EQ(report.skipped_unnamed, 2u);
}

}  // namespace
}  // namespace lsent
