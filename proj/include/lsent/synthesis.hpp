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

// Synthetic corpora in which every song mixes a lyricist style, a singer
// style and a shared background, so the effect of singer variety on
// lyricist classification can be exercised without real lyrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lsent/corpus.hpp"
#include "lsent/error.hpp"
#include "lsent/rng.hpp"

namespace lsent {

/// How many distinct singers a lyricist writes for.
struct SingerCountDist {
  enum class Kind { kDegenerate, kUniform, kHeavyTailed, kCycle };
  Kind kind = Kind::kDegenerate;
  std::size_t value = 1;              // degenerate
  std::size_t min = 1, max = 1;       // uniform; heavy-tailed uses max
  double exponent = 2.0;              // heavy-tailed: P(m) ∝ m^-exponent on 1..max
  std::vector<std::size_t> cycle;     // lyricist i gets cycle[i % size]

  std::size_t upper_bound() const {
    switch (kind) {
      case Kind::kDegenerate: return value;
      case Kind::kCycle: return cycle.empty() ? 0 : *std::max_element(cycle.begin(), cycle.end());
      default: return max;
    }
  }
};

struct SynthParams {
  std::size_t n_lyricists = 100;
  std::size_t songs_min = 12;
  std::size_t songs_max = 20;
  SingerCountDist singers_per_lyricist;
  /// 0 gives every lyricist private singers; otherwise singers are drawn
  /// without replacement from a shared pool of this size.
  std::size_t singer_pool = 0;
  /// Deal songs round-robin over the lyricist's singers (entropy close to
  /// ln m) instead of drawing each song's singer independently.
  bool balanced_singers = true;
  std::size_t vocab_size = 5000;
  std::size_t style_support = 40;
  std::size_t tokens_min = 20;
  std::size_t tokens_max = 40;
  double alpha = 0.3;
  double beta = 0.6;
  std::uint64_t seed = 0;

  void validate() const {
    auto fail = [](const std::string& what) { throw DataError("invalid synthesis parameters: " + what); };
    if (n_lyricists == 0) fail("n_lyricists must be positive");
    if (songs_min == 0 || songs_min > songs_max) fail("songs range must be positive and ordered");
    if (tokens_min == 0 || tokens_min > tokens_max) fail("tokens range must be positive and ordered");
    if (vocab_size == 0) fail("vocab_size must be positive");
    if (style_support == 0 || style_support > vocab_size) fail("style_support must be in 1..vocab_size");
    if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta > 1.0 + 1e-12) fail("need alpha, beta >= 0 and alpha + beta <= 1");
    const SingerCountDist& d = singers_per_lyricist;
    using Kind = SingerCountDist::Kind;
    if (d.kind == Kind::kDegenerate && d.value == 0) fail("singer count must be positive");
    if (d.kind == Kind::kUniform && (d.min == 0 || d.min > d.max)) fail("singer count range must be positive and ordered");
    if (d.kind == Kind::kHeavyTailed && (d.max == 0 || !(d.exponent > 0.0))) fail("heavy-tailed singer count needs max >= 1 and exponent > 0");
    if (d.kind == Kind::kCycle && (d.cycle.empty() || std::find(d.cycle.begin(), d.cycle.end(), 0u) != d.cycle.end())) {
      fail("singer count cycle must be non-empty and positive");
    }
    if (singer_pool > 0 && d.upper_bound() > singer_pool) fail("singer_pool smaller than the largest singer count");
  }
};

namespace detail {

/// Sparse categorical distribution: most mass on a random subset of the
/// vocabulary, exponential(1) weights.
struct StyleDist {
  std::vector<std::uint32_t> tokens;
  std::vector<double> cumulative;

  std::uint32_t sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return tokens[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                    static_cast<std::ptrdiff_t>(tokens.size()) - 1))];
  }
};

inline StyleDist make_style(const SynthParams& p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> vocab(p.vocab_size);
  for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i] = static_cast<std::uint32_t>(i);
  rng.partial_shuffle(std::span<std::uint32_t>(vocab), p.style_support);
  StyleDist d;
  d.tokens.assign(vocab.begin(), vocab.begin() + static_cast<std::ptrdiff_t>(p.style_support));
  double total = 0.0;
  for (std::size_t i = 0; i < d.tokens.size(); ++i) {
    total += -std::log1p(-rng.uniform());
    d.cumulative.push_back(total);
  }
  return d;
}

inline std::size_t draw_singer_count(const SynthParams& p, std::size_t lyricist, Rng& rng) {
  const SingerCountDist& d = p.singers_per_lyricist;
  switch (d.kind) {
    case SingerCountDist::Kind::kDegenerate: return d.value;
    case SingerCountDist::Kind::kUniform: return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(d.min), static_cast<std::int64_t>(d.max)));
    case SingerCountDist::Kind::kCycle: return d.cycle[lyricist % d.cycle.size()];
    case SingerCountDist::Kind::kHeavyTailed: {
      std::vector<double> cumulative;
      double total = 0.0;
      for (std::size_t m = 1; m <= d.max; ++m) {
        total += std::pow(static_cast<double>(m), -d.exponent);
        cumulative.push_back(total);
      }
      const double u = rng.uniform() * total;
      return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin()) + 1;
    }
  }
  return 1;
}

inline std::string numbered(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05zu", prefix, n);
  return buf;
}

inline std::string synthetic_name(Rng& rng) {
  static constexpr std::array<std::string_view, 30> kSyllables{
      "ka", "ki", "ku", "ke", "ko", "sa", "shi", "su", "se", "so", "ta", "chi", "tsu", "te", "to",
      "na", "ni", "nu", "ne", "no", "ma", "mi", "mu", "me", "mo", "ra", "ri", "ru", "re", "ro"};
  auto word = [&](std::size_t syllables) {
    std::string w;
    for (std::size_t i = 0; i < syllables; ++i) w += kSyllables[rng.below(kSyllables.size())];
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
  };
  const std::string family = word(2 + rng.below(2));
  return family + " " + word(2 + rng.below(2));
}

// Stream tags for substream derivation.
inline constexpr std::uint64_t kLyricistStyleStream = 1ULL << 40;
inline constexpr std::uint64_t kSingerStyleStream = 2ULL << 40;
inline constexpr std::uint64_t kSongStream = 3ULL << 40;

}  // namespace detail

/// Songs are generated lyricist by lyricist, each from its own substream.
inline Corpus generate_corpus(const SynthParams& p) {
  p.validate();
  std::vector<SongRecord> songs;
  std::vector<detail::StyleDist> singer_styles;
  auto singer_style = [&](std::size_t singer) -> const detail::StyleDist& {
    while (singer_styles.size() <= singer) {
      singer_styles.push_back(detail::make_style(p, substream(p.seed, detail::kSingerStyleStream + singer_styles.size())));
    }
    return singer_styles[singer];
  };
  if (p.singer_pool > 0) singer_style(p.singer_pool - 1);

  std::size_t next_singer = 0;
  std::size_t song_number = 0;
  for (std::size_t l = 0; l < p.n_lyricists; ++l) {
    Rng rng(substream(p.seed, detail::kSongStream + l));
    const detail::StyleDist lyricist_style = detail::make_style(p, substream(p.seed, detail::kLyricistStyleStream + l));
    const std::string lyricist_id = detail::numbered("L", l + 1);
    const std::string lyricist_name = detail::synthetic_name(rng);

    const std::size_t m = detail::draw_singer_count(p, l, rng);
    std::vector<std::size_t> singers;
    if (p.singer_pool == 0) {
      for (std::size_t s = 0; s < m; ++s) singers.push_back(next_singer++);
    } else {
      std::vector<std::size_t> pool(p.singer_pool);
      for (std::size_t s = 0; s < pool.size(); ++s) pool[s] = s;
      rng.partial_shuffle(std::span<std::size_t>(pool), m);
      singers.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    }

    const auto n_songs = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(p.songs_min), static_cast<std::int64_t>(p.songs_max)));
    std::vector<std::size_t> song_singers(n_songs);
    if (p.balanced_singers) {
      rng.shuffle(std::span<std::size_t>(singers));
      for (std::size_t k = 0; k < n_songs; ++k) song_singers[k] = singers[k % singers.size()];
      rng.shuffle(std::span<std::size_t>(song_singers));
    } else {
      for (std::size_t k = 0; k < n_songs; ++k) song_singers[k] = singers[rng.below(singers.size())];
    }

    for (std::size_t k = 0; k < n_songs; ++k) {
      const detail::StyleDist& voice = singer_style(song_singers[k]);
      const auto n_tokens = static_cast<std::size_t>(
          rng.between(static_cast<std::int64_t>(p.tokens_min), static_cast<std::int64_t>(p.tokens_max)));
      std::string lyrics;
      for (std::size_t t = 0; t < n_tokens; ++t) {
        const double u = rng.uniform();
        std::uint32_t token;
        if (u < p.alpha) {
          token = lyricist_style.sample(rng);
        } else if (u < p.alpha + p.beta) {
          token = voice.sample(rng);
        } else {
          token = static_cast<std::uint32_t>(rng.below(p.vocab_size));
        }
        char word[16];
        std::snprintf(word, sizeof word, "w%04u", static_cast<unsigned>(token));
        if (!lyrics.empty()) lyrics.push_back(' ');
        lyrics += word;
      }
      const std::string singer_id = detail::numbered("S", song_singers[k] + 1);
      songs.push_back({detail::numbered("X", ++song_number), lyricist_id, singer_id, lyricist_name,
                       "Singer " + singer_id.substr(1), std::move(lyrics)});
    }
  }
  return Corpus(std::move(songs));
}

/// Fixed recipe used as the acceptance fixture: 100 lyricists with 16-20
/// songs each and 1, 2, 4, 8 or 16 private singers (20 lyricists apiece), so
/// entropies span 0 to about ln 16; singer style dominates lyricist style.
inline SynthParams hypothesis_params(std::uint64_t seed) {
  SynthParams p;
  p.n_lyricists = 100;
  p.songs_min = 16;
  p.songs_max = 20;
  p.singers_per_lyricist.kind = SingerCountDist::Kind::kCycle;
  p.singers_per_lyricist.cycle = {1, 2, 4, 8, 16};
  p.singer_pool = 0;
  p.balanced_singers = true;
  p.vocab_size = 5000;
  p.style_support = 40;
  p.tokens_min = 20;
  p.tokens_max = 40;
  p.alpha = 0.3;
  p.beta = 0.6;
  p.seed = seed;
  return p;
}

inline Corpus generate_hypothesis_corpus(std::uint64_t seed) { return generate_corpus(hypothesis_params(seed)); }

inline SynthParams synth_params_from_json(const nlohmann::json& j, SynthParams p = {}) {
  try {
    if (j.contains("n_lyricists")) p.n_lyricists = j["n_lyricists"].get<std::size_t>();
    if (j.contains("songs_per_lyricist")) {
      const auto& r = j["songs_per_lyricist"];
      p.songs_min = r.at(0).get<std::size_t>();
      p.songs_max = r.at(1).get<std::size_t>();
    }
    if (j.contains("tokens_per_song")) {
      const auto& r = j["tokens_per_song"];
      p.tokens_min = r.at(0).get<std::size_t>();
      p.tokens_max = r.at(1).get<std::size_t>();
    }
    if (j.contains("singers_per_lyricist")) {
      const auto& d = j["singers_per_lyricist"];
      const std::string kind = d.at("kind").get<std::string>();
      SingerCountDist dist;
      if (kind == "degenerate") {
        dist.kind = SingerCountDist::Kind::kDegenerate;
        dist.value = d.at("value").get<std::size_t>();
      } else if (kind == "uniform") {
        dist.kind = SingerCountDist::Kind::kUniform;
        dist.min = d.at("min").get<std::size_t>();
        dist.max = d.at("max").get<std::size_t>();
      } else if (kind == "heavy_tailed") {
        dist.kind = SingerCountDist::Kind::kHeavyTailed;
        dist.max = d.at("max").get<std::size_t>();
        dist.exponent = d.value("exponent", 2.0);
      } else if (kind == "cycle") {
        dist.kind = SingerCountDist::Kind::kCycle;
        dist.cycle = d.at("values").get<std::vector<std::size_t>>();
      } else {
        throw DataError("unknown singers_per_lyricist kind '" + kind + "'");
      }
      p.singers_per_lyricist = std::move(dist);
    }
    if (j.contains("singer_pool")) p.singer_pool = j["singer_pool"].get<std::size_t>();
    if (j.contains("balanced_singers")) p.balanced_singers = j["balanced_singers"].get<bool>();
    if (j.contains("vocab_size")) p.vocab_size = j["vocab_size"].get<std::size_t>();
    if (j.contains("style_support")) p.style_support = j["style_support"].get<std::size_t>();
    if (j.contains("alpha")) p.alpha = j["alpha"].get<double>();
    if (j.contains("beta")) p.beta = j["beta"].get<double>();
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid synthesis parameters: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace lsent
