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

// Lyricist-singer entropy: the Shannon entropy of how one lyricist's songs
// are spread over the singers who perform them.

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lsent/corpus.hpp"
#include "lsent/csv.hpp"
#include "lsent/error.hpp"

namespace lsent {

enum class LogBase { kNatural, kTwo, kTen };

inline LogBase parse_log_base(std::string_view name) {
  if (name == "natural" || name == "e" || name == "ln") return LogBase::kNatural;
  if (name == "2") return LogBase::kTwo;
  if (name == "10") return LogBase::kTen;
  throw UsageError("unknown log base '" + std::string(name) + "' (expected natural, 2 or 10)");
}

inline std::string to_string(LogBase base) {
  switch (base) {
    case LogBase::kTwo: return "2";
    case LogBase::kTen: return "10";
    default: return "natural";
  }
}

/// singer_id -> |X_i ∩ X_j|, ordered by singer_id.
using SingerDistribution = std::map<std::string, std::size_t>;

inline SingerDistribution singer_distribution(const Corpus& corpus, const std::string& lyricist_id) {
  SingerDistribution counts;
  for (std::size_t index : corpus.songs_of(lyricist_id)) ++counts[corpus.songs()[index].singer_id];
  return counts;
}

/// Plug-in Shannon entropy of a count distribution. Terms are accumulated in
/// key order with Kahan compensation so the result does not depend on the
/// platform's summation order.
template <class Map>
double shannon_entropy(const Map& counts, LogBase base = LogBase::kNatural) {
  if (counts.empty()) throw DataError("entropy of an empty distribution");
  double total = 0.0;
  for (const auto& [key, count] : counts) {
    if (count < 1) throw DataError("entropy: counts must be positive");
    total += static_cast<double>(count);
  }
  if (counts.size() == 1) return 0.0;

  double sum = 0.0, carry = 0.0;
  for (const auto& [key, count] : counts) {
    const double p = static_cast<double>(count) / total;
    const double term = -p * std::log(p) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  switch (base) {
    case LogBase::kTwo: return sum / std::log(2.0);
    case LogBase::kTen: return sum / std::log(10.0);
    default: return sum;
  }
}

inline double lyricist_singer_entropy(const SingerDistribution& distribution, LogBase base = LogBase::kNatural) {
  return shannon_entropy(distribution, base);
}

struct LyricistStats {
  std::string lyricist_id;
  std::size_t song_count = 0;
  SingerDistribution singer_counts;
  double entropy = 0.0;

  std::size_t singer_count() const noexcept { return singer_counts.size(); }
};

/// Stats for every lyricist of the corpus, ordered by lyricist_id.
inline std::vector<LyricistStats> compute_lyricist_stats(const Corpus& corpus, LogBase base = LogBase::kNatural) {
  std::vector<LyricistStats> stats;
  stats.reserve(corpus.lyricist_count());
  for (const auto& [id, songs] : corpus.by_lyricist()) {
    LyricistStats s;
    s.lyricist_id = id;
    s.song_count = songs.size();
    s.singer_counts = singer_distribution(corpus, id);
    s.entropy = lyricist_singer_entropy(s.singer_counts, base);
    stats.push_back(std::move(s));
  }
  return stats;
}

struct HistogramBin {
  double lower_edge = 0.0;
  std::size_t count = 0;
};

/// Half-open bins [k·w, (k+1)·w) from 0 up to the highest occupied bin,
/// empty bins included.
inline std::vector<HistogramBin> entropy_histogram(const std::vector<LyricistStats>& stats, double bin_width) {
  if (!(bin_width > 0.0)) throw UsageError("histogram bin width must be positive");
  std::vector<std::size_t> counts;
  for (const LyricistStats& s : stats) {
    const auto bin = static_cast<std::size_t>(std::floor(s.entropy / bin_width));
    if (bin >= counts.size()) counts.resize(bin + 1, 0);
    ++counts[bin];
  }
  std::vector<HistogramBin> bins;
  bins.reserve(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) bins.push_back({static_cast<double>(k) * bin_width, counts[k]});
  return bins;
}

inline std::string format_fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

inline void write_entropy_csv(const std::vector<LyricistStats>& stats, std::ostream& out) {
  csv::write_row(out, {"lyricist_id", "song_count", "n_singers", "entropy"});
  for (const LyricistStats& s : stats) {
    csv::write_row(out, {s.lyricist_id, std::to_string(s.song_count), std::to_string(s.singer_count()),
                         format_fixed(s.entropy, 9)});
  }
}

inline void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out) {
  csv::write_row(out, {"bin_lower_edge", "count"});
  for (const HistogramBin& b : bins) csv::write_row(out, {format_fixed(b.lower_edge, 6), std::to_string(b.count)});
}

}  // namespace lsent
