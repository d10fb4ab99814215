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

// Song records, the corpus with its lyricist and singer indices, ingestion
// from JSONL/CSV, identity remapping, the minimum-song filter, and
// near-duplicate lyricist name detection.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lsent/csv.hpp"
#include "lsent/error.hpp"
#include "lsent/levenshtein.hpp"
#include "lsent/unicode.hpp"

namespace lsent {

struct SongRecord {
  std::string song_id;
  std::string lyricist_id;
  std::string singer_id;
  std::optional<std::string> lyricist_name;
  std::optional<std::string> singer_name;
  std::string lyrics;

  friend bool operator==(const SongRecord&, const SongRecord&) = default;
};

inline bool is_blank(std::string_view text) {
  for (char32_t c : unicode::to_utf32(text)) {
    if (!unicode::is_space(c)) return false;
  }
  return true;
}

/// Immutable set of songs with per-lyricist (X_i) and per-singer (X_j)
/// indices. Index values are positions into songs().
class Corpus {
 public:
  using Index = std::map<std::string, std::vector<std::size_t>>;

  Corpus() = default;

  explicit Corpus(std::vector<SongRecord> songs) : songs_(std::move(songs)) {
    for (std::size_t i = 0; i < songs_.size(); ++i) {
      const SongRecord& song = songs_[i];
      if (song.song_id.empty()) throw DataError("song at position " + std::to_string(i) + " has an empty song_id");
      if (song.lyricist_id.empty()) throw DataError("song '" + song.song_id + "' has an empty lyricist_id");
      if (song.singer_id.empty()) throw DataError("song '" + song.song_id + "' has an empty singer_id");
      if (is_blank(song.lyrics)) throw DataError("song '" + song.song_id + "' has empty lyrics");
      if (!by_id_.emplace(song.song_id, i).second) {
        throw DataError("duplicate song_id '" + song.song_id + "'");
      }
      by_lyricist_[song.lyricist_id].push_back(i);
      by_singer_[song.singer_id].push_back(i);
    }
  }

  const std::vector<SongRecord>& songs() const noexcept { return songs_; }
  const Index& by_lyricist() const noexcept { return by_lyricist_; }
  const Index& by_singer() const noexcept { return by_singer_; }

  std::size_t song_count() const noexcept { return songs_.size(); }
  std::size_t lyricist_count() const noexcept { return by_lyricist_.size(); }
  std::size_t singer_count() const noexcept { return by_singer_.size(); }

  bool has_lyricist(const std::string& id) const { return by_lyricist_.contains(id); }

  /// Song indices of one lyricist; throws DataError for an unknown id.
  const std::vector<std::size_t>& songs_of(const std::string& lyricist_id) const {
    auto it = by_lyricist_.find(lyricist_id);
    if (it == by_lyricist_.end()) throw DataError("unknown lyricist '" + lyricist_id + "'");
    return it->second;
  }

  const SongRecord& song(const std::string& song_id) const {
    auto it = by_id_.find(song_id);
    if (it == by_id_.end()) throw DataError("unknown song_id '" + song_id + "'");
    return songs_[it->second];
  }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.songs_ == b.songs_; }

 private:
  std::vector<SongRecord> songs_;
  std::unordered_map<std::string, std::size_t> by_id_;
  Index by_lyricist_;
  Index by_singer_;
};

enum class CorpusFormat { kJsonl, kCsv };

inline CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  throw UsageError("unknown corpus format '" + std::string(name) + "' (expected jsonl or csv)");
}

/// Guesses the format from the file extension; JSONL unless it ends in .csv.
inline CorpusFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

namespace detail {

inline void check_row(const SongRecord& song, std::size_t line, std::set<std::string>& seen) {
  const std::string where = "line " + std::to_string(line) + ": ";
  if (song.song_id.empty()) throw DataError(where + "empty song_id");
  if (song.lyricist_id.empty()) throw DataError(where + "empty lyricist_id");
  if (song.singer_id.empty()) throw DataError(where + "empty singer_id");
  if (is_blank(song.lyrics)) throw DataError(where + "empty lyrics for song_id '" + song.song_id + "'");
  if (!seen.insert(song.song_id).second) {
    throw DataError(where + "duplicate song_id '" + song.song_id + "'");
  }
}

}  // namespace detail

inline Corpus read_corpus_jsonl(std::istream& in) {
  std::vector<SongRecord> songs;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError("line " + std::to_string(line_no) + ": expected a JSON object");
    auto required = [&](const char* key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) {
        throw DataError("line " + std::to_string(line_no) + ": missing string field '" + key + "'");
      }
      return it->get<std::string>();
    };
    auto optional = [&](const char* key) -> std::optional<std::string> {
      auto it = obj.find(key);
      if (it == obj.end() || it->is_null()) return std::nullopt;
      if (!it->is_string()) throw DataError("line " + std::to_string(line_no) + ": field '" + key + "' must be a string");
      return it->get<std::string>();
    };
    SongRecord song{required("song_id"), required("lyricist_id"), required("singer_id"),
                    optional("lyricist_name"), optional("singer_name"), required("lyrics")};
    detail::check_row(song, line_no, seen);
    songs.push_back(std::move(song));
  }
  return Corpus(std::move(songs));
}

inline Corpus read_corpus_csv(std::istream& in) {
  const csv::Table table = csv::read_table(in);
  auto need = [&](const char* name) {
    auto col = table.column(name);
    if (!col) throw DataError(std::string("csv header lacks required column '") + name + "'");
    return *col;
  };
  const std::size_t song_col = need("song_id"), lyricist_col = need("lyricist_id"),
                    singer_col = need("singer_id"), lyrics_col = need("lyrics");
  const auto lyricist_name_col = table.column("lyricist_name");
  const auto singer_name_col = table.column("singer_name");
  auto opt = [](const csv::Row& row, std::optional<std::size_t> col) -> std::optional<std::string> {
    if (!col || row.fields[*col].empty()) return std::nullopt;
    return row.fields[*col];
  };

  std::vector<SongRecord> songs;
  std::set<std::string> seen;
  for (const csv::Row& row : table.rows) {
    SongRecord song{row.fields[song_col], row.fields[lyricist_col], row.fields[singer_col],
                    opt(row, lyricist_name_col), opt(row, singer_name_col), row.fields[lyrics_col]};
    detail::check_row(song, row.line, seen);
    songs.push_back(std::move(song));
  }
  return Corpus(std::move(songs));
}

inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
  try {
    return format == CorpusFormat::kCsv ? read_corpus_csv(in) : read_corpus_jsonl(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

inline nlohmann::ordered_json to_json(const SongRecord& song) {
  nlohmann::ordered_json obj;
  obj["song_id"] = song.song_id;
  obj["lyricist_id"] = song.lyricist_id;
  obj["singer_id"] = song.singer_id;
  if (song.lyricist_name) obj["lyricist_name"] = *song.lyricist_name;
  if (song.singer_name) obj["singer_name"] = *song.singer_name;
  obj["lyrics"] = song.lyrics;
  return obj;
}

inline void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const SongRecord& song : corpus.songs()) out << to_json(song).dump() << '\n';
}

inline void write_corpus_csv(const Corpus& corpus, std::ostream& out) {
  csv::write_row(out, {"song_id", "lyricist_id", "singer_id", "lyricist_name", "singer_name", "lyrics"});
  for (const SongRecord& s : corpus.songs()) {
    csv::write_row(out, {s.song_id, s.lyricist_id, s.singer_id, s.lyricist_name.value_or(""),
                         s.singer_name.value_or(""), s.lyrics});
  }
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file '" + path.string() + "'");
  if (format == CorpusFormat::kCsv) {
    write_corpus_csv(corpus, out);
  } else {
    write_corpus_jsonl(corpus, out);
  }
}

/// Keeps exactly the songs whose lyricist has at least min_songs songs in the
/// input corpus. Counts are taken once, before any removal.
inline Corpus filter_min_songs(const Corpus& corpus, std::size_t min_songs = 10) {
  if (min_songs < 1) throw UsageError("min_songs must be at least 1");
  std::vector<SongRecord> kept;
  kept.reserve(corpus.song_count());
  for (const SongRecord& song : corpus.songs()) {
    if (corpus.songs_of(song.lyricist_id).size() >= min_songs) kept.push_back(song);
  }
  return Corpus(std::move(kept));
}

/// Manual identity merges: lyricist from_id is rewritten to to_id.
using Remap = std::map<std::string, std::string>;

inline Remap read_remap(std::istream& in) {
  const csv::Table table = csv::read_table(in);
  if (table.header.size() != 2) throw DataError("remap file must have exactly two columns (from_id,to_id)");
  Remap remap;
  for (const csv::Row& row : table.rows) {
    const std::string& from = row.fields[0];
    const std::string& to = row.fields[1];
    if (from.empty() || to.empty()) throw DataError("remap line " + std::to_string(row.line) + ": empty id");
    auto [it, inserted] = remap.emplace(from, to);
    if (!inserted && it->second != to) {
      throw DataError("remap line " + std::to_string(row.line) + ": '" + from + "' mapped twice");
    }
  }
  for (const auto& [from, to] : remap) {
    if (remap.contains(to) && remap.at(to) != to) {
      throw DataError("remap target '" + to + "' is itself remapped; chains are not allowed");
    }
  }
  return remap;
}

inline Remap load_remap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open remap file '" + path.string() + "'");
  return read_remap(in);
}

inline Corpus apply_remap(const Corpus& corpus, const Remap& remap) {
  if (remap.empty()) return corpus;
  std::vector<SongRecord> songs = corpus.songs();
  for (SongRecord& song : songs) {
    if (auto it = remap.find(song.lyricist_id); it != remap.end()) song.lyricist_id = it->second;
  }
  return Corpus(std::move(songs));
}

/// Display name per lyricist: the first non-empty lyricist_name in corpus
/// order. Lyricists without any name are absent.
inline std::map<std::string, std::string> lyricist_names(const Corpus& corpus) {
  std::map<std::string, std::string> names;
  for (const SongRecord& song : corpus.songs()) {
    if (song.lyricist_name && !song.lyricist_name->empty()) {
      names.emplace(song.lyricist_id, *song.lyricist_name);
    }
  }
  return names;
}

struct NameVariant {
  std::string first_id;
  std::string second_id;
  std::size_t distance = 0;

  friend bool operator==(const NameVariant&, const NameVariant&) = default;
};

struct NameVariantReport {
  std::vector<NameVariant> pairs;  // sorted by (distance, first_id, second_id)
  std::size_t skipped_unnamed = 0;
};

/// Lists every unordered pair of distinct lyricists whose NFC-normalized
/// display names are within max_dist edits. Candidates for manual review only.
inline NameVariantReport find_name_variants(const Corpus& corpus, std::size_t max_dist = 1) {
  const auto names = lyricist_names(corpus);
  NameVariantReport report;
  report.skipped_unnamed = corpus.lyricist_count() - names.size();

  std::vector<std::pair<std::string, std::u32string>> entries;
  entries.reserve(names.size());
  for (const auto& [id, name] : names) entries.emplace_back(id, unicode::to_utf32(unicode::nfc(name)));

  for (std::size_t a = 0; a < entries.size(); ++a) {
    for (std::size_t b = a + 1; b < entries.size(); ++b) {
      const auto& x = entries[a].second;
      const auto& y = entries[b].second;
      const std::size_t gap = x.size() > y.size() ? x.size() - y.size() : y.size() - x.size();
      if (gap > max_dist) continue;
      const std::size_t d = levenshtein(std::u32string_view(x), std::u32string_view(y));
      if (d <= max_dist) report.pairs.push_back({entries[a].first, entries[b].first, d});
    }
  }
  std::sort(report.pairs.begin(), report.pairs.end(), [](const NameVariant& l, const NameVariant& r) {
    return std::tie(l.distance, l.first_id, l.second_id) < std::tie(r.distance, r.first_id, r.second_id);
  });
  return report;
}

inline void write_name_variants_csv(const NameVariantReport& report, const std::map<std::string, std::string>& names,
                                    std::ostream& out) {
  csv::write_row(out, {"first_id", "first_name", "second_id", "second_name", "distance"});
  for (const NameVariant& v : report.pairs) {
    csv::write_row(out, {v.first_id, names.at(v.first_id), v.second_id, names.at(v.second_id),
                         std::to_string(v.distance)});
  }
}

}  // namespace lsent
