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

// Bag-of-features extraction (word unigrams plus character n-grams) and a
// TF-IDF vectorizer fitted on training documents only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lsent/error.hpp"
#include "lsent/unicode.hpp"

namespace lsent {

struct FeatureSpec {
  std::size_t char_ngram_min = 2;
  std::size_t char_ngram_max = 3;
};

using TermCounts = std::map<std::string, double>;

/// Word features are prefixed "w:", character n-grams "cN:". N-grams run
/// over the tokens joined by single spaces, so they also span token
/// boundaries (useful for unspaced scripts tokenized per character).
inline TermCounts extract_terms(const std::vector<std::string>& tokens, const FeatureSpec& spec) {
  TermCounts counts;
  std::string joined;
  for (const std::string& token : tokens) {
    counts["w:" + token] += 1.0;
    if (!joined.empty()) joined.push_back(' ');
    joined += token;
  }
  if (spec.char_ngram_min == 0) return counts;
  const std::u32string chars = unicode::to_utf32(joined);
  for (std::size_t n = spec.char_ngram_min; n <= spec.char_ngram_max; ++n) {
    if (chars.size() < n) break;
    const std::string prefix = "c" + std::to_string(n) + ":";
    for (std::size_t i = 0; i + n <= chars.size(); ++i) {
      counts[prefix + unicode::to_utf8(std::u32string_view(chars).substr(i, n))] += 1.0;
    }
  }
  return counts;
}

/// Sparse row: (feature index, value) pairs sorted by index.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

class TfidfVectorizer {
 public:
  TfidfVectorizer() = default;

  /// Smoothed idf: ln((1 + N) / (1 + df)) + 1.
  void fit(const std::vector<TermCounts>& documents) {
    std::map<std::string, std::size_t> df;
    for (const TermCounts& doc : documents) {
      for (const auto& [term, count] : doc) ++df[term];
    }
    terms_.clear();
    idf_.clear();
    index_.clear();
    const double n = static_cast<double>(documents.size());
    for (const auto& [term, count] : df) {
      index_.emplace(term, static_cast<std::uint32_t>(terms_.size()));
      terms_.push_back(term);
      idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
  }

  /// tf·idf over known terms, L2-normalized. Unknown terms are dropped; a
  /// document with no known terms maps to the empty vector.
  SparseVector transform(const TermCounts& document) const {
    SparseVector row;
    double norm = 0.0;
    for (const auto& [term, count] : document) {
      auto it = index_.find(term);
      if (it == index_.end()) continue;
      const double value = (1.0 + std::log(count)) * idf_[it->second];
      row.emplace_back(it->second, value);
      norm += value * value;
    }
    std::sort(row.begin(), row.end());
    if (norm > 0.0) {
      const double scale = 1.0 / std::sqrt(norm);
      for (auto& entry : row) entry.second *= scale;
    }
    return row;
  }

  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<double>& idf() const noexcept { return idf_; }

  nlohmann::json to_json() const { return {{"terms", terms_}, {"idf", idf_}}; }

  static TfidfVectorizer from_json(const nlohmann::json& j) {
    TfidfVectorizer v;
    v.terms_ = j.at("terms").get<std::vector<std::string>>();
    v.idf_ = j.at("idf").get<std::vector<double>>();
    if (v.terms_.size() != v.idf_.size()) throw DataError("vectorizer: terms and idf differ in length");
    for (std::size_t i = 0; i < v.terms_.size(); ++i) v.index_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
    return v;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace lsent
