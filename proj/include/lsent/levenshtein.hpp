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

#include <algorithm>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lsent/unicode.hpp"

namespace lsent {

/// Unit-cost edit distance (insertions, deletions, substitutions) between two
/// sequences. Two-row dynamic program, O(|a|·|b|) time, O(min) space.
template <class T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  return levenshtein(std::span<const char32_t>(a.data(), a.size()),
                     std::span<const char32_t>(b.data(), b.size()));
}

/// Distance over Unicode scalar values of two UTF-8 strings.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(unicode::to_utf32(a)),
                     std::u32string_view(unicode::to_utf32(b)));
}

}  // namespace lsent
