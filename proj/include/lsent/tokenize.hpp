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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lsent/unicode.hpp"

namespace lsent {

/// Splits lyrics into at most max_tokens tokens, keeping the first ones.
///
/// Whitespace separates tokens. Punctuation and symbols are single-character
/// tokens, as is every character of a script written without spaces (Han,
/// kana, Thai, ...). Other runs break where the script changes; Common and
/// Inherited characters (digits, combining marks) stay in the current run.
inline std::vector<std::string> tokenize(std::string_view lyrics, std::size_t max_tokens = 512) {
  std::vector<std::string> tokens;
  if (max_tokens == 0) return tokens;

  std::u32string run;
  UScriptCode run_script = USCRIPT_COMMON;
  bool last_was_single = false;

  auto emit = [&](std::u32string_view text) {
    if (tokens.size() < max_tokens) tokens.push_back(unicode::to_utf8(text));
  };
  auto flush = [&] {
    if (!run.empty()) {
      emit(run);
      run.clear();
      last_was_single = false;
    }
    run_script = USCRIPT_COMMON;
  };

  for (char32_t c : unicode::to_utf32(lyrics)) {
    if (tokens.size() >= max_tokens) break;
    if (unicode::is_space(c)) {
      flush();
      last_was_single = false;
      continue;
    }
    const UScriptCode script = unicode::script_of(c);
    if (script == USCRIPT_INHERITED && run.empty() && last_was_single && !tokens.empty()) {
      // A combining mark after a single-character token belongs to it.
      tokens.back() += unicode::to_utf8(std::u32string_view(&c, 1));
      continue;
    }
    if (unicode::is_punct_or_symbol(c) || unicode::is_unspaced_script(script)) {
      flush();
      emit(std::u32string_view(&c, 1));
      last_was_single = true;
      continue;
    }
    if (script != USCRIPT_COMMON && script != USCRIPT_INHERITED) {
      if (!run.empty() && run_script != USCRIPT_COMMON && run_script != script) flush();
      run_script = script;
    }
    run.push_back(c);
  }
  flush();
  return tokens;
}

}  // namespace lsent
