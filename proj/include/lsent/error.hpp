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

#include <stdexcept>
#include <string>

namespace lsent {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kPlugin = 3 };

/// Base of every error raised by the library. Carries the exit code the
/// CLI should terminate with.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ExitCode::kUsage, what) {}
};

/// Malformed input, violated precondition on data, or an impossible request
/// against the data (e.g. sampling from a group that is too small).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

class PluginError : public Error {
 public:
  explicit PluginError(const std::string& what) : Error(ExitCode::kPlugin, what) {}
};

}  // namespace lsent
