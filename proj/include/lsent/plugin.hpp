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

// Client side of the external classifier protocol (version 1): line-delimited
// JSON over the child's stdin/stdout.
//
//   -> {"cmd":"handshake","protocol":1}            <- {"ok":true,"name":...}
//   -> {"cmd":"train","candidates":[...],"train":[{"label":k,"text":...}],
//       "val":[...],"config":{...}}                 <- {"ok":true}
//   -> {"cmd":"predict","texts":[...]}             <- {"ok":true,"probs":[[...],...]}
//   -> {"cmd":"shutdown"}                          <- exit status 0
//
// The child's stdin and stdout are both one end of a socketpair so a dead
// child surfaces as an error instead of SIGPIPE.

#include <sys/socket.h>
#include <sys/wait.h>
#include <poll.h>
#include <signal.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lsent/classifier.hpp"
#include "lsent/corpus.hpp"
#include "lsent/error.hpp"
#include "lsent/sampling.hpp"

namespace lsent {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::chrono::milliseconds kDefaultPluginTimeout{10 * 60 * 1000};

/// A child process running `/bin/sh -c command`.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw PluginError(std::string("socketpair failed: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      ::close(fds[0]);
      ::close(fds[1]);
      throw PluginError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      ::setpgid(0, 0);
      ::dup2(fds[1], STDIN_FILENO);
      ::dup2(fds[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid_, pid_);
    ::close(fds[1]);
    fd_ = fds[0];
  }

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  ~Subprocess() {
    if (fd_ >= 0) ::close(fd_);
    if (pid_ > 0) ::kill(-pid_, SIGKILL);  // the shell's own children too
    if (pid_ > 0 && !status_) {
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

  void write_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw PluginError("plug-in closed its input (" + describe_exit() + ")");
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  /// Next newline-terminated line, or std::nullopt at end of stream.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
        std::string line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        return line;
      }
      if (eof_) {
        if (buffer_.empty()) return std::nullopt;
        std::string line = std::move(buffer_);
        buffer_.clear();
        return line;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) throw PluginError("plug-in timed out after " + std::to_string(timeout.count()) + " ms");
      pollfd pfd{fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1 << 30)));
      if (ready < 0 && errno != EINTR) throw PluginError(std::string("poll failed: ") + std::strerror(errno));
      if (ready <= 0) continue;
      char chunk[65536];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        eof_ = true;
      } else if (n == 0) {
        eof_ = true;
      } else {
        buffer_.append(chunk, static_cast<std::size_t>(n));
      }
    }
  }

  /// Waits for exit; kills the child if it outlives the timeout.
  int wait(std::chrono::milliseconds timeout) {
    if (status_) return *status_;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      int status = 0;
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_) {
        status_ = status;
        return status;
      }
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(-pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        status_ = status;
        throw PluginError("plug-in did not exit within " + std::to_string(timeout.count()) + " ms");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }

  std::string describe_exit() {
    try {
      const int status = wait(std::chrono::milliseconds(2000));
      if (WIFEXITED(status)) return "exit status " + std::to_string(WEXITSTATUS(status));
      if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
      return "status " + std::to_string(status);
    } catch (const PluginError& e) {
      return e.what();
    }
  }

 private:
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
  bool eof_ = false;
  std::optional<int> status_;
};

/// One plug-in session. Messages are serialized with a fixed key order so a
/// session transcript is byte-stable.
class PluginClient {
 public:
  PluginClient(const std::string& command, std::chrono::milliseconds timeout = kDefaultPluginTimeout)
      : process_(command), timeout_(timeout) {}

  std::string handshake() {
    nlohmann::ordered_json msg;
    msg["cmd"] = "handshake";
    msg["protocol"] = kProtocolVersion;
    const nlohmann::json reply = exchange(msg, "handshake");
    auto it = reply.find("name");
    return it != reply.end() && it->is_string() ? it->get<std::string>() : std::string("unnamed");
  }

  void train(const std::vector<std::string>& candidates, const std::vector<LabeledText>& train_items,
             const std::vector<LabeledText>& val_items, const nlohmann::ordered_json& config) {
    nlohmann::ordered_json msg;
    msg["cmd"] = "train";
    msg["candidates"] = candidates;
    msg["train"] = items_json(train_items);
    msg["val"] = items_json(val_items);
    msg["config"] = config;
    exchange(msg, "train");
    classes_ = candidates.size();
  }

  std::vector<std::vector<double>> predict(const std::vector<std::string>& texts) {
    nlohmann::ordered_json msg;
    msg["cmd"] = "predict";
    msg["texts"] = texts;
    const nlohmann::json reply = exchange(msg, "predict");
    auto it = reply.find("probs");
    if (it == reply.end() || !it->is_array() || it->size() != texts.size()) {
      throw PluginError("protocol violation: predict reply needs 'probs' with one row per text");
    }
    std::vector<std::vector<double>> probs;
    for (const auto& row : *it) {
      if (!row.is_array() || row.size() != classes_) {
        throw PluginError("protocol violation: probability row must have " + std::to_string(classes_) + " entries");
      }
      std::vector<double> p;
      double sum = 0.0;
      for (const auto& v : row) {
        if (!v.is_number()) throw PluginError("protocol violation: non-numeric probability");
        const double x = v.get<double>();
        if (!std::isfinite(x) || x < 0.0 || x > 1.0) throw PluginError("protocol violation: probability out of [0,1]");
        p.push_back(x);
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-6) throw PluginError("protocol violation: probabilities do not sum to 1");
      probs.push_back(std::move(p));
    }
    return probs;
  }

  /// Sends shutdown and requires exit status 0.
  void shutdown() {
    nlohmann::ordered_json msg;
    msg["cmd"] = "shutdown";
    process_.write_line(msg.dump());
    const int status = process_.wait(timeout_);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      throw PluginError("plug-in exited abnormally after shutdown (" + process_.describe_exit() + ")");
    }
  }

 private:
  static nlohmann::ordered_json items_json(const std::vector<LabeledText>& items) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const LabeledText& item : items) {
      nlohmann::ordered_json o;
      o["label"] = item.label;
      o["text"] = item.text;
      arr.push_back(std::move(o));
    }
    return arr;
  }

  nlohmann::json exchange(const nlohmann::ordered_json& msg, const char* what) {
    process_.write_line(msg.dump());
    const auto line = process_.read_line(timeout_);
    if (!line) {
      throw PluginError(std::string("plug-in closed its output during ") + what + " (" + process_.describe_exit() + ")");
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(*line);
    } catch (const nlohmann::json::parse_error&) {
      throw PluginError(std::string("protocol violation: malformed reply to ") + what + ": " + line->substr(0, 200));
    }
    if (!reply.is_object() || !reply.contains("ok") || !reply["ok"].is_boolean()) {
      throw PluginError(std::string("protocol violation: reply to ") + what + " lacks boolean 'ok'");
    }
    if (!reply["ok"].get<bool>()) {
      const std::string error = reply.contains("error") && reply["error"].is_string()
                                    ? reply["error"].get<std::string>()
                                    : std::string("unspecified error");
      throw PluginError(std::string("plug-in reported an error during ") + what + ": " + error);
    }
    return reply;
  }

  Subprocess process_;
  std::chrono::milliseconds timeout_;
  std::size_t classes_ = 0;
};

/// Result of an external training run: probabilities for the dataset's test
/// songs in split_items() order.
struct ExternalRun {
  std::string plugin_name;
  std::vector<std::vector<double>> test_probs;
};

inline nlohmann::ordered_json plugin_config_json(const ClassifierConfig& config, const nlohmann::json& options) {
  nlohmann::ordered_json j;
  j["max_tokens"] = config.max_tokens;
  j["max_epochs"] = config.max_epochs;
  j["patience_events"] = config.patience_events;
  j["patience_mode"] = to_string(config.patience_mode);
  j["learning_rate"] = config.learning_rate;
  j["seed"] = config.seed;
  j["options"] = options.is_null() ? nlohmann::ordered_json::object() : nlohmann::ordered_json(options);
  return j;
}

/// Runs one full plug-in session (handshake, train, predict test split,
/// shutdown) for a dataset.
inline ExternalRun external_classifier(const std::string& command, const ExperimentDataset& dataset,
                                       const Corpus& corpus, const ClassifierConfig& config,
                                       const nlohmann::json& options = nlohmann::json::object(),
                                       std::chrono::milliseconds timeout = kDefaultPluginTimeout) {
  validate_dataset(dataset, &corpus);
  PluginClient client(command, timeout);
  ExternalRun run;
  run.plugin_name = client.handshake();
  client.train(candidate_ids(dataset), split_items(dataset, corpus, Split::kTrain),
               split_items(dataset, corpus, Split::kValidation), plugin_config_json(config, options));
  std::vector<std::string> texts;
  for (LabeledText& item : split_items(dataset, corpus, Split::kTest)) texts.push_back(std::move(item.text));
  run.test_probs = client.predict(texts);
  client.shutdown();
  return run;
}

}  // namespace lsent
