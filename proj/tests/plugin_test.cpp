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

#include "lsent.hpp"
#include "test_util.hpp"

namespace lsent {
namespace {

using namespace std::chrono_literals;

std::string fake(const std::string& mode) { return std::string("'") + LSENT_FAKE_PLUGIN + "' " + mode; }

std::string plugin_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const PluginError& e) {
    EXPECT_EQ(e.code(), ExitCode::kPlugin);
    return e.what();
  }
  ADD_FAILURE() << "expected PluginError";
  return "";
}

void full_session(const std::string& mode, std::chrono::milliseconds timeout = 10s) {
  PluginClient client(fake(mode), timeout);
  client.handshake();
  client.train({"a", "b"}, {{0, "x y"}, {1, "z w"}}, {{0, "x"}, {1, "w"}}, plugin_config_json(ClassifierConfig{}, {}));
  client.predict({"x", "w"});
  client.shutdown();
}

TEST(Plugin, TranscriptMatchesGolden) {
  testing::TempDir dir;
  const auto log = dir.path() / "session.jsonl";
  ClassifierConfig config;
  config.seed = 7;
  PluginClient client(fake("record '" + log.string() + "'"), 10s);
  EXPECT_EQ(client.handshake(), "fake-record");
  client.train({"L1", "L2"}, {{0, "sakura ame"}, {1, "雨の夜"}}, {{0, "ame \"ni\" utaeba"}, {1, "夜明け\nまで"}},
               plugin_config_json(config, nlohmann::json{{"hidden", 16}}));
  const auto probs = client.predict({"sakura", "夜"});
  EXPECT_EQ(probs, (std::vector<std::vector<double>>{{0.5, 0.5}, {0.5, 0.5}}));
  client.shutdown();
  EXPECT_EQ(testing::read_text(log), testing::read_text(std::string(LSENT_GOLDEN_DIR) + "/plugin_session.jsonl"));
}

TEST(Plugin, ExternalRunMatchesBuiltin) {
  const Corpus corpus = generate_hypothesis_corpus(4);
  const auto grouping = group_quantile(compute_lyricist_stats(corpus));
  const auto ds = sample_heterogenous(corpus, grouping, 3);
  ClassifierConfig config;
  config.max_epochs = 20;
  const ExternalRun run = external_classifier(fake("ok"), ds, corpus, config);
  EXPECT_EQ(run.plugin_name, "fake-ok");
  const auto model = train(ds, corpus, config);
  const auto items = split_items(ds, corpus, Split::kTest);
  ASSERT_EQ(run.test_probs.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto expected = predict(model, items[i].text);
    ASSERT_EQ(run.test_probs[i].size(), expected.size());
    for (std::size_t c = 0; c < expected.size(); ++c) EXPECT_NEAR(run.test_probs[i][c], expected[c], 1e-12);
  }
}

TEST(Plugin, HandshakeRefused) {
  EXPECT_NE(plugin_error([] { full_session("bad-handshake"); }).find("unsupported protocol"), std::string::npos);
}

TEST(Plugin, MalformedReply) {
  EXPECT_NE(plugin_error([] { full_session("malformed"); }).find("malformed reply"), std::string::npos);
}

TEST(Plugin, NonzeroExit) {
  EXPECT_NE(plugin_error([] { full_session("exit-nonzero"); }).find("exit status 3"), std::string::npos);
}

TEST(Plugin, ChildDiesMidSession) {
  EXPECT_NE(plugin_error([] { full_session("die"); }).find("exit status 9"), std::string::npos);
}

TEST(Plugin, Timeout) {
  const auto start = std::chrono::steady_clock::now();
  EXPECT_NE(plugin_error([] { full_session("hang", 300ms); }).find("timed out"), std::string::npos);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(Plugin, WrongShapeAndBadSum) {
  EXPECT_NE(plugin_error([] { full_session("wrong-shape"); }).find("2 entries"), std::string::npos);
  EXPECT_NE(plugin_error([] { full_session("bad-sum"); }).find("sum to 1"), std::string::npos);
}

TEST(Plugin, MissingExecutable) {
  EXPECT_FALSE(plugin_error([] { PluginClient c("/nonexistent/plugin-binary", 2s); c.handshake(); })
                   .empty());
}

TEST(Plugin, ConfigKeysInOrder) {
  const auto j = plugin_config_json(ClassifierConfig{}, nlohmann::json());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"max_tokens", "max_epochs", "patience_events", "patience_mode",
                                            "learning_rate", "seed", "options"}));
  EXPECT_TRUE(j["options"].is_object());
}

}  // namespace
}  // namespace lsent
