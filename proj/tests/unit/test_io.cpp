// Copyright 2026 The COIL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>

#include "coil/gadgets.hpp"
#include "coil/io.hpp"
#include "oracles.hpp"

namespace coil {
namespace {

TEST(Io, MdpRoundTrip) {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const auto mdp = testing::small_mdp(rng);
    const auto back = parse_mdp(mdp_to_json(mdp));
    ASSERT_EQ(back.num_states(), mdp.num_states());
    EXPECT_EQ(back.horizon(), mdp.horizon());
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      EXPECT_EQ(back.state_name(s), mdp.state_name(s));
      for (ActionIndex a = 0; a < mdp.num_actions(); ++a) {
        EXPECT_EQ(back.cost(s, a), mdp.cost(s, a));
        const auto p = mdp.transition(s, a), q = back.transition(s, a);
        EXPECT_EQ(std::vector<double>(p.begin(), p.end()), std::vector<double>(q.begin(), q.end()));
      }
    }
    EXPECT_EQ(mdp_to_json(back), mdp_to_json(mdp));
  }
}

TEST(Io, MdpErrorsCarryCoordinates) {
  const auto cover = make_cover_mdp(3);
  std::string text = mdp_to_json(cover.mdp);
  EXPECT_THROW(parse_mdp("{"), FormatError);
  EXPECT_THROW(parse_mdp("{\"H\": 1}"), FormatError);
  // Send S_0's left action back into layer 0.
  const std::string from = "\"P\":[[[[0.0,1.0,0.0,0.0,0.0]";
  const auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, from.size(), "\"P\":[[[[1.0,0.0,0.0,0.0,0.0]");
  try {
    parse_mdp(text);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos) << e.what();
  }
}

TEST(Io, PolicyExpertSeparatorGameRoundTrip) {
  const auto cover = make_cover_mdp(4);
  const auto cls = parse_policy_class(policy_class_to_json(cover.policies), 2);
  ASSERT_EQ(cls.size(), cover.policies.size());
  for (std::size_t h = 0; h < cls.size(); ++h) EXPECT_EQ(cls[h], cover.policies[h]);
  EXPECT_EQ(parse_expert(expert_to_json(cover.expert)), cover.expert);
  const SeparatorSet sep{{0, 5}};
  EXPECT_EQ(parse_separator(separator_to_json(sep)).states, sep.states);
  Rng rng(2);
  const auto game = random_game(3, rng);
  const auto back = parse_game(game_to_json(game));
  EXPECT_EQ(back.m, 3u);
  EXPECT_EQ(back.V, game.V);
  EXPECT_EQ(back.W, game.W);
  EXPECT_THROW(parse_policy_class("{\"policies\": [[0, 3]]}", 2), FormatError);
  EXPECT_THROW(parse_game("{\"m\": 2, \"V\": [[0.1]], \"W\": [[0.1]]}"), FormatError);
}

TEST(Io, DatasetJsonlRoundTrip) {
  const Dataset d{{CscExample{3, {0.0, 0.25}}, CscExample{0, {-1.5, 1e-17}}}};
  const auto text = dataset_to_jsonl(d);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const auto back = parse_dataset_jsonl(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.examples[1].state, 0u);
  EXPECT_EQ(back.examples[1].cost, d.examples[1].cost);
}

TEST(Io, FeedbackDocumentNamesKind) {
  const auto cover = make_cover_mdp(3);
  const auto text = feedback_to_json(make_feedback(cover.mdp, cover.expert, FeedbackKind::kAdvantage));
  EXPECT_NE(text.find("\"advantage\""), std::string::npos);
  EXPECT_NE(text.find("\"zeta\""), std::string::npos);
}

TEST(Io, FilesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "coil_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file(dir / "x.txt", "hello\n");
  EXPECT_EQ(read_text_file(dir / "x.txt"), "hello\n");
  EXPECT_THROW(read_text_file(dir / "missing.txt"), FormatError);
  std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace coil
