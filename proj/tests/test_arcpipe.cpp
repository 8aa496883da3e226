#include <doctest.h>

#include <algorithm>
#include <map>
#include <memory>

#include "emoarc/arcpipe.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/oracle.hpp"
#include "emoarc/policy/synth.hpp"
#include "emoarc/rng.hpp"
#include "test_support.hpp"

using namespace emoarc;

namespace {

// Answers from a fixed table keyed by sentence; unknown sentences get "".
class ScriptedOracle final : public ReactionOracle {
 public:
  explicit ScriptedOracle(std::map<std::string, Reaction, std::less<>> table) : table_(std::move(table)) {}
  Reaction react(std::string_view sentence, Relation relation) const override {
    ++calls;
    last_relation[std::string(sentence)] = relation;
    auto it = table_.find(sentence);
    return it == table_.end() ? Reaction{} : it->second;
  }
  mutable int calls = 0;
  mutable std::map<std::string, Relation> last_relation;

 private:
  std::map<std::string, Reaction, std::less<>> table_;
};

Story tom_story(std::vector<std::string> rest) {
  Story s{"Title", {"Tom went out."}};
  for (auto& r : rest) s.sentences.push_back(std::move(r));
  return s;
}

const ProtagonistLexicon& plex() { return *testsupport::protagonists(); }
const AffectLexicon& lex() { return *testsupport::lexicon(); }

}  // namespace

TEST_CASE("body emotion comes from the most confident middle sentence") {
  auto story = tom_story({"s2", "s3", "s4", "s5"});
  ScriptedOracle oracle({{"Tom went out.", {"anger", 0.2}},
                         {"s2", {"fear", 0.1}},
                         {"s3", {"joy", 0.9}},
                         {"s4", {"sadness", 0.3}},
                         {"s5", {"sadness", 0.5}}});
  auto ex = annotate_story(story, oracle, plex(), lex());
  CHECK(ex.body_index == 2);
  CHECK(ex.arc == EmotionArc{BasicEmotion::anger, BasicEmotion::joy, BasicEmotion::sadness});
  REQUIRE(ex.annotations.size() == 5);
  CHECK(ex.annotations[2].phrase == "joy");
  CHECK(ex.annotations[2].confidence == 0.9);
}

TEST_CASE("body ties go to the earliest sentence") {
  auto story = tom_story({"s2", "s3", "s4"});
  ScriptedOracle oracle({{"s2", {"anger", 0.4}}, {"s3", {"fear", 0.4}}, {"s4", {"joy", 0.1}}});
  auto ex = annotate_story(story, oracle, plex(), lex());
  CHECK(ex.body_index == 1);
  CHECK(ex.arc.body == BasicEmotion::anger);
}

TEST_CASE("silent oracle yields an all-neutral arc") {
  auto story = tom_story({"It rained.", "The end."});
  ScriptedOracle oracle({});
  auto ex = annotate_story(story, oracle, plex(), lex());
  CHECK(ex.arc == EmotionArc{});
  CHECK(oracle.calls == 3);
  for (const auto& a : ex.annotations) CHECK(a.mapped == BasicEmotion::neutral);
}

TEST_CASE("roles choose the relation") {
  Story story{"Iris", {"Iris entered her roses in the flower show.", "She worked on them for weeks.",
                       "She arrived early on the day of the show.", "The judges took a long time.",
                       "Iris won first prize."}};
  ScriptedOracle oracle({});
  auto ex = annotate_story(story, oracle, plex(), lex());
  std::vector<Role> roles;
  for (const auto& a : ex.annotations) roles.push_back(a.role);
  CHECK(roles == std::vector<Role>{Role::agent, Role::agent, Role::agent, Role::other, Role::agent});
  CHECK(oracle.last_relation["The judges took a long time."] == Relation::oreact);
  CHECK(oracle.last_relation["Iris won first prize."] == Relation::xreact);
  for (std::size_t i = 0; i < ex.annotations.size(); ++i) CHECK(ex.annotations[i].idx == static_cast<int>(i));
}

TEST_CASE("annotate_story preconditions") {
  LexiconOracle oracle(testsupport::lexicon());
  CHECK_THROWS_AS(annotate_story(tom_story({"Then he left."}), oracle, plex(), lex()), TooShort);
  CHECK_THROWS_AS(annotate_story(Story{"t", {"It rained.", "The sky cleared.", "Birds sang."}}, oracle, plex(), lex()),
                  ProtagonistNotFound);
}

TEST_CASE("annotate_corpus skips failures on request") {
  std::vector<Story> stories{tom_story({"He was furious.", "He felt happy."}),
                             Story{"nobody", {"It rained.", "The sky cleared.", "Birds sang."}},
                             tom_story({"He was scared.", "He was sad."})};
  LexiconOracle oracle(testsupport::lexicon());
  auto res = annotate_corpus(stories, oracle, plex(), lex(), true);
  REQUIRE(res.records.size() == 2);
  REQUIRE(res.skipped.size() == 1);
  CHECK(res.skipped[0].story_index == 1);
  CHECK(res.skipped[0].title == "nobody");
  CHECK(res.story_indices == std::vector<std::size_t>{0, 2});
  CHECK(res.records[0].arc.body == BasicEmotion::anger);
  CHECK(res.records[1].arc.end == BasicEmotion::sadness);

  CHECK_THROWS_AS(annotate_corpus(stories, oracle, plex(), lex(), false), ProtagonistNotFound);

  auto threaded = annotate_corpus(stories, oracle, plex(), lex(), true, 3);
  CHECK(threaded.records == res.records);
  CHECK(threaded.story_indices == res.story_indices);
}

TEST_CASE("annotate_corpus on an empty corpus") {
  LexiconOracle oracle(testsupport::lexicon());
  auto res = annotate_corpus({}, oracle, plex(), lex(), false);
  CHECK(res.records.empty());
  CHECK(res.skipped.empty());
  CHECK(arc_histogram(res.records).empty());
}

TEST_CASE("histogram counts arcs") {
  const EmotionArc joy{BasicEmotion::joy, BasicEmotion::joy, BasicEmotion::joy};
  auto h = arc_histogram(std::vector<EmotionArc>(7, joy));
  REQUIRE(h.size() == 1);
  CHECK(h[joy] == 7);
}

TEST_CASE("planted arcs are recovered from synthetic stories") {
  Rng rng(5);
  const EmotionArc major{BasicEmotion::fear, BasicEmotion::sadness, BasicEmotion::joy};
  auto corpus = policy::make_synthetic_corpus(policy::ArcDistribution::majority(major, 0.5), 200, lex(), rng);
  std::vector<Story> stories;
  for (const auto& r : corpus) stories.push_back(r.story);
  LexiconOracle oracle(testsupport::lexicon());
  auto res = annotate_corpus(stories, oracle, plex(), lex(), false);
  REQUIRE(res.records.size() == stories.size());
  std::size_t recovered = 0;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    CHECK(res.records[i].annotations.size() == stories[i].sentences.size());
    if (res.records[i].arc == corpus[i].arc) ++recovered;
  }
  CHECK(recovered >= 170);
  auto h = arc_histogram(res.records);
  auto top = std::max_element(h.begin(), h.end(), [](auto& a, auto& b) { return a.second < b.second; });
  CHECK(top->first == major);
}
