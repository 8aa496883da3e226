#include <doctest.h>

#include <sstream>

#include "emoarc/errors.hpp"
#include "emoarc/protagonist.hpp"
#include "test_support.hpp"

using namespace emoarc;

namespace {

const ProtagonistLexicon& plex() {
  static const auto p = load_protagonist_lexicon(testsupport::data("protagonists.json"));
  return p;
}

Story story(std::vector<std::string> s) { return {"t", std::move(s)}; }

}  // namespace

TEST_CASE("protagonist lexicon file") {
  CHECK(plex().lookup("tom") == CharacterCategory::male_name);
  CHECK(plex().lookup("iris") == CharacterCategory::female_name);
  CHECK(plex().lookup("friends") == CharacterCategory::social_group);
  CHECK(plex().lookup("alex") == CharacterCategory::ambiguous_name);
  CHECK_FALSE(plex().lookup("burger"));
  std::istringstream bad("{\"male_char\": 3}");
  CHECK_THROWS_AS(parse_protagonist_lexicon(bad), DataError);
}

TEST_CASE("find_protagonist") {
  auto n = find_protagonist(story({"I went home.", "It rained."}), plex());
  CHECK(n.kind == Protagonist::Kind::narrator);

  auto t = find_protagonist(story({"Tom went to a burger place with his friends.", "He ate."}), plex());
  CHECK(t.kind == Protagonist::Kind::named);
  CHECK(t.surface == "tom");
  CHECK(t.pronouns == std::set<std::string, std::less<>>{"he", "him", "his"});

  CHECK_THROWS_AS(find_protagonist(story({"The rain fell.", "Nothing happened."}), plex()), ProtagonistNotFound);

  auto amb = find_protagonist(story({"Tom called.", "Then I answered."}), plex());
  CHECK(amb.kind == Protagonist::Kind::narrator);
  CHECK(amb.ambiguous);

  auto group = find_protagonist(story({"The family went camping."}), plex());
  CHECK(group.pronouns.count("they") == 1);
}

TEST_CASE("assign_role") {
  const auto tom = find_protagonist(story({"Tom ate."}), plex());
  CHECK(assign_role("Tom yelled at the waiter", tom, plex()) == Role::agent);
  CHECK(assign_role("His boss fired him", tom, plex()) == Role::other);
  CHECK(assign_role("The storm destroyed the tents", tom, plex()) == Role::other);
  CHECK(assign_role("Then he smiled", tom, plex()) == Role::agent);
  CHECK(assign_role("Tom's sister laughed", tom, plex()) == Role::other);
  CHECK(assign_role("TOM RAN", tom, plex()) == Role::agent);
  CHECK(assign_role("She hugged him", tom, plex()) == Role::other);
}

TEST_CASE("track") {
  const auto iris = Story{"Flower Show",
                          {"Iris entered her roses in the flower show.", "She worked on them for weeks.",
                           "She arrived early on the day of the show.", "The judges took a long time.",
                           "Iris won first prize."}};
  const auto t = track(iris, plex());
  CHECK(t.roles == std::vector<Role>{Role::agent, Role::agent, Role::agent, Role::other, Role::agent});

  CHECK(track(story({"I ran."}), plex()).roles == std::vector<Role>{Role::agent});
  const auto n = track(story({"I went out.", "Tom saw me."}), plex());
  CHECK(n.roles[1] == Role::other);
}

TEST_CASE("track properties") {
  const auto base = Story{"t", {"Tom woke up.", "Tom ate.", "The dog barked.", "His mom called him.", "He slept."}};
  const auto roles = track(base, plex()).roles;
  CHECK(roles.size() == base.sentences.size());
  // consistent same-gender renaming leaves roles unchanged
  for (const char* name : {"Ben", "David", "Peter"}) {
    Story s = base;
    for (auto& sent : s.sentences) {
      if (sent.rfind("Tom", 0) == 0) sent = name + sent.substr(3);
    }
    CHECK(track(s, plex()).roles == roles);
  }
  const auto all = Story{"t", {"Tom ran.", "Tom ate.", "Tom slept."}};
  for (auto r : track(all, plex()).roles) CHECK(r == Role::agent);
}
