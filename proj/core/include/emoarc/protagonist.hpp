#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/types.hpp"

namespace emoarc {

enum class CharacterCategory { male_char, female_char, social_group, generic_people, male_name, female_name, ambiguous_name };

// Categorized protagonist terms plus a gendered first-name list. All entries
// are stored lowercase.
class ProtagonistLexicon {
 public:
  void add(std::string term, CharacterCategory category);

  // Category for a lowercase token, if it is a known term or name. A name in
  // both gender lists reports ambiguous_name.
  std::optional<CharacterCategory> lookup(std::string_view token) const;
  std::size_t size() const noexcept { return male_char_.size() + female_char_.size() + social_group_.size() +
                                           generic_people_.size() + male_names_.size() + female_names_.size(); }

 private:
  std::set<std::string, std::less<>> male_char_, female_char_, social_group_, generic_people_, male_names_, female_names_;
};

ProtagonistLexicon load_protagonist_lexicon(const std::filesystem::path& path);
ProtagonistLexicon parse_protagonist_lexicon(std::istream& in);

struct Protagonist {
  enum class Kind { narrator, named };

  Kind kind = Kind::narrator;
  std::string surface;  // lowercase; empty for the narrator
  std::set<std::string, std::less<>> pronouns;
  int sentence_index = 0;
  // Narrator chosen although a lexicon character appeared before the first
  // first-person pronoun.
  bool ambiguous = false;
};

std::set<std::string, std::less<>> pronouns_for(CharacterCategory category);

// Throws ProtagonistNotFound when neither heuristic fires.
Protagonist find_protagonist(const Story& story, const ProtagonistLexicon& plex);

Role assign_role(std::string_view sentence, const Protagonist& p, const ProtagonistLexicon& plex);

struct Tracking {
  Protagonist protagonist;
  std::vector<Role> roles;
};

Tracking track(const Story& story, const ProtagonistLexicon& plex);

}  // namespace emoarc
