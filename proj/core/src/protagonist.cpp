#include "emoarc/protagonist.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>

#include <json.hpp>

#include "emoarc/emolex.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/text.hpp"

namespace emoarc {
namespace {

constexpr std::string_view kFirstPerson[] = {"i", "we", "me", "us", "my", "our"};
// Personal pronouns that can decide a sentence's role.
constexpr std::string_view kDecidingPronouns[] = {"i", "we", "me", "us", "he", "him", "she", "her", "they", "them"};
// Possessive forms never decide; the noun they modify does.
constexpr std::string_view kPossessives[] = {"my", "our", "his", "their", "its", "your", "hers", "theirs", "ours", "mine"};

template <std::size_t N>
bool in(const std::string_view (&list)[N], std::string_view tok) {
  return std::find(std::begin(list), std::end(list), tok) != std::end(list);
}

bool ends_with_possessive(std::string_view tok) {
  return tok.size() > 2 && tok.substr(tok.size() - 2) == "'s";
}

std::string_view strip_possessive(std::string_view tok) {
  return ends_with_possessive(tok) ? tok.substr(0, tok.size() - 2) : tok;
}

std::vector<std::string> word_tokens(std::string_view sentence) {
  auto toks = text::tokenize(sentence);
  std::vector<std::string> out;
  for (auto& t : toks) {
    if (!text::is_punct_token(t)) out.push_back(std::move(t));
  }
  return out;
}

// "her" followed by a content word is a determiner ("her boss").
bool is_possessive_at(const std::vector<std::string>& toks, std::size_t i) {
  const auto& tok = toks[i];
  if (ends_with_possessive(tok) || in(kPossessives, tok)) return true;
  if (tok == "her" && i + 1 < toks.size() && !is_stop_word(toks[i + 1])) return true;
  return false;
}

void read_terms(const nlohmann::json& j, const char* key, CharacterCategory cat, ProtagonistLexicon& plex) {
  if (!j.contains(key)) throw MalformedRecord(1, std::string("missing array '") + key + "'");
  for (const auto& t : j.at(key)) plex.add(t.get<std::string>(), cat);
}

}  // namespace

void ProtagonistLexicon::add(std::string term, CharacterCategory category) {
  term = text::to_lower(text::trim(term));
  if (term.empty()) return;
  switch (category) {
    case CharacterCategory::male_char: male_char_.insert(std::move(term)); break;
    case CharacterCategory::female_char: female_char_.insert(std::move(term)); break;
    case CharacterCategory::social_group: social_group_.insert(std::move(term)); break;
    case CharacterCategory::generic_people: generic_people_.insert(std::move(term)); break;
    case CharacterCategory::male_name: male_names_.insert(std::move(term)); break;
    case CharacterCategory::female_name: female_names_.insert(std::move(term)); break;
    case CharacterCategory::ambiguous_name:
      male_names_.insert(term);
      female_names_.insert(std::move(term));
      break;
  }
}

std::optional<CharacterCategory> ProtagonistLexicon::lookup(std::string_view token) const {
  if (male_char_.count(token)) return CharacterCategory::male_char;
  if (female_char_.count(token)) return CharacterCategory::female_char;
  if (social_group_.count(token)) return CharacterCategory::social_group;
  if (generic_people_.count(token)) return CharacterCategory::generic_people;
  const bool m = male_names_.count(token) > 0;
  const bool f = female_names_.count(token) > 0;
  if (m && f) return CharacterCategory::ambiguous_name;
  if (m) return CharacterCategory::male_name;
  if (f) return CharacterCategory::female_name;
  return std::nullopt;
}

ProtagonistLexicon parse_protagonist_lexicon(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(1, e.what());
  }
  ProtagonistLexicon plex;
  try {
    read_terms(j, "male_char", CharacterCategory::male_char, plex);
    read_terms(j, "female_char", CharacterCategory::female_char, plex);
    read_terms(j, "social_group", CharacterCategory::social_group, plex);
    read_terms(j, "generic_people", CharacterCategory::generic_people, plex);
    read_terms(j, "male_names", CharacterCategory::male_name, plex);
    read_terms(j, "female_names", CharacterCategory::female_name, plex);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(1, e.what());
  }
  return plex;
}

ProtagonistLexicon load_protagonist_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return parse_protagonist_lexicon(in);
}

std::set<std::string, std::less<>> pronouns_for(CharacterCategory category) {
  switch (category) {
    case CharacterCategory::male_char:
    case CharacterCategory::male_name: return {"he", "him", "his"};
    case CharacterCategory::female_char:
    case CharacterCategory::female_name: return {"she", "her", "hers"};
    case CharacterCategory::social_group: return {"they", "them", "their"};
    case CharacterCategory::generic_people:
    case CharacterCategory::ambiguous_name: break;
  }
  return {"he", "him", "his", "she", "her", "hers", "they", "them", "their"};
}

Protagonist find_protagonist(const Story& story, const ProtagonistLexicon& plex) {
  std::optional<Protagonist> first_named;
  std::optional<int> first_person_sentence;
  // One pass: the scan stops at the first first-person pronoun, which wins story-wide.
  for (std::size_t s = 0; s < story.sentences.size() && !first_person_sentence; ++s) {
    for (const auto& tok : word_tokens(story.sentences[s])) {
      if (in(kFirstPerson, tok)) {
        first_person_sentence = static_cast<int>(s);
        break;
      }
      if (!first_named) {
        auto base = strip_possessive(tok);
        if (auto cat = plex.lookup(base)) {
          Protagonist p;
          p.kind = Protagonist::Kind::named;
          p.surface = std::string(base);
          p.pronouns = pronouns_for(*cat);
          p.sentence_index = static_cast<int>(s);
          first_named = std::move(p);
        }
      }
    }
  }
  if (first_person_sentence) {
    Protagonist p;
    p.kind = Protagonist::Kind::narrator;
    p.pronouns = {"i", "we", "me", "us", "my", "our"};
    p.sentence_index = *first_person_sentence;
    p.ambiguous = first_named.has_value();
    return p;
  }
  if (first_named) return *first_named;
  throw ProtagonistNotFound("no first-person pronoun or lexicon character in story '" + story.title + "'");
}

Role assign_role(std::string_view sentence, const Protagonist& p, const ProtagonistLexicon& plex) {
  const auto toks = word_tokens(sentence);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& tok = toks[i];
    if (is_possessive_at(toks, i)) continue;
    const bool deciding = in(kDecidingPronouns, tok) || plex.lookup(tok).has_value();
    if (!deciding) continue;
    const bool match = (!p.surface.empty() && tok == p.surface) || p.pronouns.count(tok) > 0;
    return match ? Role::agent : Role::other;
  }
  return Role::other;
}

Tracking track(const Story& story, const ProtagonistLexicon& plex) {
  Tracking t;
  t.protagonist = find_protagonist(story, plex);
  t.roles.reserve(story.sentences.size());
  for (const auto& s : story.sentences) t.roles.push_back(assign_role(s, t.protagonist, plex));
  return t;
}

}  // namespace emoarc
