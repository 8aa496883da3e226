#include "emoarc/emolex.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>

#include "emoarc/errors.hpp"
#include "emoarc/text.hpp"

namespace emoarc {
namespace {

// Lexicon slot for a non-neutral emotion.
constexpr std::size_t slot(BasicEmotion e) noexcept { return index_of(e); }

constexpr std::string_view kStopWords[] = {
    "a",       "about",   "above",  "after",  "again",   "against",  "all",     "am",     "an",
    "and",     "any",     "are",    "as",     "at",      "be",       "been",    "before", "being",
    "below",   "between", "both",   "but",    "by",      "can",      "could",   "did",    "do",
    "does",    "doing",   "down",   "during", "each",    "few",      "for",     "from",   "further",
    "had",     "has",     "have",   "having", "he",      "her",      "here",    "hers",   "herself",
    "him",     "himself", "his",    "how",    "i",       "if",       "in",      "into",   "is",
    "it",      "it's",    "its",    "itself", "just",    "me",       "more",    "most",   "my",
    "myself",  "no",      "nor",    "not",    "now",     "of",       "off",     "on",     "once",
    "only",    "or",      "other",  "our",    "ours",    "ourselves","out",     "over",   "own",
    "same",    "she",     "should", "so",     "some",    "such",     "than",    "that",   "the",
    "their",   "theirs",  "them",   "themselves", "then", "there",   "these",   "they",   "this",
    "those",   "through", "to",     "too",    "under",   "until",    "up",      "very",   "was",
    "we",      "were",    "what",   "when",   "where",   "which",    "while",   "who",    "whom",
    "why",     "will",    "with",   "would",  "you",     "your",     "yours",   "yourself",
    "yourselves", "really", "also", "got",    "get",     "felt",     "feel",    "feeling", "feels",
    "became",  "become",  "one",    "went",   "go",      "s",        "t",       "don't",  "didn't",
    "very",    "much",    "still",  "even",   "ever",    "because",  "upon",    "onto",   "something",
};

struct Irregular {
  std::string_view surface;
  std::string_view lemma;
};

constexpr Irregular kIrregular[] = {
    {"children", "child"}, {"men", "man"},       {"women", "woman"},   {"people", "person"},
    {"ran", "run"},        {"saw", "see"},       {"ate", "eat"},       {"lost", "lose"},
    {"left", "leave"},     {"made", "make"},     {"took", "take"},     {"bought", "buy"},
    {"thought", "think"},  {"told", "tell"},     {"found", "find"},    {"kept", "keep"},
    {"wept", "weep"},      {"fled", "flee"},     {"hid", "hide"},      {"broke", "break"},
    {"fell", "fall"},      {"gave", "give"},     {"knew", "know"},     {"shook", "shake"},
    {"fought", "fight"},   {"bit", "bite"},      {"hurt", "hurt"},     {"froze", "freeze"},
};

std::optional<double> parse_real(std::string_view s) {
  auto t = text::trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view s, std::string_view suf) {
  return s.size() >= suf.size() && s.substr(s.size() - suf.size()) == suf;
}

}  // namespace

void AffectLexicon::insert(std::string word, BasicEmotion e, double intensity) {
  if (e == BasicEmotion::neutral) throw UnknownEmotion("neutral has no lexicon intensities");
  auto& row = entries_[std::move(word)];
  row[slot(e)] = std::max(row[slot(e)], intensity);
}

double AffectLexicon::intensity(std::string_view word, BasicEmotion e) const noexcept {
  if (e == BasicEmotion::neutral) return 0.0;
  auto it = entries_.find(word);
  return it == entries_.end() ? 0.0 : it->second[slot(e)];
}

bool AffectLexicon::contains(std::string_view word) const noexcept { return entries_.find(word) != entries_.end(); }

std::vector<std::string> AffectLexicon::words() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [w, _] : entries_) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

AffectLexicon parse_lexicon(std::istream& in, ParseMode mode) {
  AffectLexicon lex;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (text::trim(raw).empty()) continue;
    auto cols = split_tabs(raw);
    if (cols.size() != 3) throw MalformedRecord(line, "expected 3 tab-separated columns");
    auto score1 = parse_real(cols[1]);
    auto score2 = parse_real(cols[2]);
    if (!score1 && !score2) {
      if (line == 1) continue;  // header
      throw MalformedRecord(line, "no numeric intensity column");
    }
    const double score = score1 ? *score1 : *score2;
    const auto label = text::to_lower(text::trim(score1 ? cols[2] : cols[1]));
    if (!(score >= 0.0 && score <= 1.0)) throw MalformedRecord(line, "intensity outside [0, 1]");
    auto e = parse_emotion(label);
    if (!e || *e == BasicEmotion::neutral) {
      if (mode == ParseMode::lenient) continue;
      throw UnknownEmotion("unknown emotion '" + label + "' at line " + std::to_string(line));
    }
    auto word = text::to_lower(text::trim(cols[0]));
    if (word.empty()) throw MalformedRecord(line, "empty term");
    lex.insert(std::move(word), *e, score);
  }
  return lex;
}

AffectLexicon load_lexicon(const std::filesystem::path& path, ParseMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return parse_lexicon(in, mode);
}

bool EmotionWordDict::contains_any(std::string_view word) const {
  const std::string w(word);
  return std::any_of(sets.begin(), sets.end(), [&](const auto& s) { return s.count(w) > 0; });
}

EmotionWordDict emotion_word_dict(const AffectLexicon& lex, double threshold) {
  EmotionWordDict dict;
  for (const auto& w : lex.words()) {
    for (auto e : kLexiconEmotions) {
      if (lex.intensity(w, e) > threshold) dict.sets[index_of(e)].insert(w);
    }
  }
  return dict;
}

double EmotionScore::total() const noexcept {
  double t = 0.0;
  for (double v : values) t += v;
  return t;
}

BasicEmotion EmotionScore::argmax() const noexcept {
  if (!(total() > 0.0)) return BasicEmotion::neutral;
  auto best = BasicEmotion::anger;
  for (auto e : kLexiconEmotions) {
    if ((*this)[e] > (*this)[best]) best = e;
  }
  return best;
}

bool is_stop_word(std::string_view token) noexcept {
  return std::find(std::begin(kStopWords), std::end(kStopWords), token) != std::end(kStopWords);
}

std::string lemmatize(std::string_view token, const AffectLexicon* known) {
  for (const auto& irr : kIrregular) {
    if (irr.surface == token) return std::string(irr.lemma);
  }
  if (!known || known->contains(token)) return std::string(token);

  std::vector<std::string> candidates;
  auto stem = [&](std::string_view suf, std::string_view add) {
    if (ends_with(token, suf) && token.size() > suf.size() + 1) {
      candidates.push_back(std::string(token.substr(0, token.size() - suf.size())) + std::string(add));
    }
  };
  auto undouble = [&](std::string_view suf) {
    // stopped -> stop, running -> run
    if (!ends_with(token, suf)) return;
    auto base = token.substr(0, token.size() - suf.size());
    if (base.size() >= 3 && base[base.size() - 1] == base[base.size() - 2] && !is_vowel(base.back())) {
      candidates.emplace_back(base.substr(0, base.size() - 1));
    }
  };
  stem("ies", "y");
  stem("es", "");
  stem("s", "");
  stem("ied", "y");
  undouble("ed");
  stem("ed", "");
  stem("ed", "e");
  undouble("ing");
  stem("ing", "");
  stem("ing", "e");
  for (const auto& c : candidates) {
    if (known->contains(c)) return c;
  }
  return std::string(token);
}

std::vector<std::string> normalize_tokens(std::string_view phrase, const AffectLexicon* known) {
  std::vector<std::string> out;
  for (auto& tok : text::tokenize(phrase)) {
    if (text::is_punct_token(tok)) continue;
    if (is_stop_word(tok)) continue;
    out.push_back(lemmatize(tok, known));
  }
  return out;
}

EmotionScore accumulate(const std::vector<std::string>& normalized_tokens, const AffectLexicon& lex) {
  EmotionScore score;
  for (const auto& tok : normalized_tokens) {
    for (auto e : kLexiconEmotions) score.values[index_of(e)] += lex.intensity(tok, e);
  }
  return score;
}

EmotionScore text_mass(std::string_view text_in, const AffectLexicon& lex) {
  return accumulate(normalize_tokens(text_in, &lex), lex);
}

PhraseMapping map_phrase(std::string_view phrase, const AffectLexicon& lex) {
  PhraseMapping m;
  m.score = text_mass(phrase, lex);
  m.emotion = m.score.argmax();
  return m;
}

}  // namespace emoarc
