#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "emoarc/types.hpp"

namespace emoarc {

// Word -> intensity in [0, 1] for the four non-neutral emotions.
class AffectLexicon {
 public:
  // Keeps the maximum when the pair is already present.
  void insert(std::string word, BasicEmotion e, double intensity);

  // 0 when absent. Always 0 for neutral.
  double intensity(std::string_view word, BasicEmotion e) const noexcept;
  bool contains(std::string_view word) const noexcept;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Sorted, for deterministic iteration.
  std::vector<std::string> words() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, std::array<double, 4>, Hash, std::equal_to<>> entries_;
};

enum class ParseMode { lenient, strict };

// Three tab-separated columns, term first; the score column is whichever of
// the other two parses as a number. A non-numeric first row is a header.
AffectLexicon load_lexicon(const std::filesystem::path& path, ParseMode mode = ParseMode::lenient);
AffectLexicon parse_lexicon(std::istream& in, ParseMode mode = ParseMode::lenient);

struct EmotionWordDict {
  std::array<std::unordered_set<std::string>, kNumEmotions> sets;

  const std::unordered_set<std::string>& operator[](BasicEmotion e) const noexcept { return sets[index_of(e)]; }
  bool contains_any(std::string_view word) const;
};

// word in set(e) iff intensity(word, e) > threshold (strict).
EmotionWordDict emotion_word_dict(const AffectLexicon& lex, double threshold);

inline constexpr double kEmotionWordThreshold = 0.5;

// Per-emotion accumulated lexicon mass. Neutral never receives mass.
struct EmotionScore {
  std::array<double, kNumEmotions> values{};

  double operator[](BasicEmotion e) const noexcept { return values[index_of(e)]; }
  double total() const noexcept;
  // Argmax over the four lexicon emotions with anger < fear < joy < sadness
  // tie order; neutral when the total is zero.
  BasicEmotion argmax() const noexcept;
};

bool is_stop_word(std::string_view token) noexcept;

// Lowercase, strip punctuation, drop stop words, lemmatize. Irregular forms
// are always lemmatized; suffix rules only fire when `known` is given, the
// surface form is not in it and a stripped form is.
std::vector<std::string> normalize_tokens(std::string_view phrase, const AffectLexicon* known = nullptr);
std::string lemmatize(std::string_view token, const AffectLexicon* known = nullptr);

EmotionScore accumulate(const std::vector<std::string>& normalized_tokens, const AffectLexicon& lex);
// normalize_tokens with the lexicon as vocabulary, then accumulate.
EmotionScore text_mass(std::string_view text, const AffectLexicon& lex);

struct PhraseMapping {
  BasicEmotion emotion = BasicEmotion::neutral;
  EmotionScore score;
};

PhraseMapping map_phrase(std::string_view phrase, const AffectLexicon& lex);

}  // namespace emoarc
