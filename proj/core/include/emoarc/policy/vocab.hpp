#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/types.hpp"

namespace emoarc::policy {

using TokenId = int;

// Dense token ids. Ids 0-3 are <bos>, <eos>, <sep>, <unk>; ids 4-8 are the
// arc tokens <anger> ... <neutral> in emotion order; corpus words follow.
class Vocab {
 public:
  static constexpr TokenId kBos = 0;
  static constexpr TokenId kEos = 1;
  static constexpr TokenId kSep = 2;
  static constexpr TokenId kUnk = 3;
  static constexpr TokenId kFirstArc = 4;
  static constexpr TokenId kFirstWord = kFirstArc + static_cast<TokenId>(kNumEmotions);

  Vocab();

  // Sorted word types of all titles and stories.
  static Vocab build(const std::vector<AnnotatedStory>& corpus);
  // Inverse of tokens(); throws DataError unless the special layout matches.
  static Vocab from_tokens(const std::vector<std::string>& tokens);

  TokenId add(const std::string& token);
  TokenId id(std::string_view token) const;  // kUnk when absent
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  static constexpr TokenId arc_token(BasicEmotion e) noexcept {
    return kFirstArc + static_cast<TokenId>(index_of(e));
  }
  static constexpr bool is_special(TokenId id) noexcept { return id < kFirstWord; }
  bool is_terminator(TokenId id) const noexcept;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

std::string arc_token_name(BasicEmotion e);

// ids with a loss window [story_begin, loss_end) over the story part.
// sentence_pos[t] counts the story sentences finished before position t.
struct TrainingSequence {
  std::vector<TokenId> ids;
  std::size_t story_begin = 0;
  std::size_t loss_end = 0;
  std::vector<std::size_t> sentence_pos;

  std::size_t loss_positions() const noexcept { return loss_end - story_begin; }
};

// <bos> e1 e2 e3 <sep> title <sep>
std::vector<TokenId> prompt_ids(std::string_view title, const EmotionArc& arc, const Vocab& vocab);

// prompt, story tokens, <eos>. The loss covers the story tokens and the
// closing <eos>; an empty story has no loss positions.
TrainingSequence make_training_sequence(std::string_view title, const EmotionArc& arc,
                                        const std::vector<std::string>& story_tokens, const Vocab& vocab);
TrainingSequence make_training_sequence(const AnnotatedStory& record, const Vocab& vocab);

// Fills seq.sentence_pos from the terminator tokens after story_begin.
void compute_sentence_positions(TrainingSequence& seq, const Vocab& vocab);

std::vector<std::string> decode(const std::vector<TokenId>& ids, const Vocab& vocab);

}  // namespace emoarc::policy
