#include "emoarc/policy/vocab.hpp"

#include <set>

#include "emoarc/errors.hpp"
#include "emoarc/text.hpp"

namespace emoarc::policy {

std::string arc_token_name(BasicEmotion e) { return "<" + std::string(to_string(e)) + ">"; }

Vocab::Vocab() {
  for (const char* s : {"<bos>", "<eos>", "<sep>", "<unk>"}) add(s);
  for (auto e : kAllEmotions) add(arc_token_name(e));
}

Vocab Vocab::build(const std::vector<AnnotatedStory>& corpus) {
  std::set<std::string> words;
  for (const auto& r : corpus) {
    for (auto& t : text::tokenize(r.story.title)) words.insert(std::move(t));
    for (auto& t : text::tokenize(r.story.text())) words.insert(std::move(t));
  }
  Vocab v;
  for (const auto& w : words) v.add(w);
  return v;
}

Vocab Vocab::from_tokens(const std::vector<std::string>& tokens) {
  Vocab v;
  if (tokens.size() < v.size()) throw DataError("vocabulary shorter than the special-token block");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (tokens[i] != v.tokens_[i]) throw DataError("vocabulary special token mismatch at id " + std::to_string(i));
  }
  for (std::size_t i = v.size(); i < tokens.size(); ++i) {
    if (v.find(tokens[i])) throw DataError("duplicate vocabulary token '" + tokens[i] + "'");
    v.add(tokens[i]);
  }
  return v;
}

TokenId Vocab::add(const std::string& token) {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

std::optional<TokenId> Vocab::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocab::id(std::string_view token) const { return find(token).value_or(kUnk); }

bool Vocab::is_terminator(TokenId id) const noexcept {
  return id >= kFirstWord && static_cast<std::size_t>(id) < tokens_.size() &&
         text::is_terminator_token(tokens_[static_cast<std::size_t>(id)]);
}

void compute_sentence_positions(TrainingSequence& seq, const Vocab& vocab) {
  seq.sentence_pos.assign(seq.ids.size(), 0);
  std::size_t finished = 0;
  for (std::size_t t = seq.story_begin; t < seq.ids.size(); ++t) {
    seq.sentence_pos[t] = finished;
    if (vocab.is_terminator(seq.ids[t])) ++finished;
  }
}

std::vector<TokenId> prompt_ids(std::string_view title, const EmotionArc& arc, const Vocab& vocab) {
  std::vector<TokenId> ids{Vocab::kBos};
  for (auto e : arc.as_array()) ids.push_back(Vocab::arc_token(e));
  ids.push_back(Vocab::kSep);
  for (const auto& t : text::tokenize(title)) ids.push_back(vocab.id(t));
  ids.push_back(Vocab::kSep);
  return ids;
}

TrainingSequence make_training_sequence(std::string_view title, const EmotionArc& arc,
                                        const std::vector<std::string>& story_tokens, const Vocab& vocab) {
  TrainingSequence seq;
  seq.ids = prompt_ids(title, arc, vocab);
  seq.story_begin = seq.ids.size();
  for (const auto& t : story_tokens) seq.ids.push_back(vocab.id(t));
  seq.ids.push_back(Vocab::kEos);
  seq.loss_end = story_tokens.empty() ? seq.story_begin : seq.ids.size();
  compute_sentence_positions(seq, vocab);
  return seq;
}

TrainingSequence make_training_sequence(const AnnotatedStory& record, const Vocab& vocab) {
  return make_training_sequence(record.story.title, record.arc, text::tokenize(record.story.text()), vocab);
}

std::vector<std::string> decode(const std::vector<TokenId>& ids, const Vocab& vocab) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(vocab.token(id));
  return out;
}

}  // namespace emoarc::policy
