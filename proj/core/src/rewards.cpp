#include "emoarc/rewards.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "emoarc/arcpipe.hpp"
#include "emoarc/embeddings.hpp"
#include "emoarc/emolex.hpp"
#include "emoarc/protagonist.hpp"
#include "emoarc/text.hpp"
#include "emoarc/wire.hpp"
#include "http_client.hpp"

namespace emoarc {

EmotionProbs lexicon_classifier_probs(std::string_view text_in, const AffectLexicon& lex, double neutral_prior) {
  if (!(neutral_prior > 0.0)) throw std::invalid_argument("neutral_prior must be positive");
  const auto mass = text_mass(text_in, lex);
  EmotionProbs out;
  double z = neutral_prior;
  for (auto e : kLexiconEmotions) z += mass[e];
  for (auto e : kLexiconEmotions) out[e] = mass[e] / z;
  out[BasicEmotion::neutral] = neutral_prior / z;
  return out;
}

LexiconClassifier::LexiconClassifier(std::shared_ptr<const AffectLexicon> lex, double neutral_prior)
    : lex_(std::move(lex)), neutral_prior_(neutral_prior) {
  if (!(neutral_prior_ > 0.0)) throw std::invalid_argument("neutral_prior must be positive");
}

EmotionProbs LexiconClassifier::probs(std::string_view text_in) const {
  return lexicon_classifier_probs(text_in, *lex_, neutral_prior_);
}

RemoteClassifier::RemoteClassifier(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

EmotionProbs RemoteClassifier::probs(std::string_view text_in) const {
  const auto body = wire::encode_classify_request(text_in);
  return wire::decode_classify_response(
      detail::post_json(endpoint_, std::string(wire::kClassifyPath), body, timeout_));
}

EcEmResult align_to_arc(const std::vector<std::array<double, kArcLength>>& similarity) {
  const std::size_t n = similarity.size();
  constexpr std::size_t k = kArcLength;
  const bool allow_unmatched = n < k;
  constexpr double inf = std::numeric_limits<double>::infinity();

  // rest[i][j]: cheapest way to place phrases i.. onto arc positions j..
  std::vector<std::array<double, k + 1>> rest(n + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    rest[n][j] = allow_unmatched ? static_cast<double>(k - j) : (j == k ? 0.0 : inf);
  }
  auto replace_cost = [&](std::size_t i, std::size_t j) { return 1.0 - similarity[i][j]; };
  for (std::size_t i = n; i-- > 0;) {
    rest[i][k] = 0.0;  // remaining phrases are deleted for free
    for (std::size_t j = k; j-- > 0;) {
      double best = replace_cost(i, j) + rest[i + 1][j + 1];
      best = std::min(best, rest[i + 1][j]);
      if (allow_unmatched) best = std::min(best, 1.0 + rest[i][j + 1]);
      rest[i][j] = best;
    }
  }

  EcEmResult out;
  out.raw_distance = rest[0][0];
  out.reward = 1.0 - out.raw_distance / static_cast<double>(k);
  // Forward trace: replacement first, then deletion (keeps earlier phrases
  // in the alignment), then an unmatched arc position.
  std::size_t i = 0, j = 0;
  while (j < k) {
    if (i < n && rest[i][j] == replace_cost(i, j) + rest[i + 1][j + 1]) {
      out.alignment.emplace_back(static_cast<int>(i), static_cast<int>(j));
      ++i;
      ++j;
    } else if (i < n && rest[i][j] == rest[i + 1][j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

EcEmResult ec_em(const std::vector<std::string>& generated_phrases, const EmotionArc& arc,
                 const EmbeddingTable& table) {
  std::array<std::optional<std::vector<double>>, kArcLength> targets;
  for (std::size_t j = 0; j < kArcLength; ++j) targets[j] = phrase_vector(to_string(arc[j]), table);

  std::vector<std::array<double, kArcLength>> sim(generated_phrases.size());
  for (std::size_t i = 0; i < generated_phrases.size(); ++i) {
    const auto g = phrase_vector(generated_phrases[i], table);
    for (std::size_t j = 0; j < kArcLength; ++j) {
      sim[i][j] = (g && targets[j]) ? cosine_clamped(*g, *targets[j]) : 0.0;
    }
  }
  return align_to_arc(sim);
}

EcClfResult ec_clf(const std::vector<std::string>& sentences, const EmotionArc& arc, const EmotionClassifier& clf) {
  const auto seg = segment(sentences);
  EcClfResult out;
  out.degenerate = seg.degenerate;
  double sum = 0.0;
  for (std::size_t j = 0; j < kArcLength; ++j) {
    const auto probs = clf.probs(text::join(seg[j], " "));
    out.segment_probs[j] = probs[arc[j]];
    sum += out.segment_probs[j];
  }
  out.reward = sum / static_cast<double>(kArcLength);
  return out;
}

EcClfResult ec_clf(std::string_view story_text, const EmotionArc& arc, const EmotionClassifier& clf) {
  return ec_clf(split_sentences(story_text), arc, clf);
}

RewardFn make_ec_clf_reward(std::shared_ptr<const EmotionClassifier> clf) {
  return [clf = std::move(clf)](const Story& story, const EmotionArc& arc) {
    return ec_clf(split_sentences(story.text()), arc, *clf).reward;
  };
}

RewardFn make_ec_em_reward(std::shared_ptr<const ReactionOracle> oracle,
                           std::shared_ptr<const ProtagonistLexicon> plex,
                           std::shared_ptr<const AffectLexicon> lex, std::shared_ptr<const EmbeddingTable> table) {
  return [=](const Story& story, const EmotionArc& arc) {
    Story s{story.title, split_sentences(story.text())};
    std::vector<std::string> phrases;
    for (auto& a : react_per_sentence(s, *oracle, *plex, *lex)) phrases.push_back(std::move(a.phrase));
    return ec_em(phrases, arc, *table).reward;
  };
}

}  // namespace emoarc
