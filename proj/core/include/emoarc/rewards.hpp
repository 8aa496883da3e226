#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/types.hpp"

namespace emoarc {

class AffectLexicon;
class EmbeddingTable;
class ProtagonistLexicon;
class ReactionOracle;

// Per-text distribution over the five basic emotions.
class EmotionClassifier {
 public:
  virtual ~EmotionClassifier() = default;
  virtual EmotionProbs probs(std::string_view text) const = 0;
};

inline constexpr double kDefaultNeutralPrior = 0.5;

// score(e) = lexicon mass for the four emotions, score(neutral) = prior,
// normalized to sum to one.
EmotionProbs lexicon_classifier_probs(std::string_view text, const AffectLexicon& lex,
                                      double neutral_prior = kDefaultNeutralPrior);

class LexiconClassifier final : public EmotionClassifier {
 public:
  explicit LexiconClassifier(std::shared_ptr<const AffectLexicon> lex, double neutral_prior = kDefaultNeutralPrior);
  EmotionProbs probs(std::string_view text) const override;

 private:
  std::shared_ptr<const AffectLexicon> lex_;
  double neutral_prior_;
};

// Client for the POST /classify protocol.
class RemoteClassifier final : public EmotionClassifier {
 public:
  explicit RemoteClassifier(std::string endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(10));
  EmotionProbs probs(std::string_view text) const override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

struct EcEmResult {
  double reward = 0.0;        // 1 - raw_distance / 3, larger is better
  double raw_distance = 0.0;  // in [0, 3]
  std::vector<std::pair<int, int>> alignment;  // (generated index, arc position)
};

// Best order-preserving alignment of generated reaction phrases onto the
// three arc positions. Deleting a phrase is free; replacing phrase i with arc
// emotion j costs 1 - similarity[i][j]. With fewer than three phrases each
// unmatched arc position costs 1.
EcEmResult align_to_arc(const std::vector<std::array<double, kArcLength>>& similarity);

EcEmResult ec_em(const std::vector<std::string>& generated_phrases, const EmotionArc& arc,
                 const EmbeddingTable& table);

struct EcClfResult {
  double reward = 0.0;
  std::array<double, kArcLength> segment_probs{};
  bool degenerate = false;
};

EcClfResult ec_clf(std::string_view story_text, const EmotionArc& arc, const EmotionClassifier& clf);
EcClfResult ec_clf(const std::vector<std::string>& sentences, const EmotionArc& arc, const EmotionClassifier& clf);

// Reward callback used by the trainer; must return a value in [0, 1].
using RewardFn = std::function<double(const Story&, const EmotionArc&)>;

RewardFn make_ec_clf_reward(std::shared_ptr<const EmotionClassifier> clf);
RewardFn make_ec_em_reward(std::shared_ptr<const ReactionOracle> oracle,
                           std::shared_ptr<const ProtagonistLexicon> plex,
                           std::shared_ptr<const AffectLexicon> lex, std::shared_ptr<const EmbeddingTable> table);

}  // namespace emoarc
