#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/types.hpp"

namespace emoarc {

class AffectLexicon;
class EmbeddingTable;
class EmotionClassifier;
class ProtagonistLexicon;
class ReactionOracle;
struct EmotionWordDict;

using TokenizedCorpus = std::vector<std::vector<std::string>>;

// Lowercase word-and-punctuation tokens of the story body (title excluded).
std::vector<std::string> metric_tokens(const Story& story);
TokenizedCorpus metric_tokens(const std::vector<Story>& stories);

// Percent unique n-grams per story, macro-averaged over stories that have
// at least one n-gram. nullopt when no story qualifies.
std::optional<double> distinct_n(const TokenizedCorpus& stories, int n);

// Percent of stories in which some 4-gram occurs at least twice.
std::optional<double> repetition_4(const TokenizedCorpus& stories);

// Corpus BLEU on a 0-100 scale: clipped n-gram precisions up to n with
// uniform weights and brevity penalty exp(1 - r/c) when c < r. No smoothing.
double bleu(const TokenizedCorpus& candidates, const TokenizedCorpus& references, int n);

struct SegmentScore {
  double percentage = 0.0;  // matching segments / 3 * 100
  bool all = false;         // every segment matched
};

// A segment matches emotion e when one of its normalized tokens is in dict[e];
// a neutral target matches when the segment has no word from any dictionary.
SegmentScore seg_word(const std::vector<std::string>& sentences, const EmotionArc& arc, const EmotionWordDict& dict,
                      const AffectLexicon* lemma_vocab = nullptr);

// Segment emotion = classifier argmax (ties in emotion declaration order).
SegmentScore seg_acc(const std::vector<std::string>& sentences, const EmotionArc& arc, const EmotionClassifier& clf);
std::array<BasicEmotion, kArcLength> predicted_arc(const std::vector<std::string>& sentences,
                                                   const EmotionClassifier& clf);

// exp(-sum of log-probs / sum of word counts), pooled over stories.
double word_perplexity(const std::vector<std::vector<double>>& token_logprobs,
                       const std::vector<std::size_t>& word_counts);

struct PerplexityInputs {
  std::vector<std::vector<double>> token_logprobs;
  std::vector<std::size_t> word_counts;
};

struct EvalInputs {
  std::vector<Story> generated;
  std::optional<std::vector<Story>> references;
  std::optional<std::vector<EmotionArc>> arcs;
  std::optional<PerplexityInputs> perplexity;
  std::shared_ptr<const AffectLexicon> lexicon;
  std::shared_ptr<const EmotionClassifier> classifier;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const ReactionOracle> oracle;
  std::shared_ptr<const ProtagonistLexicon> protagonists;
};

struct ArcGroupScore {
  std::size_t count = 0;
  double arc_acc = 0.0;  // percent
};

struct EvalReport {
  std::size_t story_count = 0;
  // Keys in report order; nullopt marks a metric that could not be computed.
  std::vector<std::pair<std::string, std::optional<double>>> content_quality;
  std::vector<std::pair<std::string, std::optional<double>>> emotion_faithfulness;
  std::map<EmotionArc, ArcGroupScore> arc_acc_by_arc;
  std::vector<std::string> notes;

  std::optional<double> get(const std::string& metric) const;
};

EvalReport evaluate(const EvalInputs& inputs);
std::string report_to_json(const EvalReport& report, int indent = 2);

}  // namespace emoarc
