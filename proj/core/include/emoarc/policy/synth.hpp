#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/emolex.hpp"
#include "emoarc/rng.hpp"
#include "emoarc/types.hpp"

namespace emoarc::policy {

// Weighted distribution over arcs.
class ArcDistribution {
 public:
  ArcDistribution() = default;
  explicit ArcDistribution(std::vector<std::pair<EmotionArc, double>> weights);

  // `majority` with probability `fraction`, otherwise uniform over the other 124 arcs.
  static ArcDistribution majority(const EmotionArc& majority, double fraction);
  static ArcDistribution uniform();

  EmotionArc sample(Rng& rng) const;
  const std::vector<std::pair<EmotionArc, double>>& weights() const noexcept { return weights_; }

 private:
  std::vector<std::pair<EmotionArc, double>> weights_;
  std::vector<double> cumulative_;
};

struct SynthOptions {
  // chance that an emotional sentence also carries a word of another emotion
  double distractor_rate = 0.12;
  // chance that an emotional sentence adds a second, milder word of its own emotion
  double reinforce_rate = 0.2;
  double narrator_rate = 0.2;
};

// Five-sentence stories: sentence 1 is the beginning, 2-4 the body, 5 the
// ending. Every segment whose planted emotion is not neutral carries at least
// one word above the dictionary threshold; the body emotion sits in one body
// sentence. Neutral sentences contain no lexicon word.
std::vector<AnnotatedStory> make_synthetic_corpus(const ArcDistribution& arcs, std::size_t size,
                                                  const AffectLexicon& lex, Rng& rng,
                                                  const SynthOptions& options = {});

struct Prompt {
  std::string title;
  EmotionArc arc;
};

std::vector<Prompt> sample_prompts(const ArcDistribution& arcs, std::size_t count, Rng& rng);

std::string synthetic_title(Rng& rng);

}  // namespace emoarc::policy
