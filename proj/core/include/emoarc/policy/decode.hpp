#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/policy/model.hpp"
#include "emoarc/policy/vocab.hpp"
#include "emoarc/rng.hpp"

namespace emoarc::policy {

inline constexpr std::size_t kDefaultLengthCap = 64;

struct Generation {
  TrainingSequence sequence;    // prompt + story (+ <eos> when emitted); loss window = generated tokens
  std::vector<double> logprobs;  // per generated token, under the distribution it was drawn from
  std::vector<std::string> tokens;  // story tokens, <eos> excluded
  bool hit_cap = false;
  Story story;
};

// Temperature-scaled, top-k-truncated, renormalized distribution. Entries
// outside the top k are exactly zero; ties at the cut keep lower ids.
std::vector<double> truncated_distribution(const std::vector<double>& logits, std::size_t top_k, double temperature);

Generation sample_story(const PolicyModel& model, const std::string& title, const EmotionArc& arc,
                        const Vocab& vocab, std::size_t top_k, double temperature, Rng& rng,
                        std::size_t length_cap = kDefaultLengthCap);

// Argmax decoding (lowest id on ties); logprobs are under the full softmax.
Generation greedy_story(const PolicyModel& model, const std::string& title, const EmotionArc& arc,
                        const Vocab& vocab, std::size_t length_cap = kDefaultLengthCap);

Story story_from_tokens(const std::string& title, const std::vector<std::string>& tokens);

}  // namespace emoarc::policy
