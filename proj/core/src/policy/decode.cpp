#include "emoarc/policy/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "emoarc/text.hpp"

namespace emoarc::policy {
namespace {

// Drives one decode; `pick` chooses the next id from the forward pass and
// reports the log-probability of its choice.
template <class Pick>
Generation run_decode(const PolicyModel& model, const std::string& title, const EmotionArc& arc, const Vocab& vocab,
                      std::size_t length_cap, Pick&& pick) {
  Generation g;
  auto& seq = g.sequence;
  seq.ids = prompt_ids(title, arc, vocab);
  seq.story_begin = seq.ids.size();
  seq.sentence_pos.assign(seq.ids.size(), 0);
  std::size_t finished = 0;
  Activations act;
  bool ended = false;
  while (g.tokens.size() < length_cap) {
    const std::size_t t = seq.ids.size();
    forward(model, context_at(seq.ids, t, finished, model.shape()), act);
    auto [id, lp] = pick(act);
    seq.ids.push_back(id);
    seq.sentence_pos.push_back(finished);
    g.logprobs.push_back(lp);
    if (id == Vocab::kEos) {
      ended = true;
      break;
    }
    if (vocab.is_terminator(id)) ++finished;
    g.tokens.push_back(vocab.token(id));
  }
  g.hit_cap = !ended;
  seq.loss_end = seq.ids.size();
  g.story = story_from_tokens(title, g.tokens);
  return g;
}

}  // namespace

std::vector<double> truncated_distribution(const std::vector<double>& logits, std::size_t top_k, double temperature) {
  if (top_k == 0) throw std::invalid_argument("top_k must be at least 1");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  const std::size_t v = logits.size();
  const std::size_t k = std::min(top_k, v);
  std::vector<std::size_t> order(v);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return logits[a] > logits[b] || (logits[a] == logits[b] && a < b); });
  std::vector<double> probs(v, 0.0);
  const double mx = logits[order[0]] / temperature;
  double z = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = std::exp(logits[order[i]] / temperature - mx);
    probs[order[i]] = e;
    z += e;
  }
  for (std::size_t i = 0; i < k; ++i) probs[order[i]] /= z;
  return probs;
}

Generation sample_story(const PolicyModel& model, const std::string& title, const EmotionArc& arc,
                        const Vocab& vocab, std::size_t top_k, double temperature, Rng& rng,
                        std::size_t length_cap) {
  return run_decode(model, title, arc, vocab, length_cap, [&](const Activations& act) {
    const auto probs = truncated_distribution(act.logits, top_k, temperature);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t chosen = 0;
    std::optional<std::size_t> last_nonzero;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      last_nonzero = i;
      acc += probs[i];
      if (u < acc) {
        chosen = i;
        break;
      }
      chosen = i;
    }
    if (acc <= u && last_nonzero) chosen = *last_nonzero;  // rounding slack
    return std::pair<TokenId, double>{static_cast<TokenId>(chosen), std::log(probs[chosen])};
  });
}

Generation greedy_story(const PolicyModel& model, const std::string& title, const EmotionArc& arc,
                        const Vocab& vocab, std::size_t length_cap) {
  return run_decode(model, title, arc, vocab, length_cap, [&](const Activations& act) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < act.logits.size(); ++i) {
      if (act.logits[i] > act.logits[best]) best = i;
    }
    return std::pair<TokenId, double>{static_cast<TokenId>(best), act.logp[best]};
  });
}

Story story_from_tokens(const std::string& title, const std::vector<std::string>& tokens) {
  Story s;
  s.title = title;
  s.sentences = split_sentences(text::detokenize(tokens));
  return s;
}

}  // namespace emoarc::policy
