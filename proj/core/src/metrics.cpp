#include "emoarc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "emoarc/arcpipe.hpp"
#include "emoarc/embeddings.hpp"
#include "emoarc/emolex.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/rewards.hpp"
#include "emoarc/text.hpp"

namespace emoarc {
namespace {

using NGram = std::vector<std::string>;

std::map<NGram, std::size_t> ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  std::map<NGram, std::size_t> counts;
  if (toks.size() < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) ++counts[NGram(toks.begin() + i, toks.begin() + i + n)];
  return counts;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

std::vector<std::string> metric_tokens(const Story& story) { return text::tokenize(story.text()); }

TokenizedCorpus metric_tokens(const std::vector<Story>& stories) {
  TokenizedCorpus out;
  out.reserve(stories.size());
  for (const auto& s : stories) out.push_back(metric_tokens(s));
  return out;
}

std::optional<double> distinct_n(const TokenizedCorpus& stories, int n) {
  if (n < 1) throw std::invalid_argument("distinct_n needs n >= 1");
  std::vector<double> per_story;
  for (const auto& toks : stories) {
    if (toks.size() < static_cast<std::size_t>(n)) continue;
    const auto counts = ngram_counts(toks, static_cast<std::size_t>(n));
    const double total = static_cast<double>(toks.size() - static_cast<std::size_t>(n) + 1);
    per_story.push_back(100.0 * static_cast<double>(counts.size()) / total);
  }
  if (per_story.empty()) return std::nullopt;
  return mean(per_story);
}

std::optional<double> repetition_4(const TokenizedCorpus& stories) {
  if (stories.empty()) return std::nullopt;
  std::size_t repeating = 0;
  for (const auto& toks : stories) {
    const auto counts = ngram_counts(toks, 4);
    if (std::any_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second >= 2; })) ++repeating;
  }
  return 100.0 * static_cast<double>(repeating) / static_cast<double>(stories.size());
}

double bleu(const TokenizedCorpus& candidates, const TokenizedCorpus& references, int n) {
  if (candidates.size() != references.size()) {
    throw LengthMismatch("bleu: " + std::to_string(candidates.size()) + " candidates vs " +
                         std::to_string(references.size()) + " references");
  }
  if (n < 1) throw std::invalid_argument("bleu needs n >= 1");
  std::size_t c = 0, r = 0;
  std::vector<double> matched(static_cast<std::size_t>(n), 0.0), total(static_cast<std::size_t>(n), 0.0);
  for (std::size_t s = 0; s < candidates.size(); ++s) {
    c += candidates[s].size();
    r += references[s].size();
    for (int k = 1; k <= n; ++k) {
      const auto cand = ngram_counts(candidates[s], static_cast<std::size_t>(k));
      const auto ref = ngram_counts(references[s], static_cast<std::size_t>(k));
      for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        const std::size_t clip = it == ref.end() ? 0 : std::min(count, it->second);
        matched[static_cast<std::size_t>(k - 1)] += static_cast<double>(clip);
        total[static_cast<std::size_t>(k - 1)] += static_cast<double>(count);
      }
    }
  }
  if (c == 0) return 0.0;
  double log_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (matched[static_cast<std::size_t>(k)] == 0.0) return 0.0;
    log_sum += std::log(matched[static_cast<std::size_t>(k)] / total[static_cast<std::size_t>(k)]);
  }
  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return 100.0 * bp * std::exp(log_sum / static_cast<double>(n));
}

SegmentScore seg_word(const std::vector<std::string>& sentences, const EmotionArc& arc, const EmotionWordDict& dict,
                      const AffectLexicon* lemma_vocab) {
  const auto seg = segment(sentences);
  int matches = 0;
  for (std::size_t j = 0; j < kArcLength; ++j) {
    const auto toks = normalize_tokens(text::join(seg[j], " "), lemma_vocab);
    bool ok;
    if (arc[j] == BasicEmotion::neutral) {
      ok = std::none_of(toks.begin(), toks.end(), [&](const auto& t) { return dict.contains_any(t); });
    } else {
      const auto& words = dict[arc[j]];
      ok = std::any_of(toks.begin(), toks.end(), [&](const auto& t) { return words.count(t) > 0; });
    }
    matches += ok ? 1 : 0;
  }
  return {100.0 * matches / static_cast<double>(kArcLength), matches == static_cast<int>(kArcLength)};
}

std::array<BasicEmotion, kArcLength> predicted_arc(const std::vector<std::string>& sentences,
                                                   const EmotionClassifier& clf) {
  const auto seg = segment(sentences);
  std::array<BasicEmotion, kArcLength> out{};
  for (std::size_t j = 0; j < kArcLength; ++j) out[j] = clf.probs(text::join(seg[j], " ")).argmax();
  return out;
}

SegmentScore seg_acc(const std::vector<std::string>& sentences, const EmotionArc& arc, const EmotionClassifier& clf) {
  const auto pred = predicted_arc(sentences, clf);
  int matches = 0;
  for (std::size_t j = 0; j < kArcLength; ++j) matches += pred[j] == arc[j] ? 1 : 0;
  return {100.0 * matches / static_cast<double>(kArcLength), matches == static_cast<int>(kArcLength)};
}

double word_perplexity(const std::vector<std::vector<double>>& token_logprobs,
                       const std::vector<std::size_t>& word_counts) {
  if (token_logprobs.size() != word_counts.size()) throw LengthMismatch("perplexity: logprob/count lists differ");
  double nll = 0.0;
  std::size_t words = 0;
  for (std::size_t s = 0; s < word_counts.size(); ++s) {
    if (word_counts[s] == 0) throw NonPositiveCount("story " + std::to_string(s) + " has zero words");
    for (double lp : token_logprobs[s]) nll -= lp;
    words += word_counts[s];
  }
  if (words == 0) throw NonPositiveCount("no words to normalize by");
  return std::exp(nll / static_cast<double>(words));
}

std::optional<double> EvalReport::get(const std::string& metric) const {
  for (const auto* block : {&content_quality, &emotion_faithfulness}) {
    for (const auto& [name, value] : *block) {
      if (name == metric) return value;
    }
  }
  return std::nullopt;
}

EvalReport evaluate(const EvalInputs& in) {
  EvalReport rep;
  rep.story_count = in.generated.size();
  const auto gen_tokens = metric_tokens(in.generated);

  // Content quality.
  std::optional<double> ppl;
  if (in.perplexity) {
    ppl = word_perplexity(in.perplexity->token_logprobs, in.perplexity->word_counts);
  } else {
    rep.notes.push_back("perplexity: no model log-probabilities supplied");
  }
  std::optional<double> bleu1, bleu2;
  if (in.references && in.references->size() == in.generated.size() && !in.generated.empty()) {
    const auto ref_tokens = metric_tokens(*in.references);
    bleu1 = bleu(gen_tokens, ref_tokens, 1);
    bleu2 = bleu(gen_tokens, ref_tokens, 2);
  } else {
    rep.notes.push_back(in.references ? "bleu: reference count does not match generated count"
                                      : "bleu: no references supplied");
  }
  rep.content_quality = {{"perplexity", ppl},
                         {"bleu_1", bleu1},
                         {"bleu_2", bleu2},
                         {"distinct_1", distinct_n(gen_tokens, 1)},
                         {"distinct_2", distinct_n(gen_tokens, 2)},
                         {"distinct_3", distinct_n(gen_tokens, 3)},
                         {"repetition_4", repetition_4(gen_tokens)}};

  // Emotion faithfulness.
  std::optional<double> arc_word, seg_word_pct, arc_acc, seg_acc_pct, ec_clf_pct, ec_em_pct;
  const bool arcs_ok = in.arcs && in.arcs->size() == in.generated.size() && !in.generated.empty();
  if (!arcs_ok) {
    rep.notes.push_back(in.arcs ? "emotion faithfulness: arc count does not match generated count"
                                : "emotion faithfulness: no arcs supplied");
  }
  if (arcs_ok && in.lexicon) {
    const auto dict = emotion_word_dict(*in.lexicon, kEmotionWordThreshold);
    std::vector<double> seg, all;
    for (std::size_t s = 0; s < in.generated.size(); ++s) {
      const auto sc = seg_word(in.generated[s].sentences, (*in.arcs)[s], dict, in.lexicon.get());
      seg.push_back(sc.percentage);
      all.push_back(sc.all ? 100.0 : 0.0);
    }
    seg_word_pct = mean(seg);
    arc_word = mean(all);
  }
  if (arcs_ok && in.classifier) {
    std::vector<double> seg, all, clf;
    for (std::size_t s = 0; s < in.generated.size(); ++s) {
      const auto& arc = (*in.arcs)[s];
      const auto sc = seg_acc(in.generated[s].sentences, arc, *in.classifier);
      seg.push_back(sc.percentage);
      all.push_back(sc.all ? 100.0 : 0.0);
      clf.push_back(100.0 * ec_clf(in.generated[s].sentences, arc, *in.classifier).reward);
      auto& group = rep.arc_acc_by_arc[arc];
      ++group.count;
      group.arc_acc += all.back();
    }
    for (auto& [_, g] : rep.arc_acc_by_arc) g.arc_acc /= static_cast<double>(g.count);
    seg_acc_pct = mean(seg);
    arc_acc = mean(all);
    ec_clf_pct = mean(clf);
  }
  if (arcs_ok && in.oracle && in.protagonists && in.lexicon && in.embeddings) {
    std::vector<double> em;
    for (std::size_t s = 0; s < in.generated.size(); ++s) {
      std::vector<std::string> phrases;
      for (auto& a : react_per_sentence(in.generated[s], *in.oracle, *in.protagonists, *in.lexicon)) {
        phrases.push_back(std::move(a.phrase));
      }
      em.push_back(100.0 * ec_em(phrases, (*in.arcs)[s], *in.embeddings).reward);
    }
    ec_em_pct = mean(em);
  } else if (arcs_ok) {
    rep.notes.push_back("ec_em: needs oracle, protagonist lexicon, affect lexicon and embeddings");
  }
  rep.emotion_faithfulness = {{"arc_word", arc_word}, {"seg_word", seg_word_pct}, {"arc_acc", arc_acc},
                              {"seg_acc", seg_acc_pct}, {"ec_clf", ec_clf_pct},    {"ec_em", ec_em_pct}};
  return rep;
}

std::string report_to_json(const EvalReport& report, int indent) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["story_count"] = report.story_count;
  std::vector<std::string> computable;
  auto block = [&](const auto& metrics) {
    ordered_json b = ordered_json::object();
    for (const auto& [name, value] : metrics) {
      if (value) {
        b[name] = *value;
        computable.push_back(name);
      } else {
        b[name] = nullptr;
      }
    }
    return b;
  };
  j["content_quality"] = block(report.content_quality);
  j["emotion_faithfulness"] = block(report.emotion_faithfulness);
  j["computable"] = computable;

  // Most common desired arcs first; ties in arc order.
  std::vector<std::pair<EmotionArc, ArcGroupScore>> groups(report.arc_acc_by_arc.begin(), report.arc_acc_by_arc.end());
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
  ordered_json by_arc = ordered_json::array();
  for (const auto& [arc, g] : groups) {
    by_arc.push_back(ordered_json{{"arc", to_string(arc)}, {"count", g.count}, {"arc_acc", g.arc_acc}});
  }
  j["arc_acc_by_arc"] = std::move(by_arc);
  j["notes"] = report.notes;
  return j.dump(indent);
}

}  // namespace emoarc
