#include "emoarc/arcpipe.hpp"

#include <exception>
#include <optional>
#include <thread>
#include <variant>

#include "emoarc/emolex.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/oracle.hpp"
#include "emoarc/protagonist.hpp"

namespace emoarc {
namespace {

ReactionAnnotation annotate_sentence(int idx, const std::string& sentence, Role role, const ReactionOracle& oracle,
                                     const AffectLexicon& lex) {
  const auto relation = role == Role::agent ? Relation::xreact : Relation::oreact;
  auto reaction = oracle.react(sentence, relation);
  ReactionAnnotation a;
  a.idx = idx;
  a.role = role;
  a.phrase = std::move(reaction.phrase);
  a.confidence = reaction.confidence;
  a.mapped = map_phrase(a.phrase, lex).emotion;
  return a;
}

}  // namespace

ArcExtraction annotate_story(const Story& story, const ReactionOracle& oracle, const ProtagonistLexicon& plex,
                             const AffectLexicon& lex) {
  const auto n = story.sentences.size();
  if (n < kArcLength) {
    throw TooShort("story '" + story.title + "' has " + std::to_string(n) + " sentences; need at least 3");
  }
  const auto tracking = track(story, plex);

  ArcExtraction out;
  out.ambiguous_protagonist = tracking.protagonist.ambiguous;
  out.annotations.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.annotations.push_back(
        annotate_sentence(static_cast<int>(i), story.sentences[i], tracking.roles[i], oracle, lex));
  }
  // Raw oracle confidences decide the body sentence; earliest wins ties.
  std::size_t best = 1;
  for (std::size_t i = 2; i + 1 < n; ++i) {
    if (out.annotations[i].confidence > out.annotations[best].confidence) best = i;
  }
  out.body_index = static_cast<int>(best);
  out.arc = {out.annotations.front().mapped, out.annotations[best].mapped, out.annotations.back().mapped};
  return out;
}

std::vector<ReactionAnnotation> react_per_sentence(const Story& story, const ReactionOracle& oracle,
                                                   const ProtagonistLexicon& plex, const AffectLexicon& lex) {
  std::vector<Role> roles(story.sentences.size(), Role::other);
  try {
    roles = track(story, plex).roles;
  } catch (const ProtagonistNotFound&) {
  }
  std::vector<ReactionAnnotation> out;
  out.reserve(roles.size());
  for (std::size_t i = 0; i < roles.size(); ++i) {
    out.push_back(annotate_sentence(static_cast<int>(i), story.sentences[i], roles[i], oracle, lex));
  }
  return out;
}

CorpusAnnotation annotate_corpus(const std::vector<Story>& stories, const ReactionOracle& oracle,
                                 const ProtagonistLexicon& plex, const AffectLexicon& lex, bool skip_failed,
                                 unsigned workers) {
  using Outcome = std::variant<std::monostate, ArcExtraction, AnnotationFailure, std::exception_ptr>;
  std::vector<Outcome> outcomes(stories.size());

  auto run_one = [&](std::size_t i) {
    try {
      outcomes[i] = annotate_story(stories[i], oracle, plex, lex);
    } catch (const ProtagonistNotFound& e) {
      outcomes[i] = skip_failed ? Outcome(AnnotationFailure{i, stories[i].title, e.what()})
                                : Outcome(std::current_exception());
    } catch (const TooShort& e) {
      outcomes[i] = skip_failed ? Outcome(AnnotationFailure{i, stories[i].title, e.what()})
                                : Outcome(std::current_exception());
    } catch (...) {
      outcomes[i] = std::current_exception();
    }
  };

  if (workers <= 1 || stories.size() < 2) {
    for (std::size_t i = 0; i < stories.size(); ++i) {
      run_one(i);
      if (std::holds_alternative<std::exception_ptr>(outcomes[i])) break;
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < stories.size(); i += workers) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  CorpusAnnotation result;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (auto* err = std::get_if<std::exception_ptr>(&o)) std::rethrow_exception(*err);
    if (auto* fail = std::get_if<AnnotationFailure>(&o)) {
      result.skipped.push_back(std::move(*fail));
    } else if (auto* ex = std::get_if<ArcExtraction>(&o)) {
      result.records.push_back({stories[i], ex->arc, std::move(ex->annotations), ex->ambiguous_protagonist});
      result.story_indices.push_back(i);
    }
  }
  return result;
}

std::map<EmotionArc, std::size_t> arc_histogram(const std::vector<EmotionArc>& arcs) {
  std::map<EmotionArc, std::size_t> h;
  for (const auto& a : arcs) ++h[a];
  return h;
}

std::map<EmotionArc, std::size_t> arc_histogram(const std::vector<AnnotatedStory>& records) {
  std::map<EmotionArc, std::size_t> h;
  for (const auto& r : records) ++h[r.arc];
  return h;
}

}  // namespace emoarc
