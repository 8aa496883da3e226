#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/types.hpp"

namespace emoarc {

class AffectLexicon;
class ProtagonistLexicon;
class ReactionOracle;

struct ArcExtraction {
  EmotionArc arc;
  std::vector<ReactionAnnotation> annotations;
  int body_index = 1;  // sentence whose reaction supplied arc.body
  bool ambiguous_protagonist = false;
};

// Throws ProtagonistNotFound or TooShort (< 3 sentences); oracle errors
// propagate unchanged.
ArcExtraction annotate_story(const Story& story, const ReactionOracle& oracle, const ProtagonistLexicon& plex,
                             const AffectLexicon& lex);

// Per-sentence reactions with roles from protagonist tracking. When no
// protagonist is found every sentence is treated as Other.
std::vector<ReactionAnnotation> react_per_sentence(const Story& story, const ReactionOracle& oracle,
                                                   const ProtagonistLexicon& plex, const AffectLexicon& lex);

struct AnnotationFailure {
  std::size_t story_index = 0;
  std::string title;
  std::string reason;
};

struct CorpusAnnotation {
  std::vector<AnnotatedStory> records;
  std::vector<std::size_t> story_indices;  // source index of each record
  std::vector<AnnotationFailure> skipped;
};

// With skip_failed, stories without protagonist or too short are reported
// and skipped; any other error aborts. `workers` > 1 annotates stories on
// that many threads; output order always follows input order.
CorpusAnnotation annotate_corpus(const std::vector<Story>& stories, const ReactionOracle& oracle,
                                 const ProtagonistLexicon& plex, const AffectLexicon& lex, bool skip_failed,
                                 unsigned workers = 1);

std::map<EmotionArc, std::size_t> arc_histogram(const std::vector<EmotionArc>& arcs);
std::map<EmotionArc, std::size_t> arc_histogram(const std::vector<AnnotatedStory>& records);

}  // namespace emoarc
