#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "emoarc/types.hpp"

namespace emoarc {

class AffectLexicon;

struct Story {
  std::string title;
  std::vector<std::string> sentences;

  std::string text() const;  // sentences joined by single spaces
  bool operator==(const Story&) const = default;
};

struct SegmentedStory {
  std::vector<std::string> beginning;
  std::vector<std::string> body;
  std::vector<std::string> ending;
  bool degenerate = false;  // fewer than three sentences; every segment holds the whole story

  const std::vector<std::string>& operator[](std::size_t pos) const noexcept {
    return pos == 0 ? beginning : (pos == 1 ? body : ending);
  }
};

enum class CorpusFormat { csv, jsonl };

std::vector<Story> load_corpus(const std::filesystem::path& path, CorpusFormat format);
std::vector<Story> parse_corpus_csv(std::istream& in);
std::vector<Story> parse_corpus_jsonl(std::istream& in);

// Splits on '.', '!' or '?' followed by whitespace or end of text.
std::vector<std::string> split_sentences(std::string_view text);

SegmentedStory segment(const std::vector<std::string>& sentences);
inline SegmentedStory segment(const Story& story) { return segment(story.sentences); }

struct AnnotatedStory {
  Story story;
  EmotionArc arc;
  std::vector<ReactionAnnotation> annotations;
  bool ambiguous_protagonist = false;
  bool operator==(const AnnotatedStory&) const = default;
};

void write_annotated(const std::vector<AnnotatedStory>& records, const std::filesystem::path& path);
void write_annotated(const std::vector<AnnotatedStory>& records, std::ostream& out);
std::string annotated_to_json_line(const AnnotatedStory& record);

// When `lex` is given the derived `mapped` field of each annotation is
// recomputed from its phrase; otherwise it is left neutral.
std::vector<AnnotatedStory> read_annotated(const std::filesystem::path& path,
                                           const AffectLexicon* lex = nullptr);
std::vector<AnnotatedStory> read_annotated(std::istream& in, const AffectLexicon* lex = nullptr);

}  // namespace emoarc
