#include "emoarc/corpus.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "emoarc/emolex.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/text.hpp"

namespace emoarc {
namespace {

using nlohmann::json;

constexpr std::size_t kCsvColumns = 6;

// One RFC-4180 record. Returns false at end of input. `line` is advanced by
// the number of physical lines consumed.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      ++line;
      break;
    } else if (c == '\n') {
      ++line;
      break;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw MalformedRecord(line, "unterminated quoted field");
  if (any) fields.push_back(std::move(field));
  return any;
}

bool is_header(const std::vector<std::string>& fields) {
  return !fields.empty() && text::to_lower(text::trim(fields[0])) == "title" && fields.size() > 1 &&
         text::to_lower(text::trim(fields[1])) == "sent1";
}

Story make_story(std::string title, std::vector<std::string> sentences, std::size_t line) {
  Story s;
  s.title = text::trim(title);
  if (s.title.empty()) throw EmptyField("blank title at line " + std::to_string(line));
  if (sentences.empty()) throw EmptyField("story without sentences at line " + std::to_string(line));
  for (auto& raw : sentences) {
    auto t = text::trim(raw);
    if (t.empty()) throw EmptyField("blank sentence at line " + std::to_string(line));
    s.sentences.push_back(std::move(t));
  }
  return s;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return in;
}

nlohmann::ordered_json reaction_to_json(const ReactionAnnotation& a) {
  return nlohmann::ordered_json{{"idx", a.idx}, {"role", to_string(a.role)}, {"phrase", a.phrase}, {"confidence", a.confidence}};
}

}  // namespace

std::string Story::text() const { return text::join(sentences, " "); }

std::vector<Story> parse_corpus_csv(std::istream& in) {
  std::vector<Story> out;
  std::vector<std::string> fields;
  std::size_t line = 1;
  bool first = true;
  while (true) {
    const std::size_t start = line;
    if (!read_csv_record(in, fields, line)) break;
    if (fields.size() == 1 && text::trim(fields[0]).empty()) continue;  // blank line
    if (first && is_header(fields)) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != kCsvColumns) {
      throw MalformedRecord(start, "expected " + std::to_string(kCsvColumns) + " columns, got " +
                                       std::to_string(fields.size()));
    }
    std::vector<std::string> sentences(fields.begin() + 1, fields.end());
    out.push_back(make_story(fields[0], std::move(sentences), start));
  }
  return out;
}

std::vector<Story> parse_corpus_jsonl(std::istream& in) {
  std::vector<Story> out;
  for (const auto& rec : read_annotated(in)) out.push_back(rec.story);
  return out;
}

std::vector<Story> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  auto in = open_in(path);
  return format == CorpusFormat::csv ? parse_corpus_csv(in) : parse_corpus_jsonl(in);
}

std::vector<std::string> split_sentences(std::string_view text_in) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto s = text::trim(text_in.substr(start, end - start));
    if (!s.empty()) out.push_back(std::move(s));
    start = end;
  };
  for (std::size_t i = 0; i < text_in.size(); ++i) {
    char c = text_in[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // Runs such as "?!" or "..." stay with their sentence.
    std::size_t j = i + 1;
    while (j < text_in.size() && (text_in[j] == '.' || text_in[j] == '!' || text_in[j] == '?')) ++j;
    if (j == text_in.size() || std::isspace(static_cast<unsigned char>(text_in[j]))) {
      emit(j);
    }
    i = j - 1;
  }
  emit(text_in.size());
  return out;
}

SegmentedStory segment(const std::vector<std::string>& sentences) {
  SegmentedStory seg;
  if (sentences.size() < kArcLength) {
    seg.beginning = seg.body = seg.ending = sentences;
    seg.degenerate = true;
    return seg;
  }
  seg.beginning.push_back(sentences.front());
  seg.body.assign(sentences.begin() + 1, sentences.end() - 1);
  seg.ending.push_back(sentences.back());
  return seg;
}

std::string annotated_to_json_line(const AnnotatedStory& record) {
  using ojson = nlohmann::ordered_json;
  ojson arc = ojson::array();
  for (auto e : record.arc.as_array()) arc.push_back(std::string(to_string(e)));
  ojson anns = ojson::array();
  for (const auto& a : record.annotations) anns.push_back(reaction_to_json(a));
  ojson j{{"title", record.story.title},
         {"sentences", record.story.sentences},
         {"arc", std::move(arc)},
         {"annotations", std::move(anns)}};
  if (record.ambiguous_protagonist) j["ambiguous_protagonist"] = true;
  return j.dump();
}

void write_annotated(const std::vector<AnnotatedStory>& records, std::ostream& out) {
  for (const auto& r : records) out << annotated_to_json_line(r) << '\n';
  if (!out) throw IoFailure("write failed");
}

void write_annotated(const std::vector<AnnotatedStory>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_annotated(records, out);
  out.flush();
  if (!out) throw IoFailure("write failed for " + path.string());
}

std::vector<AnnotatedStory> read_annotated(std::istream& in, const AffectLexicon* lex) {
  std::vector<AnnotatedStory> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (text::trim(raw).empty()) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::exception& e) {
      throw MalformedRecord(line, e.what());
    }
    try {
      if (!j.is_object() || !j.contains("title") || !j.contains("sentences")) {
        throw MalformedRecord(line, "missing title or sentences");
      }
      AnnotatedStory rec;
      rec.story = make_story(j.at("title").get<std::string>(),
                             j.at("sentences").get<std::vector<std::string>>(), line);
      if (j.contains("arc")) {
        auto parts = j.at("arc").get<std::vector<std::string>>();
        if (parts.size() != kArcLength) throw MalformedRecord(line, "arc must have 3 emotions");
        std::array<BasicEmotion, kArcLength> arc{};
        for (std::size_t k = 0; k < kArcLength; ++k) {
          auto e = parse_emotion(parts[k]);
          if (!e) throw UnknownEmotion("unknown emotion '" + parts[k] + "' at line " + std::to_string(line));
          arc[k] = *e;
        }
        rec.arc = {arc[0], arc[1], arc[2]};
      }
      if (j.contains("annotations")) {
        for (const auto& a : j.at("annotations")) {
          ReactionAnnotation ann;
          ann.idx = a.at("idx").get<int>();
          auto role = parse_role(a.at("role").get<std::string>());
          if (!role) throw MalformedRecord(line, "role must be agent or other");
          ann.role = *role;
          ann.phrase = a.at("phrase").get<std::string>();
          ann.confidence = a.at("confidence").get<double>();
          if (lex) ann.mapped = map_phrase(ann.phrase, *lex).emotion;
          rec.annotations.push_back(std::move(ann));
        }
      }
      rec.ambiguous_protagonist = j.value("ambiguous_protagonist", false);
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw MalformedRecord(line, e.what());
    }
  }
  return out;
}

std::vector<AnnotatedStory> read_annotated(const std::filesystem::path& path, const AffectLexicon* lex) {
  auto in = open_in(path);
  return read_annotated(in, lex);
}

}  // namespace emoarc
