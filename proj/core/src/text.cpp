#include "emoarc/text.hpp"

#include <cctype>

namespace emoarc::text {
namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c == '\'' || c >= 0x80; }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    // Apostrophes only glue words together; strip leading/trailing ones.
    std::size_t b = 0;
    std::size_t e = cur.size();
    while (b < e && cur[b] == '\'') ++b;
    while (e > b && cur[e - 1] == '\'') --e;
    if (e > b) out.push_back(to_lower(std::string_view(cur).substr(b, e - b)));
    cur.clear();
  };
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_char(c)) {
      cur.push_back(ch);
    } else {
      flush();
      if (!is_space(c)) out.emplace_back(1, ch);
    }
  }
  flush();
  return out;
}

bool is_punct_token(std::string_view tok) noexcept {
  if (tok.size() != 1) return false;
  auto c = static_cast<unsigned char>(tok[0]);
  return !is_word_char(c) && !is_space(c);
}

bool is_terminator_token(std::string_view tok) noexcept {
  return tok == "." || tok == "!" || tok == "?";
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  bool capitalize = true;
  for (const auto& tok : tokens) {
    if (tok.empty()) continue;
    const bool punct = is_punct_token(tok);
    if (!out.empty() && !punct) out.push_back(' ');
    std::string word = tok;
    if (!punct && (capitalize || word == "i")) {
      if (word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 'a' + 'A');
    }
    if (!punct) capitalize = false;
    if (is_terminator_token(tok)) capitalize = true;
    out += word;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace emoarc::text
