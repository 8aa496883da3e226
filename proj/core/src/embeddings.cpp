#include "emoarc/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "emoarc/emolex.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/text.hpp"

namespace emoarc {

bool EmbeddingTable::insert(std::string word, std::vector<double> vec) {
  if (table_.empty() && dim_ == 0) {
    dim_ = vec.size();
  } else if (vec.size() != dim_) {
    throw std::invalid_argument("embedding dimension mismatch for '" + word + "'");
  }
  return table_.emplace(std::move(word), std::move(vec)).second;
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embeddings(std::istream& in) {
  EmbeddingTable table;
  std::string raw;
  std::size_t line = 0;
  std::vector<double> vec;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view rest = raw;
    auto skip_ws = [&] {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    };
    skip_ws();
    if (rest.empty()) continue;
    auto sp = rest.find_first_of(" \t");
    std::string word(rest.substr(0, sp));
    rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp);
    vec.clear();
    while (true) {
      skip_ws();
      if (rest.empty()) break;
      double v = 0;
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
      if (ec != std::errc{} || (ptr != rest.data() + rest.size() && *ptr != ' ' && *ptr != '\t')) {
        throw ParseError(line, "bad number in vector of '" + word + "'");
      }
      if (!std::isfinite(v)) throw ParseError(line, "non-finite component in '" + word + "'");
      vec.push_back(v);
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    }
    if (vec.empty()) throw ParseError(line, "word '" + word + "' has no vector");
    if (!table.empty() && vec.size() != table.dimension()) {
      throw DimensionMismatch(line, table.dimension(), vec.size());
    }
    table.insert(std::move(word), vec);
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return parse_embeddings(in);
}

std::optional<std::vector<double>> phrase_vector(std::string_view phrase, const EmbeddingTable& table) {
  std::vector<double> sum(table.dimension(), 0.0);
  std::size_t hits = 0;
  for (const auto& tok : normalize_tokens(phrase)) {
    if (const auto* v = table.find(tok)) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
      ++hits;
    }
  }
  if (hits == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(hits);
  return sum;
}

double cosine_clamped(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  // sqrt(x * x) == x exactly, so a vector's cosine with itself is exactly 1.
  const double c = dot / std::sqrt(na * nb);
  return std::clamp(c, 0.0, 1.0);
}

double phrase_similarity(std::string_view a, std::string_view b, const EmbeddingTable& table) {
  const auto va = phrase_vector(a, table);
  if (!va) return 0.0;
  const auto vb = phrase_vector(b, table);
  if (!vb) return 0.0;
  return cosine_clamped(*va, *vb);
}

}  // namespace emoarc
