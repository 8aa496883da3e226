#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emoarc {

// Static word vectors of one fixed dimension.
class EmbeddingTable {
 public:
  // First insertion of a word wins. Throws std::invalid_argument on a
  // dimension change.
  bool insert(std::string word, std::vector<double> vec);

  const std::vector<double>* find(std::string_view word) const;
  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return table_.size(); }
  bool empty() const noexcept { return table_.empty(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, std::vector<double>, Hash, std::equal_to<>> table_;
  std::size_t dim_ = 0;
};

// GloVe text format: `word c1 ... cd` per line.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable parse_embeddings(std::istream& in);

// Mean of the vectors of in-vocabulary normalized tokens.
std::optional<std::vector<double>> phrase_vector(std::string_view phrase, const EmbeddingTable& table);

// Cosine of the two phrase vectors clamped to [0, 1]; 0 when either vector
// is absent or has zero norm.
double phrase_similarity(std::string_view a, std::string_view b, const EmbeddingTable& table);
double cosine_clamped(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace emoarc
