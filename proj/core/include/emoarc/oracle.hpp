#pragma once

#include <chrono>
#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "emoarc/types.hpp"

namespace emoarc {

class AffectLexicon;

// Emotional reaction of a character to a sentence. Implementations are
// deterministic for a fixed instance and input, and safe for concurrent use.
class ReactionOracle {
 public:
  virtual ~ReactionOracle() = default;
  virtual Reaction react(std::string_view sentence, Relation relation) const = 0;
};

// Model-free stand-in: the phrase is the name of the emotion with the most
// lexicon mass in the sentence and the confidence is the total mass. The
// relation is ignored.
class LexiconOracle final : public ReactionOracle {
 public:
  explicit LexiconOracle(std::shared_ptr<const AffectLexicon> lex) : lex_(std::move(lex)) {}
  Reaction react(std::string_view sentence, Relation relation) const override;

 private:
  std::shared_ptr<const AffectLexicon> lex_;
};

Reaction lexicon_oracle_react(std::string_view sentence, Relation relation, const AffectLexicon& lex);

// Client for the POST /react protocol. Consumes the top-1 phrase only.
class RemoteOracle final : public ReactionOracle {
 public:
  explicit RemoteOracle(std::string endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(10));
  Reaction react(std::string_view sentence, Relation relation) const override;
  const std::string& endpoint() const noexcept { return endpoint_; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

Reaction remote_react(const std::string& endpoint, std::string_view sentence, Relation relation,
                      std::chrono::milliseconds timeout);

// LRU memo keyed on the exact sentence string and relation.
class CachedOracle final : public ReactionOracle {
 public:
  CachedOracle(std::shared_ptr<const ReactionOracle> backend, std::size_t capacity);
  Reaction react(std::string_view sentence, Relation relation) const override;

  std::size_t backend_calls() const;
  std::size_t size() const;

 private:
  using Key = std::string;  // relation byte + sentence
  using Entry = std::pair<Key, Reaction>;

  std::shared_ptr<const ReactionOracle> backend_;
  std::size_t capacity_;
  mutable std::mutex mu_;
  mutable std::list<Entry> lru_;  // front = most recent
  mutable std::unordered_map<Key, std::list<Entry>::iterator> index_;
  mutable std::size_t backend_calls_ = 0;
};

std::shared_ptr<const ReactionOracle> cached(std::shared_ptr<const ReactionOracle> oracle, std::size_t capacity);

}  // namespace emoarc
