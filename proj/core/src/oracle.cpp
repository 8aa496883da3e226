#include "emoarc/oracle.hpp"

#include <stdexcept>

#include "emoarc/emolex.hpp"
#include "emoarc/wire.hpp"
#include "http_client.hpp"

namespace emoarc {

Reaction lexicon_oracle_react(std::string_view sentence, Relation /*relation*/, const AffectLexicon& lex) {
  const auto mass = text_mass(sentence, lex);
  const double total = mass.total();
  if (!(total > 0.0)) return {};
  return {std::string(to_string(mass.argmax())), total};
}

Reaction LexiconOracle::react(std::string_view sentence, Relation relation) const {
  return lexicon_oracle_react(sentence, relation, *lex_);
}

RemoteOracle::RemoteOracle(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

Reaction remote_react(const std::string& endpoint, std::string_view sentence, Relation relation,
                      std::chrono::milliseconds timeout) {
  const auto body = wire::encode_react_request({std::string(sentence), relation, 1});
  const auto response = detail::post_json(endpoint, std::string(wire::kReactPath), body, timeout);
  return wire::decode_react_response(response).front();
}

Reaction RemoteOracle::react(std::string_view sentence, Relation relation) const {
  return remote_react(endpoint_, sentence, relation, timeout_);
}

CachedOracle::CachedOracle(std::shared_ptr<const ReactionOracle> backend, std::size_t capacity)
    : backend_(std::move(backend)), capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("cache capacity must be positive");
}

Reaction CachedOracle::react(std::string_view sentence, Relation relation) const {
  Key key;
  key.reserve(sentence.size() + 1);
  key.push_back(relation == Relation::xreact ? 'x' : 'o');
  key.append(sentence);

  std::lock_guard lock(mu_);
  if (auto it = index_.find(key); it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
  }
  // The backend runs under the lock; concurrent misses are serialized.
  Reaction r = backend_->react(sentence, relation);
  ++backend_calls_;
  lru_.emplace_front(key, r);
  index_[key] = lru_.begin();
  if (lru_.size() > capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  return r;
}

std::size_t CachedOracle::backend_calls() const {
  std::lock_guard lock(mu_);
  return backend_calls_;
}

std::size_t CachedOracle::size() const {
  std::lock_guard lock(mu_);
  return lru_.size();
}

std::shared_ptr<const ReactionOracle> cached(std::shared_ptr<const ReactionOracle> oracle, std::size_t capacity) {
  return std::make_shared<CachedOracle>(std::move(oracle), capacity);
}

}  // namespace emoarc
