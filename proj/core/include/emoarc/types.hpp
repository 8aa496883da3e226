#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace emoarc {

// Declaration order is the argmax tie-break order used everywhere.
enum class BasicEmotion { anger = 0, fear = 1, joy = 2, sadness = 3, neutral = 4 };

inline constexpr std::size_t kNumEmotions = 5;
inline constexpr std::size_t kArcLength = 3;

inline constexpr std::array<BasicEmotion, kNumEmotions> kAllEmotions = {
    BasicEmotion::anger, BasicEmotion::fear, BasicEmotion::joy, BasicEmotion::sadness,
    BasicEmotion::neutral};

inline constexpr std::array<BasicEmotion, 4> kLexiconEmotions = {
    BasicEmotion::anger, BasicEmotion::fear, BasicEmotion::joy, BasicEmotion::sadness};

constexpr std::size_t index_of(BasicEmotion e) noexcept { return static_cast<std::size_t>(e); }

std::string_view to_string(BasicEmotion e) noexcept;
std::optional<BasicEmotion> parse_emotion(std::string_view name) noexcept;

struct EmotionArc {
  BasicEmotion start = BasicEmotion::neutral;
  BasicEmotion body = BasicEmotion::neutral;
  BasicEmotion end = BasicEmotion::neutral;

  std::array<BasicEmotion, kArcLength> as_array() const noexcept { return {start, body, end}; }
  BasicEmotion operator[](std::size_t pos) const noexcept {
    return pos == 0 ? start : (pos == 1 ? body : end);
  }
  auto operator<=>(const EmotionArc&) const = default;
};

// "joy,anger,sadness" <-> arc. Parsing is strict: exactly three lowercase names.
std::string to_string(const EmotionArc& arc);
std::optional<EmotionArc> parse_arc(std::string_view csv) noexcept;

// Probability per basic emotion, indexed by index_of().
struct EmotionProbs {
  std::array<double, kNumEmotions> p{};

  double operator[](BasicEmotion e) const noexcept { return p[index_of(e)]; }
  double& operator[](BasicEmotion e) noexcept { return p[index_of(e)]; }
  // First maximum in declaration order.
  BasicEmotion argmax() const noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kNumEmotions; ++i) {
      if (p[i] > p[best]) best = i;
    }
    return kAllEmotions[best];
  }
  bool operator==(const EmotionProbs&) const = default;
};

enum class Role { agent, other };
enum class Relation { xreact, oreact };

std::string_view to_string(Role r) noexcept;
std::optional<Role> parse_role(std::string_view s) noexcept;
std::string_view to_string(Relation r) noexcept;
std::optional<Relation> parse_relation(std::string_view s) noexcept;

struct Reaction {
  std::string phrase;
  double confidence = 0.0;
  bool operator==(const Reaction&) const = default;
};

// One sentence's step-4/6 output. `mapped` is derived from `phrase` and is
// not part of the annotated file format.
struct ReactionAnnotation {
  int idx = 0;
  Role role = Role::other;
  std::string phrase;
  double confidence = 0.0;
  BasicEmotion mapped = BasicEmotion::neutral;
  bool operator==(const ReactionAnnotation&) const = default;
};

}  // namespace emoarc
