#include "emoarc/types.hpp"

namespace emoarc {

std::string_view to_string(BasicEmotion e) noexcept {
  switch (e) {
    case BasicEmotion::anger: return "anger";
    case BasicEmotion::fear: return "fear";
    case BasicEmotion::joy: return "joy";
    case BasicEmotion::sadness: return "sadness";
    case BasicEmotion::neutral: return "neutral";
  }
  return "neutral";
}

std::optional<BasicEmotion> parse_emotion(std::string_view name) noexcept {
  for (auto e : kAllEmotions) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::string to_string(const EmotionArc& arc) {
  std::string out;
  out.append(to_string(arc.start)).append(",");
  out.append(to_string(arc.body)).append(",");
  out.append(to_string(arc.end));
  return out;
}

std::optional<EmotionArc> parse_arc(std::string_view csv) noexcept {
  std::array<BasicEmotion, kArcLength> parts{};
  std::size_t n = 0;
  std::size_t pos = 0;
  while (true) {
    auto comma = csv.find(',', pos);
    auto piece = csv.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (n == kArcLength) return std::nullopt;
    auto e = parse_emotion(piece);
    if (!e) return std::nullopt;
    parts[n++] = *e;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (n != kArcLength) return std::nullopt;
  return EmotionArc{parts[0], parts[1], parts[2]};
}

std::string_view to_string(Role r) noexcept { return r == Role::agent ? "agent" : "other"; }

std::optional<Role> parse_role(std::string_view s) noexcept {
  if (s == "agent") return Role::agent;
  if (s == "other") return Role::other;
  return std::nullopt;
}

std::string_view to_string(Relation r) noexcept { return r == Relation::xreact ? "xReact" : "oReact"; }

std::optional<Relation> parse_relation(std::string_view s) noexcept {
  if (s == "xReact") return Relation::xreact;
  if (s == "oReact") return Relation::oreact;
  return std::nullopt;
}

}  // namespace emoarc
