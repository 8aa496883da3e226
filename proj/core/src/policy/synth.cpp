#include "emoarc/policy/synth.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <stdexcept>
#include <string_view>

#include "emoarc/text.hpp"

namespace emoarc::policy {
namespace {

template <class T, std::size_t N>
const T& pick(const std::array<T, N>& xs, Rng& rng) {
  return xs[static_cast<std::size_t>(rng.below(N))];
}
template <class T>
const T& pick(const std::vector<T>& xs, Rng& rng) {
  return xs[static_cast<std::size_t>(rng.below(xs.size()))];
}

constexpr std::array<std::string_view, 12> kTitleAdjectives = {
    "big", "new", "old", "long", "first", "last", "small", "strange", "lost", "early", "late", "second"};
constexpr std::array<std::string_view, 16> kTitleNouns = {
    "game", "trip", "test", "party", "dog", "car", "cake", "storm", "job", "garden",
    "letter", "visit", "bike", "concert", "exam", "move"};

constexpr std::array<std::string_view, 12> kMaleNames = {
    "tom", "ben", "carl", "david", "eric", "frank", "george", "jack", "kevin", "peter", "paul", "sam"};
constexpr std::array<std::string_view, 12> kFemaleNames = {
    "iris", "anna", "beth", "carol", "diana", "ella", "emma", "helen", "jane", "kate", "lucy", "mary"};

constexpr std::array<std::string_view, 6> kRelatives = {"brother", "sister", "mom", "dad", "friend", "neighbor"};
constexpr std::array<std::string_view, 6> kPlaces = {"store", "park", "office", "school", "library", "station"};

// Adjectives usable after "felt" / "was"; words listed under several
// emotions in the lexicon are left out on purpose.
constexpr std::array<std::string_view, 17> kAngerAdj = {
    "furious", "enraged", "livid", "angry", "hostile", "mad", "resentful", "infuriated", "outraged",
    "annoyed", "frustrated", "irritated", "grumpy", "cranky", "impatient", "bothered", "huffy"};
constexpr std::array<std::string_view, 16> kFearAdj = {
    "terrified", "petrified", "horrified", "frightened", "afraid", "scared", "alarmed", "spooked",
    "anxious", "nervous", "worried", "uneasy", "jittery", "tense", "wary", "timid"};
constexpr std::array<std::string_view, 15> kJoyAdj = {
    "ecstatic", "elated", "joyful", "thrilled", "delighted", "happy", "excited", "cheerful", "glad",
    "grateful", "pleased", "satisfied", "content", "relaxed", "amused"};
constexpr std::array<std::string_view, 14> kSadAdj = {
    "heartbroken", "devastated", "miserable", "depressed", "sad", "lonely", "gloomy", "disappointed",
    "homesick", "sorry", "tired", "wistful", "mopey", "blue"};

struct Palette {
  std::vector<std::string> strong;  // above the dictionary threshold
  std::vector<std::string> weak;
};

struct Person {
  std::string name;
  std::string subj;  // "he" / "she" / "i"
  std::string poss;  // "his" / "her" / "my"
  bool narrator = false;
};

std::array<Palette, 4> build_palettes(const AffectLexicon& lex) {
  std::array<Palette, 4> out;
  auto fill = [&](std::size_t e, const auto& words) {
    for (auto w : words) {
      const std::string word(w);
      std::array<double, 4> v{};
      for (std::size_t o = 0; o < 4; ++o) v[o] = lex.intensity(word, kLexiconEmotions[o]);
      const double mine = v[e];
      if (mine <= 0.0) continue;
      bool clean = true;
      for (std::size_t o = 0; o < 4; ++o) {
        if (o != e && v[o] > 0.0) clean = false;
      }
      if (!clean) continue;
      (mine > kEmotionWordThreshold ? out[e].strong : out[e].weak).push_back(word);
    }
  };
  fill(0, kAngerAdj);
  fill(1, kFearAdj);
  fill(2, kJoyAdj);
  fill(3, kSadAdj);
  for (const auto& p : out) {
    if (p.strong.empty() || p.weak.empty()) {
      throw std::invalid_argument("affect lexicon lacks the words the synthetic templates need");
    }
  }
  return out;
}

std::string cap(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string subject(const Person& p, bool use_name) {
  if (p.narrator) return "I";
  return use_name ? cap(p.name) : p.subj;
}

class StoryWriter {
 public:
  StoryWriter(const std::array<Palette, 4>& palettes, const SynthOptions& opt, Rng& rng)
      : pal_(palettes), opt_(opt), rng_(rng) {}

  std::string emotional(const Person& p, BasicEmotion e, const std::string& noun, bool first) {
    const auto ei = index_of(e);
    const std::string word = pick(pal_[ei].strong, rng_);
    std::string tail;
    if (rng_.bernoulli(opt_.reinforce_rate)) tail = " and a little " + pick(pal_[ei].weak, rng_);
    if (rng_.bernoulli(opt_.distractor_rate)) {
      std::size_t other = static_cast<std::size_t>(rng_.below(3));
      if (other >= ei) ++other;
      const auto& op = pal_[other];
      const auto& w = rng_.bernoulli(0.5) ? pick(op.strong, rng_) : pick(op.weak, rng_);
      tail += " but also " + w;
    }
    const std::string s = first ? subject(p, true) : text_subject(p);
    switch (rng_.below(first ? 2 : 4)) {
      case 0:
        return s + " was " + word + " about the " + noun + tail + ".";
      case 1:
        return s + " felt " + word + " when the " + noun + " came up" + tail + ".";
      case 2:
        return s + " felt " + word + tail + ".";
      default:
        return "After that " + lower_subject(p) + " was " + word + tail + ".";
    }
  }

  std::string neutral_opening(const Person& p, const std::string& noun) {
    const std::string s = subject(p, true);
    switch (rng_.below(3)) {
      case 0:
        return s + " had a " + noun + " planned for the weekend.";
      case 1:
        return s + " was thinking about the " + noun + ".";
      default:
        return s + " told " + p.poss + " " + std::string(pick(kRelatives, rng_)) + " about the " + noun + ".";
    }
  }

  std::string neutral(const Person& p, const std::string& noun) {
    switch (rng_.below(7)) {
      case 0:
        return text_subject(p) + " went to the " + std::string(pick(kPlaces, rng_)) + ".";
      case 1:
        return cap(p.poss) + " " + std::string(pick(kRelatives, rng_)) + " came over.";
      case 2:
        return text_subject(p) + " waited for a while.";
      case 3:
        return "The " + noun + " was ready by noon.";
      case 4:
        return text_subject(p) + " looked at the clock.";
      case 5:
        return text_subject(p) + " called " + p.poss + " " + std::string(pick(kRelatives, rng_)) + ".";
      default:
        return text_subject(p) + " walked to the " + std::string(pick(kPlaces, rng_)) + " and back.";
    }
  }

  std::string neutral_ending(const Person& p, const std::string& noun) {
    switch (rng_.below(3)) {
      case 0:
        return "In the end " + lower_subject(p) + " went to bed.";
      case 1:
        return "The " + noun + " was over by the evening.";
      default:
        return text_subject(p) + " went home after the " + noun + ".";
    }
  }

  std::string emotional_ending(const Person& p, BasicEmotion e, const std::string& noun) {
    if (rng_.bernoulli(0.5)) return "In the end " + lower_subject(p) + " " + rest_of(emotional(p, e, noun, false));
    return emotional(p, e, noun, false);
  }

 private:
  std::string text_subject(const Person& p) { return subject(p, rng_.bernoulli(0.3)); }
  std::string lower_subject(const Person& p) {
    if (p.narrator) return "I";
    return rng_.bernoulli(0.3) ? cap(p.name) : p.subj;
  }
  // drops the leading subject so an opener can be glued in front
  static std::string rest_of(const std::string& sentence) {
    if (sentence.rfind("After that ", 0) == 0) {
      const auto s = sentence.substr(11);
      return s.substr(s.find(' ') + 1);
    }
    return sentence.substr(sentence.find(' ') + 1);
  }

  const std::array<Palette, 4>& pal_;
  const SynthOptions& opt_;
  Rng& rng_;
};

}  // namespace

ArcDistribution::ArcDistribution(std::vector<std::pair<EmotionArc, double>> weights) : weights_(std::move(weights)) {
  double acc = 0.0;
  for (const auto& [arc, w] : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("arc weights must be non-negative");
    acc += w;
    cumulative_.push_back(acc);
  }
  if (weights_.empty() || !(acc > 0.0)) throw std::invalid_argument("arc distribution has no mass");
}

ArcDistribution ArcDistribution::majority(const EmotionArc& majority, double fraction) {
  if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("majority fraction must lie in [0, 1]");
  std::vector<std::pair<EmotionArc, double>> w;
  const double rest = (1.0 - fraction) / 124.0;
  for (auto a : kAllEmotions) {
    for (auto b : kAllEmotions) {
      for (auto c : kAllEmotions) {
        const EmotionArc arc{a, b, c};
        w.emplace_back(arc, arc == majority ? fraction : rest);
      }
    }
  }
  return ArcDistribution(std::move(w));
}

ArcDistribution ArcDistribution::uniform() {
  return majority(EmotionArc{BasicEmotion::joy, BasicEmotion::joy, BasicEmotion::joy}, 1.0 / 125.0);
}

EmotionArc ArcDistribution::sample(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), weights_.size() - 1);
  return weights_[i].first;
}

std::string synthetic_title(Rng& rng) {
  const std::string adj(pick(kTitleAdjectives, rng));
  const std::string noun(pick(kTitleNouns, rng));
  return cap(adj) + " " + cap(noun);
}

std::vector<AnnotatedStory> make_synthetic_corpus(const ArcDistribution& arcs, std::size_t size,
                                                  const AffectLexicon& lex, Rng& rng, const SynthOptions& options) {
  const auto palettes = build_palettes(lex);
  StoryWriter writer(palettes, options, rng);
  std::vector<AnnotatedStory> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    AnnotatedStory rec;
    rec.arc = arcs.sample(rng);
    rec.story.title = synthetic_title(rng);
    const std::string noun = text::to_lower(rec.story.title.substr(rec.story.title.find(' ') + 1));

    Person p;
    if (rng.bernoulli(options.narrator_rate)) {
      p = {"", "I", "my", true};
    } else if (rng.bernoulli(0.5)) {
      p = {std::string(pick(kMaleNames, rng)), "he", "his", false};
    } else {
      p = {std::string(pick(kFemaleNames, rng)), "she", "her", false};
    }

    auto& s = rec.story.sentences;
    s.push_back(rec.arc.start == BasicEmotion::neutral ? writer.neutral_opening(p, noun)
                                                       : writer.emotional(p, rec.arc.start, noun, true));
    const auto body_slot = rng.below(3);
    for (std::uint64_t j = 0; j < 3; ++j) {
      if (j == body_slot && rec.arc.body != BasicEmotion::neutral) {
        s.push_back(writer.emotional(p, rec.arc.body, noun, false));
      } else {
        s.push_back(writer.neutral(p, noun));
      }
    }
    s.push_back(rec.arc.end == BasicEmotion::neutral ? writer.neutral_ending(p, noun)
                                                     : writer.emotional_ending(p, rec.arc.end, noun));
    for (auto& sent : s) sent[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sent[0])));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<Prompt> sample_prompts(const ArcDistribution& arcs, std::size_t count, Rng& rng) {
  std::vector<Prompt> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    EmotionArc arc = arcs.sample(rng);
    out.push_back({synthetic_title(rng), arc});
  }
  return out;
}

}  // namespace emoarc::policy
