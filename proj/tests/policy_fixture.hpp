#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "emoarc/policy/model.hpp"
#include "emoarc/policy/trainer.hpp"
#include "emoarc/policy/vocab.hpp"
#include "emoarc/rng.hpp"

namespace testsupport {

// A policy small enough for exhaustive finite differences.
struct MicroPolicy {
  emoarc::policy::Vocab vocab;
  emoarc::policy::PolicyModel model;
  std::vector<emoarc::policy::Example> examples;
  std::vector<emoarc::policy::TrainingSequence> sequences;
};

inline MicroPolicy micro_policy(std::uint64_t seed) {
  using namespace emoarc;
  using namespace emoarc::policy;
  MicroPolicy m;
  for (const char* w : {".", "tom", "was", "happy", "sad", "scared", "day", "bad"}) m.vocab.add(w);
  PolicyShape shape;
  shape.vocab = m.vocab.size();
  shape.dim = 3;
  shape.hidden = 5;
  shape.window = 2;
  shape.positions = 3;
  Rng rng(seed);
  m.model = PolicyModel(shape, rng);
  struct Raw {
    const char* title;
    EmotionArc arc;
    std::vector<std::string> tokens;
  };
  const std::vector<Raw> raw{
      {"bad day", {BasicEmotion::joy, BasicEmotion::sadness, BasicEmotion::fear},
       {"tom", "was", "happy", ".", "tom", "was", "sad", ".", "tom", "was", "scared", "."}},
      {"day", {BasicEmotion::sadness, BasicEmotion::neutral, BasicEmotion::joy}, {"sad", ".", "day", ".", "happy"}},
      {"tom", {BasicEmotion::anger, BasicEmotion::anger, BasicEmotion::anger}, {"bad", "bad", "."}},
  };
  for (const auto& r : raw) {
    auto seq = make_training_sequence(r.title, r.arc, r.tokens, m.vocab);
    m.sequences.push_back(seq);
    m.examples.push_back({r.title, r.arc, seq});
  }
  return m;
}

struct GradCheck {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
};

// Central differences of `loss` against `analytic`. The relative error of a
// component is |a - n| / max(|a|, |n|, floor); the floor keeps components
// that are zero up to rounding from dominating.
inline GradCheck check_gradient(emoarc::policy::PolicyModel& model, std::span<const double> analytic,
                                const std::function<double(const emoarc::policy::PolicyModel&)>& loss,
                                double eps = 1e-5, double floor = 1e-6) {
  GradCheck out;
  auto params = model.params();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + eps;
    const double up = loss(model);
    params[i] = saved - eps;
    const double down = loss(model);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic[i] - numeric) / denom);
    ++out.checked;
  }
  return out;
}

}  // namespace testsupport
