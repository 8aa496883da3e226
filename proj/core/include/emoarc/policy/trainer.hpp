#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emoarc/corpus.hpp"
#include "emoarc/policy/decode.hpp"
#include "emoarc/policy/model.hpp"
#include "emoarc/policy/vocab.hpp"
#include "emoarc/rewards.hpp"
#include "emoarc/rng.hpp"

namespace emoarc::policy {

enum class OptimizerKind { sgd, adam };

struct TrainConfig {
  double gamma = 0.97;
  // The large-model recipe uses 1e-5; a policy this small needs a far larger step.
  double learning_rate = 5e-2;
  std::size_t batch_size = 4;
  std::size_t top_k = 0;  // 0 means min(40, V)
  double temperature = 0.7;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::sgd;

  std::size_t dim = 16;
  std::size_t hidden = 64;

  // phase 1: teacher forcing until the validation loss plateaus
  std::size_t max_pretrain_steps = 20000;
  std::size_t eval_interval = 250;
  std::size_t patience = 5;
  double min_delta = 1e-3;
  double validation_fraction = 0.1;

  // phase 2: mixed loss
  std::size_t finetune_steps = 600;
  double finetune_learning_rate = 0.0;  // 0 means learning_rate
  OptimizerKind finetune_optimizer = OptimizerKind::sgd;
  // Every this many mixed steps the validation reward is measured and the best
  // checkpoint kept; 0 keeps the last model.
  std::size_t finetune_eval_interval = 0;
  // Global L2 norm cap on the applied mixed-loss gradient; 0 disables.
  double grad_clip = 0.0;

  std::size_t length_cap = kDefaultLengthCap;
  std::size_t reward_workers = 1;

  std::size_t effective_top_k(std::size_t vocab_size) const noexcept;
};

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate, std::size_t num_params);
  void step(std::span<double> params, std::span<const double> grad);
  void set_learning_rate(double lr) noexcept { lr_ = lr; }
  double learning_rate() const noexcept { return lr_; }

 private:
  OptimizerKind kind_;
  double lr_;
  std::vector<double> m_, v_;
  std::size_t t_ = 0;
};

struct Example {
  std::string title;
  EmotionArc arc;
  TrainingSequence sequence;  // reference story, used by the likelihood term
};

std::vector<Example> make_examples(const std::vector<AnnotatedStory>& corpus, const Vocab& vocab);

struct Rollout {
  TrainingSequence sequence;  // the sampled story
  double advantage = 0.0;
};

// L = (1/B) sum_b -advantage_b * sum_t log p(y_t), full softmax at temperature 1.
LossAndGrad rl_loss_and_grad(const PolicyModel& model, std::span<const Rollout> rollouts);

// Rescales `grad` in place so its L2 norm is at most max_norm; returns the norm before.
double clip_gradient(std::span<double> grad, double max_norm);

// out = gamma * rl + (1 - gamma) * ml, element-wise.
std::vector<double> mix_gradients(double gamma, std::span<const double> rl, std::span<const double> ml);

struct SelfCriticalResult {
  double rl_loss = 0.0;
  double ml_loss = 0.0;
  double mixed_loss = 0.0;
  std::vector<double> rl_grad;
  std::vector<double> ml_grad;
  std::vector<double> grad;  // the mixed gradient that a step applies
  double mean_sample_reward = 0.0;
  double mean_greedy_reward = 0.0;
  double mean_advantage = 0.0;
};

SelfCriticalResult self_critical_gradients(const PolicyModel& model, std::span<const Example> batch,
                                           const RewardFn& reward, const Vocab& vocab, const TrainConfig& config,
                                           Rng& rng);
SelfCriticalResult self_critical_step(PolicyModel& model, Optimizer& opt, std::span<const Example> batch,
                                      const RewardFn& reward, const Vocab& vocab, const TrainConfig& config,
                                      Rng& rng);

// One teacher-forced step; returns the batch loss before the update.
double nll_step(PolicyModel& model, Optimizer& opt, std::span<const TrainingSequence> batch);

struct LogEntry {
  std::size_t step = 0;
  std::string phase;  // "nll", "nll-val", "mixed" or "reward-val"
  double nll = 0.0;
  std::optional<double> rl_loss;
  std::optional<double> mixed;
  std::optional<double> mean_reward;
  std::optional<double> mean_advantage;
};

std::string log_entry_to_json(const LogEntry& e);

using LogSink = std::function<void(const LogEntry&)>;

struct TrainResult {
  Vocab vocab;
  PolicyModel pretrained;  // best phase-1 checkpoint
  PolicyModel model;       // after phase 2
  double best_validation_nll = 0.0;
  std::size_t pretrain_steps = 0;
  std::vector<LogEntry> log;
};

// Throws TooSmallCorpus when the corpus holds fewer stories than a batch.
TrainResult train(const std::vector<AnnotatedStory>& corpus, const TrainConfig& config, const RewardFn& reward,
                  const LogSink& sink = {});

// Mean reward of stories sampled for the validation prompts; `seed` fixes the draws.
double validation_reward(const PolicyModel& model, std::span<const Example> validation, const RewardFn& reward,
                         const Vocab& vocab, const TrainConfig& config, std::uint64_t seed);

// Phase 2 alone, starting from `model`. With a validation set and a nonzero
// finetune_eval_interval, `model` ends as the checkpoint with the best validation reward.
void finetune(PolicyModel& model, const std::vector<Example>& examples, const Vocab& vocab, const TrainConfig& config,
              const RewardFn& reward, Rng& rng, std::vector<LogEntry>& log, const LogSink& sink = {},
              std::span<const Example> validation = {});

}  // namespace emoarc::policy
