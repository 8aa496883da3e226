#include "emoarc/policy/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "emoarc/errors.hpp"

namespace emoarc::policy {

std::size_t TrainConfig::effective_top_k(std::size_t vocab_size) const noexcept {
  if (top_k != 0) return std::min(top_k, vocab_size);
  return std::min<std::size_t>(40, vocab_size);
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, std::size_t num_params)
    : kind_(kind), lr_(learning_rate) {
  if (kind_ == OptimizerKind::adam) {
    m_.assign(num_params, 0.0);
    v_.assign(num_params, 0.0);
  }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
  if (kind_ == OptimizerKind::sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr_ * grad[i];
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++t_;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps);
  }
}

std::vector<Example> make_examples(const std::vector<AnnotatedStory>& corpus, const Vocab& vocab) {
  std::vector<Example> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus) out.push_back({r.story.title, r.arc, make_training_sequence(r, vocab)});
  return out;
}

LossAndGrad rl_loss_and_grad(const PolicyModel& model, std::span<const Rollout> rollouts) {
  LossAndGrad out;
  out.grad.assign(model.num_params(), 0.0);
  if (rollouts.empty()) return out;
  const double inv_b = 1.0 / static_cast<double>(rollouts.size());
  Activations act;
  for (const auto& r : rollouts) {
    const auto& seq = r.sequence;
    if (r.advantage == 0.0) continue;  // contributes exactly nothing
    double logp = 0.0;
    for (std::size_t t = seq.story_begin; t < seq.loss_end; ++t) {
      const auto ctx = context_at(seq.ids, t, seq.sentence_pos[t], model.shape());
      forward(model, ctx, act);
      logp += act.logp[static_cast<std::size_t>(seq.ids[t])];
      backward(model, ctx, act, seq.ids[t], r.advantage * inv_b, out.grad);
    }
    out.loss += -r.advantage * logp * inv_b;
    out.positions += seq.loss_positions();
  }
  return out;
}

double clip_gradient(std::span<double> grad, double max_norm) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (double& g : grad) g *= s;
  }
  return norm;
}

std::vector<double> mix_gradients(double gamma, std::span<const double> rl, std::span<const double> ml) {
  std::vector<double> out(rl.size());
  for (std::size_t i = 0; i < rl.size(); ++i) out[i] = gamma * rl[i] + (1.0 - gamma) * ml[i];
  return out;
}

namespace {

std::vector<double> evaluate_rewards(const std::vector<const Generation*>& gens, std::span<const Example> batch,
                                     const RewardFn& reward, std::size_t workers) {
  // gens holds sample/greedy pairs: gens[2b], gens[2b+1] belong to batch[b]
  std::vector<double> out(gens.size());
  auto work = [&](std::size_t i) { out[i] = reward(gens[i]->story, batch[i / 2].arc); };
  if (workers <= 1 || gens.size() <= 1) {
    for (std::size_t i = 0; i < gens.size(); ++i) work(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < gens.size(); i += workers) work(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

SelfCriticalResult self_critical_gradients(const PolicyModel& model, std::span<const Example> batch,
                                           const RewardFn& reward, const Vocab& vocab, const TrainConfig& config,
                                           Rng& rng) {
  SelfCriticalResult res;
  const std::size_t k = config.effective_top_k(vocab.size());
  std::vector<Generation> samples, greedy;
  samples.reserve(batch.size());
  greedy.reserve(batch.size());
  for (const auto& ex : batch) {
    samples.push_back(sample_story(model, ex.title, ex.arc, vocab, k, config.temperature, rng, config.length_cap));
    greedy.push_back(greedy_story(model, ex.title, ex.arc, vocab, config.length_cap));
  }
  std::vector<const Generation*> gens;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    gens.push_back(&samples[b]);
    gens.push_back(&greedy[b]);
  }
  const auto rewards = evaluate_rewards(gens, batch, reward, config.reward_workers);

  std::vector<Rollout> rollouts;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double rs = rewards[2 * b], rg = rewards[2 * b + 1];
    res.mean_sample_reward += rs;
    res.mean_greedy_reward += rg;
    res.mean_advantage += rs - rg;
    rollouts.push_back({std::move(samples[b].sequence), rs - rg});
  }
  const double n = static_cast<double>(std::max<std::size_t>(batch.size(), 1));
  res.mean_sample_reward /= n;
  res.mean_greedy_reward /= n;
  res.mean_advantage /= n;

  auto rl = rl_loss_and_grad(model, rollouts);
  std::vector<TrainingSequence> refs;
  refs.reserve(batch.size());
  for (const auto& ex : batch) refs.push_back(ex.sequence);
  auto ml = nll_loss_and_grad(model, refs);

  res.rl_loss = rl.loss;
  res.ml_loss = ml.loss;
  res.mixed_loss = config.gamma * rl.loss + (1.0 - config.gamma) * ml.loss;
  res.grad = mix_gradients(config.gamma, rl.grad, ml.grad);
  res.rl_grad = std::move(rl.grad);
  res.ml_grad = std::move(ml.grad);
  return res;
}

SelfCriticalResult self_critical_step(PolicyModel& model, Optimizer& opt, std::span<const Example> batch,
                                      const RewardFn& reward, const Vocab& vocab, const TrainConfig& config,
                                      Rng& rng) {
  auto res = self_critical_gradients(model, batch, reward, vocab, config, rng);
  if (config.grad_clip > 0.0) clip_gradient(res.grad, config.grad_clip);
  opt.step(model.params(), res.grad);
  return res;
}

double nll_step(PolicyModel& model, Optimizer& opt, std::span<const TrainingSequence> batch) {
  auto lg = nll_loss_and_grad(model, batch);
  opt.step(model.params(), lg.grad);
  return lg.loss;
}

std::string log_entry_to_json(const LogEntry& e) {
  nlohmann::ordered_json j;
  j["step"] = e.step;
  j["phase"] = e.phase;
  j["nll"] = e.nll;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["rl_loss"] = opt(e.rl_loss);
  j["mixed"] = opt(e.mixed);
  j["mean_reward"] = opt(e.mean_reward);
  j["mean_advantage"] = opt(e.mean_advantage);
  return j.dump();
}

namespace {

std::string too_small_message(std::size_t n, std::size_t batch) {
  return "corpus has " + std::to_string(n) + " stories, fewer than the batch size " + std::to_string(batch);
}

void emit(std::vector<LogEntry>& log, const LogSink& sink, LogEntry e) {
  if (sink) sink(e);
  log.push_back(std::move(e));
}

}  // namespace

double validation_reward(const PolicyModel& model, std::span<const Example> validation, const RewardFn& reward,
                         const Vocab& vocab, const TrainConfig& config, std::uint64_t seed) {
  if (validation.empty()) return 0.0;
  Rng rng(seed);
  const std::size_t k = config.effective_top_k(vocab.size());
  double total = 0.0;
  for (const auto& ex : validation) {
    const auto g = sample_story(model, ex.title, ex.arc, vocab, k, config.temperature, rng, config.length_cap);
    total += reward(g.story, ex.arc);
  }
  return total / static_cast<double>(validation.size());
}

void finetune(PolicyModel& model, const std::vector<Example>& examples, const Vocab& vocab, const TrainConfig& config,
              const RewardFn& reward, Rng& rng, std::vector<LogEntry>& log, const LogSink& sink,
              std::span<const Example> validation) {
  if (examples.size() < config.batch_size) throw TooSmallCorpus(too_small_message(examples.size(), config.batch_size));
  const double lr = config.finetune_learning_rate > 0.0 ? config.finetune_learning_rate : config.learning_rate;
  Optimizer opt(config.finetune_optimizer, lr, model.num_params());
  const bool select = config.finetune_eval_interval > 0 && !validation.empty();
  // the same draws at every evaluation, so checkpoints are compared on equal terms
  const std::uint64_t val_seed = select ? rng.next() : 0;
  double best = 0.0;
  PolicyModel best_model = model;
  auto evaluate = [&](std::size_t step) {
    const double r = validation_reward(model, validation, reward, vocab, config, val_seed);
    emit(log, sink, {step, "reward-val", 0.0, std::nullopt, std::nullopt, r, std::nullopt});
    return r;
  };
  if (select) best = evaluate(0);

  std::vector<Example> batch(config.batch_size);
  for (std::size_t step = 1; step <= config.finetune_steps; ++step) {
    for (auto& ex : batch) ex = examples[static_cast<std::size_t>(rng.below(examples.size()))];
    const auto res = self_critical_step(model, opt, batch, reward, vocab, config, rng);
    emit(log, sink, {step, "mixed", res.ml_loss, res.rl_loss, res.mixed_loss, res.mean_sample_reward,
                     res.mean_advantage});
    if (select && step % config.finetune_eval_interval == 0) {
      const double r = evaluate(step);
      if (r > best) {
        best = r;
        best_model = model;
      }
    }
  }
  if (select) model = std::move(best_model);
}

TrainResult train(const std::vector<AnnotatedStory>& corpus, const TrainConfig& config, const RewardFn& reward,
                  const LogSink& sink) {
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (corpus.size() < config.batch_size) throw TooSmallCorpus(too_small_message(corpus.size(), config.batch_size));

  TrainResult out;
  Rng rng(config.seed);
  out.vocab = Vocab::build(corpus);
  auto examples = make_examples(corpus, out.vocab);

  // validation split, at least one story, never the whole corpus
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t n_val = static_cast<std::size_t>(config.validation_fraction * static_cast<double>(examples.size()));
  n_val = std::clamp<std::size_t>(n_val, 1, examples.size() > config.batch_size ? examples.size() - config.batch_size : 0);
  std::vector<TrainingSequence> val;
  std::vector<Example> val_examples, train_set;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < n_val) {
      val.push_back(examples[order[i]].sequence);
      val_examples.push_back(examples[order[i]]);
    } else {
      train_set.push_back(examples[order[i]]);
    }
  }

  PolicyShape shape;
  shape.vocab = out.vocab.size();
  shape.dim = config.dim;
  shape.hidden = config.hidden;
  PolicyModel model(shape, rng);

  Optimizer opt(config.optimizer, config.learning_rate, model.num_params());
  std::vector<std::size_t> perm(train_set.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::size_t cursor = perm.size();
  std::vector<TrainingSequence> batch(config.batch_size);

  double best = val.empty() ? 0.0 : nll_loss(model, val);
  PolicyModel best_model = model;
  std::size_t since_best = 0;
  std::size_t step = 0;
  while (step < config.max_pretrain_steps) {
    for (auto& s : batch) {
      if (cursor == perm.size()) {
        rng.shuffle(perm);
        cursor = 0;
      }
      s = train_set[perm[cursor++]].sequence;
    }
    ++step;
    const double loss = nll_step(model, opt, batch);
    emit(out.log, sink, {step, "nll", loss, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
    if (step % config.eval_interval == 0 && !val.empty()) {
      const double v = nll_loss(model, val);
      emit(out.log, sink, {step, "nll-val", v, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
      if (v < best - config.min_delta) {
        best = v;
        best_model = model;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        break;
      }
    }
  }
  out.pretrain_steps = step;
  out.best_validation_nll = best;
  out.pretrained = best_model;
  model = best_model;

  finetune(model, train_set, out.vocab, config, reward, rng, out.log, sink, val_examples);
  out.model = std::move(model);
  return out;
}

}  // namespace emoarc::policy
