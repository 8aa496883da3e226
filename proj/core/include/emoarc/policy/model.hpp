#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "emoarc/policy/vocab.hpp"
#include "emoarc/rng.hpp"

namespace emoarc::policy {

// Fixed-window neural language model. The input concatenates the three arc
// token embeddings from the prompt, a focus vector, a sentence-position
// embedding (how many sentences of the story are finished) and the
// embeddings of the previous `window` tokens; one tanh layer feeds a softmax
// over the vocabulary. The focus vector is a softmax-weighted mix of the arc
// embeddings with one learned row of weights per sentence position, so each
// part of the story can pick out its own arc emotion.
struct PolicyShape {
  std::size_t vocab = 0;
  std::size_t dim = 16;
  std::size_t hidden = 64;
  std::size_t window = 4;
  std::size_t positions = 6;

  std::size_t slots() const noexcept { return kArcLength + 2 + window; }
  std::size_t input_dim() const noexcept { return slots() * dim; }
  bool operator==(const PolicyShape&) const = default;
};

struct ParamBlock {
  std::string_view name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;
  std::size_t size() const noexcept { return rows * cols; }
};

enum BlockIndex : std::size_t { kEmbed = 0, kPosition, kArcFocus, kHiddenW, kHiddenB, kOutputW, kOutputB, kNumBlocks };

std::array<ParamBlock, kNumBlocks> param_layout(const PolicyShape& shape);

class PolicyModel {
 public:
  PolicyModel() = default;
  PolicyModel(const PolicyShape& shape, Rng& rng);                // random init
  PolicyModel(const PolicyShape& shape, std::vector<double> params);  // takes ownership; checks size

  const PolicyShape& shape() const noexcept { return shape_; }
  const std::array<ParamBlock, kNumBlocks>& blocks() const noexcept { return blocks_; }
  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }
  std::size_t num_params() const noexcept { return params_.size(); }

  const double* block(BlockIndex b) const noexcept { return params_.data() + blocks_[b].offset; }

  bool operator==(const PolicyModel& o) const { return shape_ == o.shape_ && params_ == o.params_; }

 private:
  PolicyShape shape_;
  std::array<ParamBlock, kNumBlocks> blocks_{};
  std::vector<double> params_;
};

struct Context {
  std::array<TokenId, kArcLength> arc{};
  std::size_t position = 0;
  std::vector<TokenId> window;  // oldest first; <bos>-padded
};

// Context for predicting ids[t]; arc tokens come from ids[1..3].
Context context_at(const std::vector<TokenId>& ids, std::size_t t, std::size_t sentence_pos,
                   const PolicyShape& shape);

struct Activations {
  std::array<double, kArcLength> focus{};  // attention over the arc slots
  std::vector<double> x;
  std::vector<double> h;
  std::vector<double> logits;
  std::vector<double> logp;
};

void forward(const PolicyModel& model, const Context& ctx, Activations& act);

// grad += coef * d(-log p(target | ctx)) / d(params). `act` must hold the
// forward pass for ctx.
void backward(const PolicyModel& model, const Context& ctx, const Activations& act, TokenId target, double coef,
              std::span<double> grad);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
  std::size_t positions = 0;
};

// Mean negative log-likelihood over every loss position of the batch.
LossAndGrad nll_loss_and_grad(const PolicyModel& model, std::span<const TrainingSequence> batch);
double nll_loss(const PolicyModel& model, std::span<const TrainingSequence> batch);

// Sum of log p over the loss positions of one sequence.
double sequence_logprob(const PolicyModel& model, const TrainingSequence& seq);

}  // namespace emoarc::policy
