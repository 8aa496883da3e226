#include "emoarc/policy/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emoarc/text.hpp"

namespace emoarc::policy {

std::array<ParamBlock, kNumBlocks> param_layout(const PolicyShape& s) {
  std::array<ParamBlock, kNumBlocks> b{{
      {"embed", s.vocab, s.dim, 0},
      {"position", s.positions, s.dim, 0},
      {"arc_focus", s.positions, kArcLength, 0},
      {"hidden_w", s.hidden, s.input_dim(), 0},
      {"hidden_b", s.hidden, 1, 0},
      {"output_w", s.vocab, s.hidden, 0},
      {"output_b", s.vocab, 1, 0},
  }};
  std::size_t off = 0;
  for (auto& blk : b) {
    blk.offset = off;
    off += blk.size();
  }
  return b;
}

namespace {

std::size_t total_size(const std::array<ParamBlock, kNumBlocks>& blocks) {
  return blocks.back().offset + blocks.back().size();
}

}  // namespace

PolicyModel::PolicyModel(const PolicyShape& shape, Rng& rng)
    : shape_(shape), blocks_(param_layout(shape)), params_(total_size(blocks_), 0.0) {
  auto fill = [&](BlockIndex b, double scale) {
    const auto& blk = blocks_[b];
    for (std::size_t i = 0; i < blk.size(); ++i) params_[blk.offset + i] = rng.uniform(-scale, scale);
  };
  fill(kEmbed, 0.3);
  fill(kPosition, 0.3);
  fill(kHiddenW, std::sqrt(3.0 / static_cast<double>(shape.input_dim())));
  fill(kOutputW, std::sqrt(3.0 / static_cast<double>(shape.hidden)));
}

PolicyModel::PolicyModel(const PolicyShape& shape, std::vector<double> params)
    : shape_(shape), blocks_(param_layout(shape)), params_(std::move(params)) {
  if (params_.size() != total_size(blocks_)) throw std::invalid_argument("parameter count does not match shape");
}

Context context_at(const std::vector<TokenId>& ids, std::size_t t, std::size_t sentence_pos,
                   const PolicyShape& shape) {
  Context ctx;
  for (std::size_t k = 0; k < kArcLength; ++k) ctx.arc[k] = k + 1 < ids.size() ? ids[k + 1] : Vocab::kBos;
  ctx.position = sentence_pos;
  ctx.window.assign(shape.window, Vocab::kBos);
  for (std::size_t k = 0; k < shape.window; ++k) {
    const auto back = shape.window - k;  // distance from t
    if (t >= back) ctx.window[k] = ids[t - back];
  }
  return ctx;
}

void forward(const PolicyModel& model, const Context& ctx, Activations& act) {
  const auto& s = model.shape();
  const double* embed = model.block(kEmbed);
  const double* pos = model.block(kPosition);
  const double* w1 = model.block(kHiddenW);
  const double* b1 = model.block(kHiddenB);
  const double* w2 = model.block(kOutputW);
  const double* b2 = model.block(kOutputB);

  const std::size_t row_pos = std::min(ctx.position, s.positions - 1);
  act.x.resize(s.input_dim());
  auto put = [&](std::size_t slot, const double* row) { std::copy(row, row + s.dim, act.x.begin() + slot * s.dim); };
  for (std::size_t k = 0; k < kArcLength; ++k) put(k, embed + static_cast<std::size_t>(ctx.arc[k]) * s.dim);

  const double* q = model.block(kArcFocus) + row_pos * kArcLength;
  const double qmax = *std::max_element(q, q + kArcLength);
  double qsum = 0.0;
  for (std::size_t k = 0; k < kArcLength; ++k) qsum += act.focus[k] = std::exp(q[k] - qmax);
  double* fx = act.x.data() + kArcLength * s.dim;
  std::fill(fx, fx + s.dim, 0.0);
  for (std::size_t k = 0; k < kArcLength; ++k) {
    act.focus[k] /= qsum;
    const double* e = embed + static_cast<std::size_t>(ctx.arc[k]) * s.dim;
    for (std::size_t i = 0; i < s.dim; ++i) fx[i] += act.focus[k] * e[i];
  }

  put(kArcLength + 1, pos + row_pos * s.dim);
  for (std::size_t k = 0; k < s.window; ++k) {
    put(kArcLength + 2 + k, embed + static_cast<std::size_t>(ctx.window[k]) * s.dim);
  }

  const std::size_t in = s.input_dim();
  act.h.resize(s.hidden);
  for (std::size_t j = 0; j < s.hidden; ++j) {
    const double* row = w1 + j * in;
    double a = b1[j];
    for (std::size_t i = 0; i < in; ++i) a += row[i] * act.x[i];
    act.h[j] = std::tanh(a);
  }
  act.logits.resize(s.vocab);
  double mx = -INFINITY;
  for (std::size_t v = 0; v < s.vocab; ++v) {
    const double* row = w2 + v * s.hidden;
    double z = b2[v];
    for (std::size_t j = 0; j < s.hidden; ++j) z += row[j] * act.h[j];
    act.logits[v] = z;
    mx = std::max(mx, z);
  }
  double sum = 0.0;
  for (double z : act.logits) sum += std::exp(z - mx);
  const double lse = mx + std::log(sum);
  act.logp.resize(s.vocab);
  for (std::size_t v = 0; v < s.vocab; ++v) act.logp[v] = act.logits[v] - lse;
}

void backward(const PolicyModel& model, const Context& ctx, const Activations& act, TokenId target, double coef,
              std::span<double> grad) {
  const auto& s = model.shape();
  const auto& bl = model.blocks();
  const double* w1 = model.block(kHiddenW);
  const double* w2 = model.block(kOutputW);
  double* g_embed = grad.data() + bl[kEmbed].offset;
  double* g_pos = grad.data() + bl[kPosition].offset;
  double* g_w1 = grad.data() + bl[kHiddenW].offset;
  double* g_b1 = grad.data() + bl[kHiddenB].offset;
  double* g_w2 = grad.data() + bl[kOutputW].offset;
  double* g_b2 = grad.data() + bl[kOutputB].offset;

  std::vector<double> dh(s.hidden, 0.0);
  for (std::size_t v = 0; v < s.vocab; ++v) {
    double dz = std::exp(act.logp[v]);
    if (static_cast<TokenId>(v) == target) dz -= 1.0;
    dz *= coef;
    g_b2[v] += dz;
    const double* row = w2 + v * s.hidden;
    double* grow = g_w2 + v * s.hidden;
    for (std::size_t j = 0; j < s.hidden; ++j) {
      grow[j] += dz * act.h[j];
      dh[j] += row[j] * dz;
    }
  }
  const std::size_t in = s.input_dim();
  std::vector<double> dx(in, 0.0);
  for (std::size_t j = 0; j < s.hidden; ++j) {
    const double da = dh[j] * (1.0 - act.h[j] * act.h[j]);
    g_b1[j] += da;
    const double* row = w1 + j * in;
    double* grow = g_w1 + j * in;
    for (std::size_t i = 0; i < in; ++i) {
      grow[i] += da * act.x[i];
      dx[i] += row[i] * da;
    }
  }
  auto scatter = [&](std::size_t slot, double* dst) {
    for (std::size_t k = 0; k < s.dim; ++k) dst[k] += dx[slot * s.dim + k];
  };
  const std::size_t row_pos = std::min(ctx.position, s.positions - 1);
  for (std::size_t k = 0; k < kArcLength; ++k) scatter(k, g_embed + static_cast<std::size_t>(ctx.arc[k]) * s.dim);

  // focus = sum_k a_k e_k with a = softmax(q)
  const double* embed = model.block(kEmbed);
  const double* dfocus = dx.data() + kArcLength * s.dim;
  std::array<double, kArcLength> da{};
  double mean_da = 0.0;
  for (std::size_t k = 0; k < kArcLength; ++k) {
    const auto row = static_cast<std::size_t>(ctx.arc[k]) * s.dim;
    for (std::size_t i = 0; i < s.dim; ++i) {
      da[k] += dfocus[i] * embed[row + i];
      g_embed[row + i] += act.focus[k] * dfocus[i];
    }
    mean_da += act.focus[k] * da[k];
  }
  double* g_q = grad.data() + bl[kArcFocus].offset + row_pos * kArcLength;
  for (std::size_t k = 0; k < kArcLength; ++k) g_q[k] += act.focus[k] * (da[k] - mean_da);

  scatter(kArcLength + 1, g_pos + row_pos * s.dim);
  for (std::size_t k = 0; k < s.window; ++k) {
    scatter(kArcLength + 2 + k, g_embed + static_cast<std::size_t>(ctx.window[k]) * s.dim);
  }
}

}  // namespace emoarc::policy

namespace emoarc::policy {

LossAndGrad nll_loss_and_grad(const PolicyModel& model, std::span<const TrainingSequence> batch) {
  LossAndGrad out;
  out.grad.assign(model.num_params(), 0.0);
  for (const auto& seq : batch) out.positions += seq.loss_positions();
  if (out.positions == 0) return out;
  const double coef = 1.0 / static_cast<double>(out.positions);
  Activations act;
  for (const auto& seq : batch) {
    for (std::size_t t = seq.story_begin; t < seq.loss_end; ++t) {
      const auto ctx = context_at(seq.ids, t, seq.sentence_pos[t], model.shape());
      forward(model, ctx, act);
      out.loss -= act.logp[static_cast<std::size_t>(seq.ids[t])];
      backward(model, ctx, act, seq.ids[t], coef, out.grad);
    }
  }
  out.loss *= coef;
  return out;
}

double nll_loss(const PolicyModel& model, std::span<const TrainingSequence> batch) {
  double loss = 0.0;
  std::size_t n = 0;
  for (const auto& seq : batch) {
    loss -= sequence_logprob(model, seq);
    n += seq.loss_positions();
  }
  return n == 0 ? 0.0 : loss / static_cast<double>(n);
}

double sequence_logprob(const PolicyModel& model, const TrainingSequence& seq) {
  Activations act;
  double lp = 0.0;
  for (std::size_t t = seq.story_begin; t < seq.loss_end; ++t) {
    forward(model, context_at(seq.ids, t, seq.sentence_pos[t], model.shape()), act);
    lp += act.logp[static_cast<std::size_t>(seq.ids[t])];
  }
  return lp;
}

}  // namespace emoarc::policy
