#include <doctest.h>

#include <cmath>
#include <sstream>

#include "emoarc/errors.hpp"
#include "emoarc/policy/checkpoint.hpp"
#include "emoarc/policy/decode.hpp"
#include "emoarc/policy/model.hpp"
#include "emoarc/policy/vocab.hpp"
#include "policy_fixture.hpp"
#include "test_support.hpp"

using namespace emoarc;
using namespace emoarc::policy;

TEST_CASE("vocabulary layout") {
  Vocab v;
  CHECK(v.size() == 9);
  CHECK(v.token(Vocab::kBos) == "<bos>");
  CHECK(v.token(Vocab::kEos) == "<eos>");
  CHECK(v.token(Vocab::arc_token(BasicEmotion::joy)) == "<joy>");
  CHECK(v.token(Vocab::arc_token(BasicEmotion::neutral)) == "<neutral>");
  CHECK(v.id("missing") == Vocab::kUnk);
  const auto id = v.add("tom");
  CHECK(id == Vocab::kFirstWord);
  CHECK(v.add("tom") == id);
  v.add(".");
  CHECK(v.is_terminator(v.id(".")));
  CHECK_FALSE(v.is_terminator(id));

  auto round = Vocab::from_tokens(v.tokens());
  CHECK(round.tokens() == v.tokens());
  auto bad = v.tokens();
  std::swap(bad[0], bad[1]);
  CHECK_THROWS_AS(Vocab::from_tokens(bad), DataError);
  auto dup = v.tokens();
  dup.push_back("tom");
  CHECK_THROWS_AS(Vocab::from_tokens(dup), DataError);
}

TEST_CASE("vocabulary from a corpus is sorted") {
  std::vector<AnnotatedStory> corpus{{{"Big Day", {"Tom won.", "Ann lost."}}, {}, {}, false}};
  auto v = Vocab::build(corpus);
  std::vector<std::string> words(v.tokens().begin() + Vocab::kFirstWord, v.tokens().end());
  CHECK(words == std::vector<std::string>{".", "ann", "big", "day", "lost", "tom", "won"});
}

TEST_CASE("training sequence layout") {
  Vocab v;
  for (const char* w : {".", "tom", "won", "day"}) v.add(w);
  const EmotionArc arc{BasicEmotion::joy, BasicEmotion::fear, BasicEmotion::anger};
  auto seq = make_training_sequence("Day", arc, {"tom", "won", ".", "tom", "won", "."}, v);
  const std::vector<TokenId> prompt{Vocab::kBos, Vocab::arc_token(BasicEmotion::joy),
                                    Vocab::arc_token(BasicEmotion::fear), Vocab::arc_token(BasicEmotion::anger),
                                    Vocab::kSep, v.id("day"), Vocab::kSep};
  CHECK(std::vector<TokenId>(seq.ids.begin(), seq.ids.begin() + 7) == prompt);
  CHECK(prompt_ids("Day", arc, v) == prompt);
  CHECK(seq.story_begin == 7);
  CHECK(seq.ids.back() == Vocab::kEos);
  CHECK(seq.loss_end == seq.ids.size());
  CHECK(seq.loss_positions() == 7);
  const std::vector<std::size_t> pos{0, 0, 0, 1, 1, 1, 2};
  CHECK(std::vector<std::size_t>(seq.sentence_pos.begin() + 7, seq.sentence_pos.end()) == pos);
  CHECK(decode({Vocab::kBos, v.id("tom")}, v) == std::vector<std::string>{"<bos>", "tom"});

  auto empty = make_training_sequence("Day", arc, {}, v);
  CHECK(empty.loss_positions() == 0);
}

TEST_CASE("context window") {
  auto m = testsupport::micro_policy(1);
  const auto& seq = m.sequences[0];
  auto ctx = context_at(seq.ids, seq.story_begin, 0, m.model.shape());
  CHECK(ctx.arc[0] == Vocab::arc_token(BasicEmotion::joy));
  CHECK(ctx.arc[2] == Vocab::arc_token(BasicEmotion::fear));
  CHECK(ctx.window == std::vector<TokenId>{seq.ids[seq.story_begin - 2], seq.ids[seq.story_begin - 1]});
  auto first = context_at(seq.ids, 0, 0, m.model.shape());
  CHECK(first.window == std::vector<TokenId>{Vocab::kBos, Vocab::kBos});
}

TEST_CASE("uniform logits give loss ln V") {
  auto m = testsupport::micro_policy(2);
  PolicyModel zero(m.model.shape(), std::vector<double>(m.model.num_params(), 0.0));
  auto lg = nll_loss_and_grad(zero, m.sequences);
  CHECK(lg.loss == doctest::Approx(std::log(static_cast<double>(m.vocab.size()))).epsilon(1e-12));
  CHECK(nll_loss(zero, m.sequences) == doctest::Approx(lg.loss).epsilon(1e-12));
}

TEST_CASE("likelihood gradient matches finite differences") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    auto m = testsupport::micro_policy(seed);
    auto lg = nll_loss_and_grad(m.model, m.sequences);
    auto chk = testsupport::check_gradient(m.model, lg.grad,
                                           [&](const PolicyModel& p) { return nll_loss(p, m.sequences); });
    CHECK(chk.checked == m.model.num_params());
    CHECK(chk.max_relative_error < 1e-4);
  }
}

TEST_CASE("sequence log-probability is the sum of token log-probabilities") {
  auto m = testsupport::micro_policy(6);
  const auto& seq = m.sequences[1];
  double sum = 0.0;
  Activations act;
  for (std::size_t t = seq.story_begin; t < seq.loss_end; ++t) {
    forward(m.model, context_at(seq.ids, t, seq.sentence_pos[t], m.model.shape()), act);
    double z = 0.0;
    for (double l : act.logits) z += std::exp(l);
    sum += act.logits[static_cast<std::size_t>(seq.ids[t])] - std::log(z);
  }
  CHECK(sequence_logprob(m.model, seq) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("truncated distribution") {
  const std::vector<double> logits{1.0, 3.0, 2.0, 3.0};
  auto p = truncated_distribution(logits, 2, 1.0);
  CHECK(p[0] == 0.0);
  CHECK(p[2] == 0.0);
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[3] == doctest::Approx(0.5));
  // Ties at the cut keep the lower id.
  auto one = truncated_distribution(logits, 1, 1.0);
  CHECK(one[1] == 1.0);
  CHECK(one[3] == 0.0);
  auto cold = truncated_distribution({0.0, std::log(2.0)}, 2, 0.5);
  CHECK(cold[1] == doctest::Approx(0.8));
  auto all = truncated_distribution(logits, 10, 1.0);
  double s = 0.0;
  for (double x : all) s += x;
  CHECK(s == doctest::Approx(1.0));
  CHECK_THROWS_AS(truncated_distribution(logits, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(truncated_distribution(logits, 2, 0.0), std::invalid_argument);
}

TEST_CASE("top-1 sampling and near-zero temperature equal greedy decoding") {
  auto m = testsupport::micro_policy(7);
  const EmotionArc arc{BasicEmotion::joy, BasicEmotion::sadness, BasicEmotion::fear};
  auto greedy = greedy_story(m.model, "bad day", arc, m.vocab, 20);
  Rng rng(1);
  auto top1 = sample_story(m.model, "bad day", arc, m.vocab, 1, 0.7, rng, 20);
  auto cold = sample_story(m.model, "bad day", arc, m.vocab, m.vocab.size(), 1e-3, rng, 20);
  CHECK(top1.sequence.ids == greedy.sequence.ids);
  CHECK(cold.sequence.ids == greedy.sequence.ids);
  CHECK(greedy.hit_cap == (greedy.sequence.ids.back() != Vocab::kEos));
}

TEST_CASE("generation bookkeeping") {
  auto m = testsupport::micro_policy(8);
  const EmotionArc arc{BasicEmotion::anger, BasicEmotion::anger, BasicEmotion::joy};
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    auto g = sample_story(m.model, "day", arc, m.vocab, 5, 1.0, rng, 12);
    const auto& seq = g.sequence;
    CHECK(seq.loss_positions() == g.logprobs.size());
    CHECK(g.tokens.size() <= 12);
    CHECK(g.tokens.size() + (g.hit_cap ? 0 : 1) == g.logprobs.size());
    // Sampling at temperature 1 over the full vocabulary: logprobs agree
    // with a teacher-forced rescoring.
    auto full = sample_story(m.model, "day", arc, m.vocab, m.vocab.size(), 1.0, rng, 12);
    double sum = 0.0;
    for (double lp : full.logprobs) sum += lp;
    CHECK(sequence_logprob(m.model, full.sequence) == doctest::Approx(sum).epsilon(1e-12));
  }
  auto greedy = greedy_story(m.model, "day", arc, m.vocab, 12);
  double sum = 0.0;
  for (double lp : greedy.logprobs) sum += lp;
  CHECK(sequence_logprob(m.model, greedy.sequence) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("sampling is reproducible under a fixed seed") {
  auto m = testsupport::micro_policy(10);
  const EmotionArc arc{BasicEmotion::fear, BasicEmotion::joy, BasicEmotion::joy};
  Rng a(42), b(42);
  for (int i = 0; i < 5; ++i) {
    CHECK(sample_story(m.model, "day", arc, m.vocab, 4, 0.7, a, 16).sequence.ids ==
          sample_story(m.model, "day", arc, m.vocab, 4, 0.7, b, 16).sequence.ids);
  }
}

TEST_CASE("story from tokens") {
  auto s = story_from_tokens("T", {"tom", "was", "happy", ".", "he", "left", "."});
  CHECK(s.title == "T");
  CHECK(s.sentences == std::vector<std::string>{"Tom was happy.", "He left."});
}

TEST_CASE("checkpoint round trip") {
  auto m = testsupport::micro_policy(11);
  std::stringstream buf;
  save_checkpoint(m.vocab, m.model, buf);
  const std::string bytes = buf.str();
  auto back = load_checkpoint(buf);
  CHECK(back.vocab.tokens() == m.vocab.tokens());
  CHECK(back.model == m.model);
  std::stringstream again;
  save_checkpoint(back.vocab, back.model, again);
  CHECK(again.str() == bytes);

  const auto dir = testsupport::scratch("ckpt");
  save_checkpoint(m.vocab, m.model, dir / "p.ckpt");
  CHECK(load_checkpoint(dir / "p.ckpt").model == m.model);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.ckpt"), DataError);
}

TEST_CASE("corrupt checkpoints are rejected") {
  auto m = testsupport::micro_policy(12);
  std::stringstream buf;
  save_checkpoint(m.vocab, m.model, buf);
  const std::string bytes = buf.str();
  {
    std::stringstream in(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
  {
    std::string wrong = bytes;
    wrong.replace(0, 15, "EMOARC-POLICY 9");
    std::stringstream in(wrong);
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
  {
    std::stringstream in("not a checkpoint\n");
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
}
