// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion names
// on the command line to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "cli_harness.hpp"
#include "emoarc/arcpipe.hpp"
#include "emoarc/emolex.hpp"
#include "emoarc/metrics.hpp"
#include "emoarc/oracle.hpp"
#include "emoarc/policy/synth.hpp"
#include "emoarc/policy/trainer.hpp"
#include "emoarc/protagonist.hpp"
#include "emoarc/rewards.hpp"
#include "policy_fixture.hpp"
#include "test_support.hpp"

using namespace emoarc;
using namespace emoarc::policy;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kDpTolerance = 1e-9;
constexpr int kDpCases = 1000;
constexpr double kDpBudgetSeconds = 10.0;
constexpr double kFdEpsilon = 1e-5;
constexpr double kFdMaxRelativeError = 1e-4;
constexpr double kFdFloor = 1e-6;
constexpr double kGradientBudgetSeconds = 30.0;
constexpr std::size_t kEfficacyCorpus = 2000;
constexpr std::size_t kEfficacyMaxVocab = 400;
constexpr std::size_t kEfficacyPrompts = 200;
constexpr double kEfficacyMinRewardGain = 0.05;
constexpr double kEfficacyMinArcAccGain = 10.0;  // percentage points
constexpr double kEfficacyBudgetSeconds = 600.0;
constexpr std::size_t kFidelityStories = 500;
constexpr double kFidelityMinRecovery = 0.90;
constexpr std::size_t kRandomStories = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const EmotionArc kJoyArc{BasicEmotion::joy, BasicEmotion::joy, BasicEmotion::joy};

// ---------------------------------------------------------------------------

Outcome ec_em_dp() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(0, 6);
  double worst = 0.0;
  for (int c = 0; c < kDpCases; ++c) {
    std::vector<std::array<double, 3>> sim(static_cast<std::size_t>(len(gen)));
    for (auto& row : sim)
      for (auto& x : row) x = u(gen) < 0.15 ? 0.0 : u(gen);
    const double dp = align_to_arc(sim).raw_distance;
    worst = std::max(worst, std::abs(dp - testsupport::brute_force_alignment(sim)));
  }
  const double secs = seconds_since(t0);
  return {worst <= kDpTolerance && secs < kDpBudgetSeconds,
          std::to_string(kDpCases) + " cases, max |dp - brute| = " + fmt("%.3g", worst) + ", " + fmt("%.2f s", secs)};
}

Outcome gradients() {
  const auto t0 = Clock::now();
  double worst_nll = 0.0, worst_mixed = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    auto m = testsupport::micro_policy(seed);
    auto nll = nll_loss_and_grad(m.model, m.sequences);
    auto c1 = testsupport::check_gradient(
        m.model, nll.grad, [&](const PolicyModel& p) { return nll_loss(p, m.sequences); }, kFdEpsilon, kFdFloor);
    worst_nll = std::max(worst_nll, c1.max_relative_error);
    checked += c1.checked;

    Rng rng(seed + 1000);
    std::vector<Rollout> rollouts;
    for (std::size_t i = 0; i < m.examples.size(); ++i) {
      auto g = sample_story(m.model, m.examples[i].title, m.examples[i].arc, m.vocab, m.vocab.size(), 1.0, rng, 10);
      rollouts.push_back({g.sequence, rng.uniform(-1.0, 1.0)});
    }
    const double gamma = 0.97;
    auto rl = rl_loss_and_grad(m.model, rollouts);
    auto grad = mix_gradients(gamma, rl.grad, nll.grad);
    auto c2 = testsupport::check_gradient(
        m.model, grad,
        [&](const PolicyModel& p) {
          return gamma * rl_loss_and_grad(p, rollouts).loss + (1.0 - gamma) * nll_loss(p, m.sequences);
        },
        kFdEpsilon, kFdFloor);
    worst_mixed = std::max(worst_mixed, c2.max_relative_error);
    checked += c2.checked;
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_nll < kFdMaxRelativeError && worst_mixed < kFdMaxRelativeError && secs < kGradientBudgetSeconds;
  return {ok, std::to_string(checked) + " components, max rel err nll " + fmt("%.2g", worst_nll) + ", mixed " +
                  fmt("%.2g", worst_mixed) + ", " + fmt("%.2f s", secs)};
}

double length_reward(const Story& s, const EmotionArc&) {
  return std::min(1.0, static_cast<double>(s.text().size()) / 40.0);
}

Outcome mixed_endpoints() {
  auto m = testsupport::micro_policy(200);
  TrainConfig cfg;
  cfg.batch_size = m.examples.size();
  cfg.top_k = 5;
  cfg.length_cap = 10;

  // gamma = 0: parameters after a mixed step equal those after an NLL step, bit for bit.
  cfg.gamma = 0.0;
  PolicyModel a = m.model, b = m.model;
  Optimizer oa(OptimizerKind::sgd, cfg.learning_rate, a.num_params()), ob(OptimizerKind::sgd, cfg.learning_rate, b.num_params());
  Rng rng(201);
  bool bitwise = true;
  for (int step = 0; step < 5; ++step) {
    self_critical_step(a, oa, m.examples, length_reward, m.vocab, cfg, rng);
    nll_step(b, ob, m.sequences);
    bitwise = bitwise && a == b;
  }

  // gamma = 1: the applied gradient is exactly the policy-gradient term.
  cfg.gamma = 1.0;
  Rng r1(202);
  auto res = self_critical_gradients(m.model, m.examples, length_reward, m.vocab, cfg, r1);
  bool ml_free = res.grad == res.rl_grad && res.mixed_loss == res.rl_loss;
  bool nonzero = false;
  for (double g : res.rl_grad) nonzero = nonzero || g != 0.0;
  return {bitwise && ml_free && nonzero, std::string("gamma=0 step bitwise equal to NLL step: ") +
                                             (bitwise ? "yes" : "no") + "; gamma=1 gradient equals RL gradient: " +
                                             (ml_free ? "yes" : "no")};
}

Outcome self_critical_baseline() {
  auto m = testsupport::micro_policy(300);
  TrainConfig cfg;
  cfg.gamma = 1.0;
  cfg.batch_size = m.examples.size();
  cfg.top_k = 5;
  cfg.length_cap = 10;
  Rng rng(301);
  auto constant = [](const Story&, const EmotionArc&) { return 0.42; };
  std::size_t nonzero = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto res = self_critical_gradients(m.model, m.examples, constant, m.vocab, cfg, rng);
    for (double g : res.rl_grad) nonzero += g != 0.0 ? 1 : 0;
  }
  return {nonzero == 0, std::to_string(nonzero) + " non-zero RL gradient components over 10 batches"};
}

// ---------------------------------------------------------------------------

struct PolicyScore {
  double reward = 0.0;
  double arc_acc = 0.0;  // percent
};

PolicyScore score_policy(const PolicyModel& model, const Vocab& vocab, const std::vector<Prompt>& prompts,
                         const EmotionClassifier& clf, const TrainConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  PolicyScore s;
  for (const auto& p : prompts) {
    auto g = sample_story(model, p.title, p.arc, vocab, cfg.effective_top_k(vocab.size()), cfg.temperature, rng,
                          cfg.length_cap);
    s.reward += ec_clf(g.story.sentences, p.arc, clf).reward;
    s.arc_acc += seg_acc(g.story.sentences, p.arc, clf).all ? 100.0 : 0.0;
  }
  s.reward /= static_cast<double>(prompts.size());
  s.arc_acc /= static_cast<double>(prompts.size());
  return s;
}

TrainConfig efficacy_config() {
  TrainConfig cfg;
  cfg.gamma = 0.97;
  cfg.seed = 7;
  cfg.optimizer = OptimizerKind::adam;
  cfg.learning_rate = 3e-3;
  cfg.patience = 8;
  cfg.finetune_optimizer = OptimizerKind::adam;
  cfg.finetune_learning_rate = 1e-4;
  cfg.finetune_steps = 1500;
  cfg.finetune_eval_interval = 50;
  cfg.grad_clip = 1.0;
  return cfg;
}

Outcome rl_efficacy() {
  const auto t0 = Clock::now();
  const auto lex = testsupport::lexicon();
  const auto dist = ArcDistribution::majority(kJoyArc, 0.4);
  Rng corpus_rng(1);
  const auto corpus = make_synthetic_corpus(dist, kEfficacyCorpus, *lex, corpus_rng);
  Rng prompt_rng(2);
  const auto prompts = sample_prompts(dist, kEfficacyPrompts, prompt_rng);
  auto clf = std::make_shared<LexiconClassifier>(lex);

  const auto cfg = efficacy_config();
  auto res = train(corpus, cfg, make_ec_clf_reward(clf));
  const auto before = score_policy(res.pretrained, res.vocab, prompts, *clf, cfg, 99);
  const auto after = score_policy(res.model, res.vocab, prompts, *clf, cfg, 99);
  const double secs = seconds_since(t0);

  const double dr = after.reward - before.reward;
  const double dacc = after.arc_acc - before.arc_acc;
  const bool ok = res.vocab.size() <= kEfficacyMaxVocab && dr >= kEfficacyMinRewardGain &&
                  dacc >= kEfficacyMinArcAccGain && secs < kEfficacyBudgetSeconds;
  return {ok, "vocab " + std::to_string(res.vocab.size()) + ", EC-Clf " + fmt("%.4f", before.reward) + " -> " +
                  fmt("%.4f", after.reward) + " (" + fmt("%+.4f", dr) + "), Arc-acc " + fmt("%.1f", before.arc_acc) +
                  " -> " + fmt("%.1f", after.arc_acc) + " (" + fmt("%+.1f pp", dacc) + "), " +
                  std::to_string(res.pretrain_steps) + " pretrain steps, " + fmt("%.0f s", secs)};
}

// ---------------------------------------------------------------------------

Outcome pipeline_fidelity() {
  const auto lex = testsupport::lexicon();
  const auto plex = testsupport::protagonists();
  Rng rng(11);
  const auto corpus = make_synthetic_corpus(ArcDistribution::majority(kJoyArc, 0.4), kFidelityStories, *lex, rng);
  std::vector<Story> stories;
  for (const auto& r : corpus) stories.push_back(r.story);
  LexiconOracle oracle(lex);
  const auto ann = annotate_corpus(stories, oracle, *plex, *lex, false);
  std::size_t recovered = 0;
  for (std::size_t i = 0; i < ann.records.size(); ++i) recovered += ann.records[i].arc == corpus[i].arc ? 1 : 0;
  const double rate = static_cast<double>(recovered) / static_cast<double>(kFidelityStories);

  const Story iris{"Iris", {"Iris entered her roses in the flower show.", "She worked on them for weeks.",
                            "She arrived early on the day of the show.", "The judges took a long time.",
                            "Iris won first prize."}};
  const auto roles = track(iris, *plex).roles;
  const std::vector<Role> expected{Role::agent, Role::agent, Role::agent, Role::other, Role::agent};
  std::string role_str;
  for (auto r : roles) role_str += std::string(role_str.empty() ? "" : ",") + std::string(to_string(r));
  return {rate >= kFidelityMinRecovery && roles == expected,
          "planted arc recovered on " + std::to_string(recovered) + "/" + std::to_string(kFidelityStories) + " (" +
              fmt("%.1f%%", 100.0 * rate) + "); Iris roles [" + role_str + "]"};
}

Outcome metric_units() {
  std::vector<std::string> fails;
  auto toks = [](std::initializer_list<const char*> w) { return std::vector<std::string>(w.begin(), w.end()); };
  const auto d1 = distinct_n({toks({"a", "a", "a", "a"})}, 1);
  if (!d1 || std::abs(*d1 - 25.0) > 1e-12) fails.push_back("distinct-1");
  const auto rep_pos = repetition_4({toks({"a", "b", "c", "d", "a", "b", "c", "d"})});
  const auto rep_neg = repetition_4({toks({"a", "b", "c", "d", "e", "f", "g", "h"})});
  if (!rep_pos || *rep_pos != 100.0 || !rep_neg || *rep_neg != 0.0) fails.push_back("repetition-4");
  const TokenizedCorpus c{toks({"the", "cat", "sat", "on", "the", "mat", "."}), toks({"tom", "was", "happy", "."})};
  if (std::abs(bleu(c, c, 1) - 100.0) > 1e-9 || std::abs(bleu(c, c, 2) - 100.0) > 1e-9) fails.push_back("bleu");

  // A full-arc word match implies a full segment score on random stories.
  const auto lex = testsupport::lexicon();
  const auto dict = emotion_word_dict(*lex, kEmotionWordThreshold);
  Rng rng(12);
  const auto corpus = make_synthetic_corpus(ArcDistribution::uniform(), kRandomStories, *lex, rng);
  std::size_t arc_hits = 0, violations = 0;
  for (const auto& r : corpus) {
    const EmotionArc target = rng.bernoulli(0.5) ? r.arc : ArcDistribution::uniform().sample(rng);
    const auto s = seg_word(r.story.sentences, target, dict, lex.get());
    if (s.all) {
      ++arc_hits;
      if (s.percentage != 100.0) ++violations;
    }
  }
  if (violations > 0) fails.push_back("arc-word implies seg-word");
  std::string detail = "distinct-1 " + fmt("%.1f", d1.value_or(-1)) + ", repetition-4 " +
                       fmt("%.0f", rep_pos.value_or(-1)) + "/" + fmt("%.0f", rep_neg.value_or(-1)) + ", BLEU self " +
                       fmt("%.1f", bleu(c, c, 2)) + ", arc-word stories " + std::to_string(arc_hits) + "/" +
                       std::to_string(kRandomStories) + " all with seg-word 100";
  for (const auto& f : fails) detail += "; failed: " + f;
  return {fails.empty(), detail};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const auto dir = testsupport::scratch("acceptance-determinism");
  const auto corpus = dir / "corpus.jsonl";
  if (testsupport::run_cli({"synth-corpus", "--size", "200", "--seed", "4", "--out", corpus.string()}).code != 0) {
    return {false, "synth-corpus failed"};
  }
  std::vector<std::string> diffs;
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("run" + std::to_string(run));
    auto t = testsupport::run_cli({"train", "--corpus", corpus.string(), "--out", out.string(), "--pretrain-steps",
                                   "1000", "--eval-interval", "100", "--finetune-steps", "40", "--dim", "8",
                                   "--hidden", "24", "--seed", "13"});
    if (t.code != 0) return {false, "train failed: " + t.err};
    auto g = testsupport::run_cli({"generate", "--ckpt", out.string(), "--title", "Summer Trip", "--arc",
                                   "joy,fear,joy", "--count", "20", "--seed", "5", "--json"});
    if (g.code != 0) return {false, "generate failed: " + g.err};
    std::ofstream(out / "gen.jsonl") << g.out;
    std::ofstream arcs(out / "arcs.txt");
    for (int i = 0; i < 20; ++i) arcs << "joy,fear,joy\n";
    arcs.close();
    auto e = testsupport::run_cli({"eval", "--generated", (out / "gen.jsonl").string(), "--arcs",
                                   (out / "arcs.txt").string(), "--ckpt", (out / "policy.ckpt").string(), "--out",
                                   (out / "report.json").string()});
    if (e.code != 0) return {false, "eval failed: " + e.err};
    for (const char* f : {"policy.ckpt", "pretrained.ckpt", "train_log.jsonl", "gen.jsonl", "report.json"}) {
      outputs[run].push_back(testsupport::slurp(out / f));
    }
  }
  const char* names[] = {"policy.ckpt", "pretrained.ckpt", "train_log.jsonl", "generate output", "eval report"};
  for (std::size_t i = 0; i < outputs[0].size(); ++i) {
    if (outputs[0][i] != outputs[1][i]) diffs.push_back(names[i]);
  }
  std::string detail = "train, generate and eval outputs compared across two runs";
  for (const auto& d : diffs) detail += "; differs: " + d;
  fs::remove_all(dir);
  return {diffs.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ec-em-dp-matches-brute-force", ec_em_dp},
      {"gradients-match-finite-differences", gradients},
      {"mixed-loss-endpoints", mixed_endpoints},
      {"self-critical-baseline", self_critical_baseline},
      {"pipeline-fidelity", pipeline_fidelity},
      {"metric-unit-values", metric_units},
      {"determinism", determinism},
      {"rl-efficacy", rl_efficacy},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
