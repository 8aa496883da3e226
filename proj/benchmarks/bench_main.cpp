#include <benchmark/benchmark.h>

#include <array>
#include <memory>
#include <random>

#include "emoarc/arcpipe.hpp"
#include "emoarc/emolex.hpp"
#include "emoarc/oracle.hpp"
#include "emoarc/policy/synth.hpp"
#include "emoarc/policy/trainer.hpp"
#include "emoarc/protagonist.hpp"
#include "emoarc/rewards.hpp"

using namespace emoarc;
using namespace emoarc::policy;

namespace {

std::shared_ptr<const AffectLexicon> lexicon() {
  static auto lex = std::make_shared<const AffectLexicon>(load_lexicon(std::string(EMOARC_DATA) + "/affect_lexicon.tsv"));
  return lex;
}

const std::vector<AnnotatedStory>& corpus() {
  static const auto c = [] {
    Rng rng(1);
    return make_synthetic_corpus(ArcDistribution::uniform(), 200, *lexicon(), rng);
  }();
  return c;
}

void BM_AlignToArc(benchmark::State& state) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 3>> sim(static_cast<std::size_t>(state.range(0)));
  for (auto& row : sim)
    for (auto& x : row) x = u(gen);
  for (auto _ : state) benchmark::DoNotOptimize(align_to_arc(sim));
}
BENCHMARK(BM_AlignToArc)->Arg(5)->Arg(50);

void BM_LexiconClassifier(benchmark::State& state) {
  LexiconClassifier clf(lexicon());
  const auto text = corpus()[0].story.text();
  for (auto _ : state) benchmark::DoNotOptimize(clf.probs(text));
}
BENCHMARK(BM_LexiconClassifier);

void BM_AnnotateStory(benchmark::State& state) {
  const auto plex = load_protagonist_lexicon(std::string(EMOARC_DATA) + "/protagonists.json");
  LexiconOracle oracle(lexicon());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(annotate_story(corpus()[i % corpus().size()].story, oracle, plex, *lexicon()));
    ++i;
  }
}
BENCHMARK(BM_AnnotateStory);

struct PolicySetup {
  Vocab vocab;
  PolicyModel model;
  std::vector<Example> examples;
  PolicySetup() : vocab(Vocab::build(corpus())) {
    PolicyShape shape;
    shape.vocab = vocab.size();
    Rng rng(2);
    model = PolicyModel(shape, rng);
    examples = make_examples(corpus(), vocab);
  }
};

void BM_NllStep(benchmark::State& state) {
  PolicySetup s;
  Optimizer opt(OptimizerKind::sgd, 0.05, s.model.num_params());
  std::vector<TrainingSequence> batch;
  for (std::size_t i = 0; i < 4; ++i) batch.push_back(s.examples[i].sequence);
  for (auto _ : state) benchmark::DoNotOptimize(nll_step(s.model, opt, batch));
}
BENCHMARK(BM_NllStep)->Unit(benchmark::kMillisecond);

void BM_SelfCriticalStep(benchmark::State& state) {
  PolicySetup s;
  TrainConfig cfg;
  Optimizer opt(OptimizerKind::sgd, 0.01, s.model.num_params());
  auto reward = make_ec_clf_reward(std::make_shared<LexiconClassifier>(lexicon()));
  std::vector<Example> batch(s.examples.begin(), s.examples.begin() + 4);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(self_critical_step(s.model, opt, batch, reward, s.vocab, cfg, rng));
}
BENCHMARK(BM_SelfCriticalStep)->Unit(benchmark::kMillisecond);

void BM_SampleStory(benchmark::State& state) {
  PolicySetup s;
  Rng rng(4);
  const EmotionArc arc{BasicEmotion::joy, BasicEmotion::fear, BasicEmotion::sadness};
  for (auto _ : state) benchmark::DoNotOptimize(sample_story(s.model, "Summer Trip", arc, s.vocab, 40, 0.7, rng));
}
BENCHMARK(BM_SampleStory)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
