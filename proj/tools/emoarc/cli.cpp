#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "emoarc/arcpipe.hpp"
#include "emoarc/corpus.hpp"
#include "emoarc/embeddings.hpp"
#include "emoarc/emolex.hpp"
#include "emoarc/errors.hpp"
#include "emoarc/metrics.hpp"
#include "emoarc/oracle.hpp"
#include "emoarc/policy/checkpoint.hpp"
#include "emoarc/policy/decode.hpp"
#include "emoarc/policy/synth.hpp"
#include "emoarc/policy/trainer.hpp"
#include "emoarc/protagonist.hpp"
#include "emoarc/rewards.hpp"
#include "emoarc/text.hpp"

namespace emoarc::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

EmotionArc arc_arg(const std::string& s) {
  if (auto a = parse_arc(s)) return *a;
  std::string names;
  for (auto e : kAllEmotions) {
    if (!names.empty()) names += ", ";
    names += to_string(e);
  }
  throw UsageError("invalid arc '" + s + "': expected three comma-separated emotions from {" + names + "}");
}

// Shared resource flags; resolution order is flag, then environment, then
// the bundled data directory.
struct Resources {
  std::string data_dir;
  std::string lexicon;
  std::string protagonists;
  std::string embeddings;
  std::string oracle = "lexicon";
  std::string oracle_url;
  std::string classifier = "lexicon";
  std::string classifier_url;
  int timeout_ms = 10000;
  std::size_t cache = 4096;

  const Env* env = nullptr;

  void add_data_flags(CLI::App* app) {
    app->add_option("--data-dir", data_dir, "Directory holding the bundled lexicons (default: $EMOARC_DATA_DIR or the build tree's data/)");
    app->add_option("--lexicon", lexicon, "Affect intensity lexicon, 3-column TSV (default: <data-dir>/affect_lexicon.tsv)");
  }
  void add_protagonist_flag(CLI::App* app) {
    app->add_option("--protagonists", protagonists, "Protagonist lexicon JSON (default: <data-dir>/protagonists.json)");
  }
  void add_embeddings_flag(CLI::App* app) {
    app->add_option("--embeddings", embeddings, "Word vectors, GloVe text format (default: <data-dir>/emotion_vectors.txt)");
  }
  void add_oracle_flags(CLI::App* app) {
    app->add_option("--oracle", oracle, "Reaction oracle backend")->check(CLI::IsMember({"lexicon", "remote"}));
    app->add_option("--oracle-url", oracle_url, "Reaction sidecar base URL (default: $EMOARC_ORACLE_URL)");
    app->add_option("--timeout-ms", timeout_ms, "Per-request timeout for remote backends")->check(CLI::PositiveNumber);
    app->add_option("--cache", cache, "Reaction cache capacity (entries)");
  }
  void add_classifier_flags(CLI::App* app) {
    app->add_option("--classifier", classifier, "Emotion classifier backend")->check(CLI::IsMember({"lexicon", "remote"}));
    app->add_option("--classifier-url", classifier_url, "Classifier sidecar base URL (default: $EMOARC_CLASSIFIER_URL)");
  }

  std::string env_value(const char* key) const {
    if (!env) return {};
    auto it = env->find(key);
    return it == env->end() ? std::string() : it->second;
  }

  fs::path resolved_data_dir() const {
    if (!data_dir.empty()) return data_dir;
    if (auto v = env_value("EMOARC_DATA_DIR"); !v.empty()) return v;
    if (fs::exists(EMOARC_DEFAULT_DATA_DIR)) return EMOARC_DEFAULT_DATA_DIR;
    return EMOARC_INSTALLED_DATA_DIR;
  }
  fs::path resolve(const std::string& flag, const char* file) const {
    fs::path p = flag.empty() ? resolved_data_dir() / file : fs::path(flag);
    if (!fs::exists(p)) throw IoFailure("no such file: " + p.string());
    return p;
  }

  std::shared_ptr<const AffectLexicon> load_lex() const {
    return std::make_shared<AffectLexicon>(load_lexicon(resolve(lexicon, "affect_lexicon.tsv")));
  }
  std::shared_ptr<const ProtagonistLexicon> load_plex() const {
    return std::make_shared<ProtagonistLexicon>(load_protagonist_lexicon(resolve(protagonists, "protagonists.json")));
  }
  std::shared_ptr<const EmbeddingTable> load_table() const {
    return std::make_shared<EmbeddingTable>(load_embeddings(resolve(embeddings, "emotion_vectors.txt")));
  }
  std::shared_ptr<const ReactionOracle> make_oracle(std::shared_ptr<const AffectLexicon> lex) const {
    std::shared_ptr<const ReactionOracle> o;
    if (oracle == "remote") {
      auto url = oracle_url.empty() ? env_value("EMOARC_ORACLE_URL") : oracle_url;
      if (url.empty()) throw UsageError("--oracle remote needs --oracle-url or EMOARC_ORACLE_URL");
      o = std::make_shared<RemoteOracle>(url, std::chrono::milliseconds(timeout_ms));
    } else {
      o = std::make_shared<LexiconOracle>(std::move(lex));
    }
    return cache > 0 ? cached(o, cache) : o;
  }
  std::shared_ptr<const EmotionClassifier> make_classifier(std::shared_ptr<const AffectLexicon> lex) const {
    if (classifier == "remote") {
      auto url = classifier_url.empty() ? env_value("EMOARC_CLASSIFIER_URL") : classifier_url;
      if (url.empty()) throw UsageError("--classifier remote needs --classifier-url or EMOARC_CLASSIFIER_URL");
      return std::make_shared<RemoteClassifier>(url, std::chrono::milliseconds(timeout_ms));
    }
    return std::make_shared<LexiconClassifier>(std::move(lex));
  }
};

CorpusFormat format_for(const fs::path& p, const std::string& flag) {
  if (flag == "csv") return CorpusFormat::csv;
  if (flag == "jsonl") return CorpusFormat::jsonl;
  return p.extension() == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

// Story files: .csv/.jsonl corpora, or plain text with one story per line.
std::vector<Story> load_stories(const fs::path& p) {
  if (!fs::exists(p)) throw IoFailure("no such file: " + p.string());
  if (p.extension() == ".txt") {
    std::ifstream in(p);
    std::vector<Story> out;
    std::string line;
    while (std::getline(in, line)) {
      if (text::trim(line).empty()) continue;
      out.push_back({"", split_sentences(line)});
    }
    return out;
  }
  return load_corpus(p, format_for(p, "auto"));
}

std::vector<EmotionArc> load_arcs(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoFailure("cannot open " + p.string());
  std::vector<EmotionArc> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = text::trim(line);
    if (t.empty()) continue;
    auto a = parse_arc(t);
    if (!a) throw ParseError(n, "invalid arc '" + t + "'");
    out.push_back(*a);
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json arc_json(const EmotionArc& arc) {
  json a = json::array();
  for (auto e : arc.as_array()) a.push_back(std::string(to_string(e)));
  return a;
}

fs::path checkpoint_file(const fs::path& p) { return fs::is_directory(p) ? p / "policy.ckpt" : p; }

// ---- annotate ---------------------------------------------------------------

struct AnnotateArgs {
  std::string corpus, out, format = "auto";
  bool skip_failed = false;
  unsigned workers = 1;
};

int do_annotate(const AnnotateArgs& a, const Resources& r, std::ostream&, std::ostream& err) {
  const fs::path src(a.corpus);
  if (!fs::exists(src)) throw IoFailure("no such file: " + src.string());
  auto stories = load_corpus(src, format_for(src, a.format));
  auto lex = r.load_lex();
  auto plex = r.load_plex();
  auto oracle = r.make_oracle(lex);
  auto result = annotate_corpus(stories, *oracle, *plex, *lex, a.skip_failed, a.workers);
  write_annotated(result.records, fs::path(a.out));
  for (const auto& f : result.skipped) {
    err << "skipped story " << f.story_index + 1 << " (" << f.title << "): " << f.reason << '\n';
  }
  err << "annotated " << result.records.size() << " of " << stories.size() << " stories\n";
  return kOk;
}

// ---- score ------------------------------------------------------------------

struct ScoreArgs {
  std::string story, arc, title, reward = "both";
};

int do_score(const ScoreArgs& a, const Resources& r, std::ostream& out, std::ostream&) {
  const auto arc = arc_arg(a.arc);
  const Story story{a.title, split_sentences(text::trim(read_file(a.story)))};
  auto lex = r.load_lex();
  json rep;
  rep["arc"] = arc_json(arc);
  rep["sentences"] = story.sentences.size();
  if (a.reward == "ec-em" || a.reward == "both") {
    auto plex = r.load_plex();
    auto table = r.load_table();
    auto oracle = r.make_oracle(lex);
    auto annotations = react_per_sentence(story, *oracle, *plex, *lex);
    std::vector<std::string> phrases;
    json rx = json::array();
    for (const auto& an : annotations) {
      phrases.push_back(an.phrase);
      rx.push_back({{"idx", an.idx}, {"role", std::string(to_string(an.role))}, {"phrase", an.phrase},
                    {"confidence", an.confidence}});
    }
    const auto res = ec_em(phrases, arc, *table);
    json al = json::array();
    for (auto [i, j] : res.alignment) al.push_back(json::array({i, j}));
    rep["ec_em"] = {{"reward", res.reward}, {"raw_distance", res.raw_distance}, {"alignment", al}, {"reactions", rx}};
  }
  if (a.reward == "ec-clf" || a.reward == "both") {
    auto clf = r.make_classifier(lex);
    const auto res = ec_clf(story.sentences, arc, *clf);
    rep["ec_clf"] = {{"reward", res.reward},
                     {"segment_probs", json(std::vector<double>(res.segment_probs.begin(), res.segment_probs.end()))},
                     {"degenerate", res.degenerate}};
  }
  out << rep.dump(2) << '\n';
  return kOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string generated, reference, arcs, out, ckpt;
  bool with_ec_em = true;
};

int do_eval(const EvalArgs& a, const Resources& r, std::ostream& out, std::ostream& err) {
  EvalInputs in;
  in.generated = load_stories(a.generated);
  if (!a.reference.empty()) in.references = load_stories(a.reference);
  if (!a.arcs.empty()) in.arcs = load_arcs(a.arcs);
  in.lexicon = r.load_lex();
  in.classifier = r.make_classifier(in.lexicon);
  if (a.with_ec_em) {
    in.embeddings = r.load_table();
    in.protagonists = r.load_plex();
    in.oracle = r.make_oracle(in.lexicon);
  }
  if (!a.ckpt.empty()) {
    if (!in.arcs || in.arcs->size() != in.generated.size()) {
      err << "perplexity needs one arc per generated story; skipped\n";
    } else {
      const auto cp = policy::load_checkpoint(checkpoint_file(a.ckpt));
      PerplexityInputs ppl;
      for (std::size_t i = 0; i < in.generated.size(); ++i) {
        const auto& s = in.generated[i];
        const auto seq = policy::make_training_sequence(s.title, (*in.arcs)[i], text::tokenize(s.text()), cp.vocab);
        std::vector<double> lps;
        policy::Activations act;
        for (std::size_t t = seq.story_begin; t < seq.loss_end; ++t) {
          policy::forward(cp.model, policy::context_at(seq.ids, t, seq.sentence_pos[t], cp.model.shape()), act);
          lps.push_back(act.logp[static_cast<std::size_t>(seq.ids[t])]);
        }
        ppl.token_logprobs.push_back(std::move(lps));
        ppl.word_counts.push_back(metric_tokens(s).size());
      }
      in.perplexity = std::move(ppl);
    }
  }
  const auto report = evaluate(in);
  const auto body = report_to_json(report) + "\n";
  if (a.out.empty()) {
    out << body;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw IoFailure("cannot open " + a.out + " for writing");
    f << body;
    for (const auto& [k, v] : report.content_quality) err << k << ": " << (v ? fmt4(*v) : "n/a") << '\n';
    for (const auto& [k, v] : report.emotion_faithfulness) err << k << ": " << (v ? fmt4(*v) : "n/a") << '\n';
  }
  return kOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string corpus, out, reward = "ec-clf", optimizer = "sgd", finetune_optimizer;
  policy::TrainConfig config;
};

int do_train(TrainArgs a, const Resources& r, std::ostream& out, std::ostream&) {
  const fs::path src(a.corpus);
  if (!fs::exists(src)) throw IoFailure("no such file: " + src.string());
  auto lex = r.load_lex();
  const auto corpus = read_annotated(src, lex.get());
  auto kind = [](const std::string& name) {
    return name == "adam" ? policy::OptimizerKind::adam : policy::OptimizerKind::sgd;
  };
  if (a.finetune_optimizer.empty()) a.finetune_optimizer = a.optimizer;
  a.config.optimizer = kind(a.optimizer);
  a.config.finetune_optimizer = kind(a.finetune_optimizer);

  RewardFn reward;
  if (a.reward == "ec-em") {
    reward = make_ec_em_reward(r.make_oracle(lex), r.load_plex(), lex, r.load_table());
  } else {
    reward = make_ec_clf_reward(r.make_classifier(lex));
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::ofstream log(dir / "train_log.jsonl", std::ios::binary);
  if (!log) throw IoFailure("cannot write " + (dir / "train_log.jsonl").string());
  auto res = policy::train(corpus, a.config, reward,
                           [&](const policy::LogEntry& e) { log << policy::log_entry_to_json(e) << '\n'; });
  policy::save_checkpoint(res.vocab, res.model, dir / "policy.ckpt");
  policy::save_checkpoint(res.vocab, res.pretrained, dir / "pretrained.ckpt");

  const auto& c = a.config;
  json cfg;
  cfg["corpus_size"] = corpus.size();
  cfg["reward"] = a.reward;
  cfg["gamma"] = c.gamma;
  cfg["learning_rate"] = c.learning_rate;
  cfg["finetune_learning_rate"] = c.finetune_learning_rate > 0 ? c.finetune_learning_rate : c.learning_rate;
  cfg["batch_size"] = c.batch_size;
  cfg["top_k"] = c.effective_top_k(res.vocab.size());
  cfg["temperature"] = c.temperature;
  cfg["seed"] = c.seed;
  cfg["optimizer"] = a.optimizer;
  cfg["finetune_optimizer"] = a.finetune_optimizer;
  cfg["finetune_eval_interval"] = c.finetune_eval_interval;
  cfg["grad_clip"] = c.grad_clip;
  cfg["dim"] = c.dim;
  cfg["hidden"] = c.hidden;
  cfg["max_pretrain_steps"] = c.max_pretrain_steps;
  cfg["eval_interval"] = c.eval_interval;
  cfg["patience"] = c.patience;
  cfg["min_delta"] = c.min_delta;
  cfg["finetune_steps"] = c.finetune_steps;
  cfg["length_cap"] = c.length_cap;
  cfg["vocab_size"] = res.vocab.size();
  cfg["pretrain_steps"] = res.pretrain_steps;
  cfg["best_validation_nll"] = res.best_validation_nll;
  std::ofstream(dir / "config.json", std::ios::binary) << cfg.dump(2) << '\n';

  double tail_reward = 0.0;
  std::size_t tail = 0;
  for (auto it = res.log.rbegin(); it != res.log.rend() && tail < 50; ++it) {
    if (it->phase == "mixed" && it->mean_reward) {
      tail_reward += *it->mean_reward;
      ++tail;
    }
  }
  out << "vocab size        " << res.vocab.size() << '\n';
  out << "pretrain steps    " << res.pretrain_steps << '\n';
  out << "best val nll      " << fmt4(res.best_validation_nll) << '\n';
  out << "finetune steps    " << c.finetune_steps << '\n';
  if (tail > 0) out << "mean reward (last " << tail << ")  " << fmt4(tail_reward / static_cast<double>(tail)) << '\n';
  out << "checkpoint        " << (dir / "policy.ckpt").string() << '\n';
  return kOk;
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  std::string ckpt, title, arc;
  bool greedy = false, as_json = false;
  std::uint64_t seed = 0;
  std::size_t top_k = 40, count = 1, length_cap = policy::kDefaultLengthCap;
  double temperature = 0.7;
};

int do_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const auto arc = arc_arg(a.arc);
  const fs::path p = checkpoint_file(a.ckpt);
  if (!fs::exists(p)) throw IoFailure("no such checkpoint: " + p.string());
  const auto cp = policy::load_checkpoint(p);
  Rng rng(a.seed);
  for (std::size_t i = 0; i < a.count; ++i) {
    auto g = a.greedy ? policy::greedy_story(cp.model, a.title, arc, cp.vocab, a.length_cap)
                      : policy::sample_story(cp.model, a.title, arc, cp.vocab, a.top_k, a.temperature, rng, a.length_cap);
    if (g.hit_cap) err << "warning: story " << i + 1 << " hit the length cap of " << a.length_cap << " tokens\n";
    if (a.as_json) {
      json j;
      j["title"] = a.title;
      j["arc"] = arc_json(arc);
      j["sentences"] = g.story.sentences;
      j["logprobs"] = g.logprobs;
      j["hit_cap"] = g.hit_cap;
      out << j.dump() << '\n';
    } else {
      out << g.story.text() << '\n';
    }
  }
  return kOk;
}

// ---- synth-corpus -------------------------------------------------------------

struct SynthArgs {
  std::size_t size = 2000, prompts = 0;
  std::uint64_t seed = 1;
  std::string majority_arc = "joy,joy,joy", format = "annotated", out;
  double majority_fraction = 0.4;
  policy::SynthOptions options;
};

int do_synth(const SynthArgs& a, const Resources& r, std::ostream& out, std::ostream&) {
  const auto arc = arc_arg(a.majority_arc);
  const auto dist = policy::ArcDistribution::majority(arc, a.majority_fraction);
  Rng rng(a.seed);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw IoFailure("cannot open " + a.out + " for writing");
  }
  std::ostream& sink = a.out.empty() ? out : file;
  if (a.prompts > 0) {
    for (const auto& p : policy::sample_prompts(dist, a.prompts, rng)) {
      json j;
      j["title"] = p.title;
      j["arc"] = arc_json(p.arc);
      sink << j.dump() << '\n';
    }
    return kOk;
  }
  if (a.size == 0) throw TooSmallCorpus("synthetic corpus size must be at least 1");
  auto lex = r.load_lex();
  const auto corpus = policy::make_synthetic_corpus(dist, a.size, *lex, rng, a.options);
  if (a.format == "csv") {
    sink << "title,sent1,sent2,sent3,sent4,sent5\n";
    auto quote = [](const std::string& s) {
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    };
    for (const auto& rec : corpus) {
      sink << quote(rec.story.title);
      for (const auto& s : rec.story.sentences) sink << ',' << quote(s);
      sink << '\n';
    }
  } else if (a.format == "jsonl") {
    for (const auto& rec : corpus) {
      json j;
      j["title"] = rec.story.title;
      j["sentences"] = rec.story.sentences;
      sink << j.dump() << '\n';
    }
  } else {
    write_annotated(corpus, sink);
  }
  return kOk;
}

}  // namespace

Env environment_from(char** envp) {
  Env env;
  for (char** e = envp; e && *e; ++e) {
    std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string::npos) env.emplace(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return env;
}

int run(const std::vector<std::string>& argv, const Env& env, std::ostream& out, std::ostream& err) {
  CLI::App app{"Emotion-arc toolkit: annotation, rewards, metrics and a small arc-conditioned story policy", "emoarc"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the tool version and checkpoint format version");

  Resources res;
  res.env = &env;

  AnnotateArgs ann;
  auto* annotate = app.add_subcommand("annotate", "Extract the emotion arc of every story in a corpus");
  annotate->add_option("--corpus", ann.corpus, "Input corpus (.csv with title,sent1..sent5 or .jsonl)")->required();
  annotate->add_option("--format", ann.format, "Corpus format; auto picks by extension")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}));
  annotate->add_option("--out", ann.out, "Annotated JSONL output path")->required();
  annotate->add_flag("--skip-failed", ann.skip_failed, "Skip stories without a detectable protagonist or too short");
  annotate->add_option("--workers", ann.workers, "Annotation threads")->check(CLI::PositiveNumber);
  res.add_data_flags(annotate);
  res.add_protagonist_flag(annotate);
  res.add_oracle_flags(annotate);

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Score one story against a target arc; prints a JSON reward report");
  score->add_option("--story", sc.story, "Plain-text story file")->required();
  score->add_option("--arc", sc.arc, "Target arc, e.g. joy,anger,sadness")->required();
  score->add_option("--title", sc.title, "Story title (optional)");
  score->add_option("--reward", sc.reward, "Which reward to compute")->check(CLI::IsMember({"ec-em", "ec-clf", "both"}));
  res.add_data_flags(score);
  res.add_protagonist_flag(score);
  res.add_embeddings_flag(score);
  res.add_oracle_flags(score);
  res.add_classifier_flags(score);

  EvalArgs ev;
  bool no_ec_em = false;
  auto* eval = app.add_subcommand("eval", "Compute the automatic metric suite for generated stories");
  eval->add_option("--generated", ev.generated, "Generated stories (.jsonl, .csv, or .txt with one story per line)")
      ->required();
  eval->add_option("--reference", ev.reference, "Reference stories, aligned with --generated");
  eval->add_option("--arcs", ev.arcs, "Target arcs, one comma-separated arc per line");
  eval->add_option("--out", ev.out, "Report path (default: stdout)");
  eval->add_option("--ckpt", ev.ckpt, "Policy checkpoint used for word perplexity");
  eval->add_flag("--no-ec-em", no_ec_em, "Skip EC-Em (no reaction oracle calls)");
  res.add_data_flags(eval);
  res.add_protagonist_flag(eval);
  res.add_embeddings_flag(eval);
  res.add_oracle_flags(eval);
  res.add_classifier_flags(eval);

  TrainArgs tr;
  auto& cfg = tr.config;
  auto* train = app.add_subcommand("train", "NLL pretraining then self-critical mixed-loss fine-tuning");
  train->add_option("--corpus", tr.corpus, "Annotated JSONL corpus")->required();
  train->add_option("--out", tr.out, "Output directory for checkpoints, log and config")->required();
  train->add_option("--reward", tr.reward, "Reward for fine-tuning")->check(CLI::IsMember({"ec-clf", "ec-em"}));
  train->add_option("--gamma", cfg.gamma, "Weight of the RL term in the mixed loss")->check(CLI::Range(0.0, 1.0));
  train->add_option("--seed", cfg.seed, "Random seed");
  train->add_option("--lr", cfg.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  train->add_option("--finetune-lr", cfg.finetune_learning_rate, "Learning rate for fine-tuning (default: --lr)");
  train->add_option("--batch", cfg.batch_size, "Minibatch size")->check(CLI::PositiveNumber);
  train->add_option("--top-k", cfg.top_k, "Sampling top-k (0: min(40, vocab))");
  train->add_option("--temperature", cfg.temperature, "Sampling temperature")->check(CLI::PositiveNumber);
  train->add_option("--pretrain-steps", cfg.max_pretrain_steps, "Maximum teacher-forcing steps");
  train->add_option("--eval-interval", cfg.eval_interval, "Steps between validation checks")->check(CLI::PositiveNumber);
  train->add_option("--patience", cfg.patience, "Validation checks without improvement before stopping");
  train->add_option("--min-delta", cfg.min_delta, "Smallest validation improvement that counts");
  train->add_option("--finetune-steps", cfg.finetune_steps, "Mixed-loss steps");
  train->add_option("--optimizer", tr.optimizer, "Optimizer")->check(CLI::IsMember({"sgd", "adam"}));
  train->add_option("--finetune-optimizer", tr.finetune_optimizer, "Optimizer for fine-tuning (default: --optimizer)")
      ->check(CLI::IsMember({"sgd", "adam"}));
  train->add_option("--finetune-eval-interval", cfg.finetune_eval_interval,
                    "Mixed steps between validation-reward checks; the best checkpoint is kept (0: keep the last)");
  train->add_option("--grad-clip", cfg.grad_clip, "Cap on the L2 norm of the fine-tuning gradient (0: off)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--dim", cfg.dim, "Embedding width")->check(CLI::PositiveNumber);
  train->add_option("--hidden", cfg.hidden, "Hidden layer width")->check(CLI::PositiveNumber);
  train->add_option("--length-cap", cfg.length_cap, "Maximum generated story length in tokens")->check(CLI::PositiveNumber);
  train->add_option("--reward-workers", cfg.reward_workers, "Threads for reward evaluation")->check(CLI::PositiveNumber);
  res.add_data_flags(train);
  res.add_protagonist_flag(train);
  res.add_embeddings_flag(train);
  res.add_oracle_flags(train);
  res.add_classifier_flags(train);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a story for a title and target arc");
  generate->add_option("--ckpt", gen.ckpt, "Checkpoint file or training output directory")->required();
  generate->add_option("--title", gen.title, "Story title")->required();
  generate->add_option("--arc", gen.arc, "Target arc, e.g. joy,anger,sadness")->required();
  generate->add_flag("--greedy", gen.greedy, "Greedy decoding instead of top-k sampling");
  generate->add_option("--seed", gen.seed, "Sampling seed");
  generate->add_option("--top-k", gen.top_k, "Sampling top-k")->check(CLI::PositiveNumber);
  generate->add_option("--temperature", gen.temperature, "Sampling temperature")->check(CLI::PositiveNumber);
  generate->add_option("--count", gen.count, "Number of stories")->check(CLI::PositiveNumber);
  generate->add_option("--length-cap", gen.length_cap, "Maximum story length in tokens")->check(CLI::PositiveNumber);
  generate->add_flag("--json", gen.as_json, "One JSON object per story (title, arc, sentences, logprobs, hit_cap)");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth-corpus", "Write a synthetic five-sentence corpus with planted arcs");
  synth->add_option("--size", sy.size, "Number of stories");
  synth->add_option("--seed", sy.seed, "Random seed");
  synth->add_option("--majority-arc", sy.majority_arc, "Most frequent planted arc");
  synth->add_option("--majority-fraction", sy.majority_fraction, "Share of the majority arc")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--format", sy.format, "annotated JSONL (with arcs), plain jsonl stories, or csv")
      ->check(CLI::IsMember({"annotated", "jsonl", "csv"}));
  synth->add_option("--prompts", sy.prompts, "Emit this many (title, arc) prompts instead of stories");
  synth->add_option("--distractor-rate", sy.options.distractor_rate, "Chance of an off-arc word in an emotional sentence")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--out", sy.out, "Output path (default: stdout)");
  res.add_data_flags(synth);

  std::vector<std::string> reversed;
  for (std::size_t i = argv.size(); i > 1; --i) reversed.push_back(argv[i - 1]);

  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (show_version) {
    out << "emoarc " << EMOARC_VERSION << " (checkpoint format " << policy::kCheckpointFormatVersion << ")\n";
    return kOk;
  }

  try {
    if (*annotate) return do_annotate(ann, res, out, err);
    if (*score) return do_score(sc, res, out, err);
    if (*eval) {
      ev.with_ec_em = !no_ec_em;
      return do_eval(ev, res, out, err);
    }
    if (*train) return do_train(tr, res, out, err);
    if (*generate) return do_generate(gen, out, err);
    if (*synth) return do_synth(sy, res, out, err);
    err << "error: a subcommand is required\n\n" << app.help();
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << '\n';
    return kBackend;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace emoarc::cli
