// Copyright 2026 The mtsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtsa/cli.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "CLI11.hpp"
#include "json.hpp"
#include "mtsa/checkpoint.h"
#include "mtsa/conll.h"
#include "mtsa/dataset_stats.h"
#include "mtsa/errors.h"
#include "mtsa/report.h"
#include "mtsa/training.h"

namespace mtsa {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("short write to " + path.string());
}

// Only the timestamp varies between identical invocations.
void WriteManifest(const fs::path& path, const std::string& command,
                   std::optional<std::uint64_t> seed,
                   const std::string& config_text, const Json& inputs) {
  Json m;
  m["command"] = command;
  m["version"] = MTSA_VERSION;
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  m["config_hash"] = "fnv1a64:" + Hex64(Fnv1a64(config_text));
  m["inputs"] = inputs;
  m["timestamp"] = UtcTimestamp();
  WriteText(path, m.dump(2) + "\n");
}

fs::path SiblingManifest(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> AllTags(const std::vector<Sentence>& sentences) {
  std::vector<std::string> tags;
  for (const auto& s : sentences) {
    tags.insert(tags.end(), s.tags.begin(), s.tags.end());
  }
  return tags;
}

// A corpus from CoNLL (tags in `style`) or span JSONL.
std::vector<Sentence> ReadCorpus(const std::string& path) {
  if (fs::path(path).extension() == ".jsonl") return ReadSpanJsonl(path);
  return ReadConll(path);
}

LabelScheme SchemeForCorpus(const std::vector<Sentence>& sentences,
                            TagStyle style,
                            const std::vector<std::string>& categories) {
  if (!categories.empty()) return LabelScheme(style, categories);
  std::vector<std::string> tags = AllTags(sentences);
  if (tags.empty()) {
    std::set<std::string> labels;
    for (const auto& s : sentences) {
      for (const auto& sp : s.spans) labels.insert(sp.label);
    }
    return LabelScheme(style, {labels.begin(), labels.end()});
  }
  return LabelScheme::FromTagStrings(style, tags);
}

std::vector<std::vector<Span>> CorpusSpans(
    const std::vector<Sentence>& sentences, const LabelScheme& scheme) {
  std::vector<std::vector<Span>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(SentenceSpans(s, scheme));
  return out;
}

void RequireAligned(const std::vector<Sentence>& gold,
                    const std::vector<Sentence>& pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) +
                             " sentences, predictions have " +
                             std::to_string(pred.size()),
                         std::min(gold.size(), pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].tokens != pred[i].tokens) {
      throw AlignmentError("tokens differ between gold and predictions", i);
    }
  }
}

std::optional<ContextualStack> MaybeStack(
    const std::string& path, const std::vector<Sentence>& sentences) {
  if (path.empty()) return std::nullopt;
  std::vector<std::size_t> lengths;
  for (const auto& s : sentences) lengths.push_back(s.tokens.size());
  return LoadContextualStack(path, &lengths);
}

std::string StatsTable(const DatasetStats& st) {
  std::ostringstream out;
  char buf[64];
  out << "sentences\t" << st.sentences << "\n";
  out << "tokens\t" << st.tokens << "\n";
  out << "targets\t" << st.targets << "\n";
  std::snprintf(buf, sizeof buf, "%.2f", st.mean_target_length);
  out << "mean_target_length\t" << buf << "\n";
  out << "multi_polarity_sentences\t" << st.multi_polarity_sentences << "\n";
  std::snprintf(buf, sizeof buf, "%.2f", st.label_entropy);
  out << "label_entropy\t" << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.2f", st.label_kurtosis);
  out << "label_kurtosis\t" << buf << "\n";
  out << "labels\t" << st.observed_labels << "/" << st.label_count << "\n";
  return out.str();
}

Json StatsJson(const DatasetStats& st) {
  return Json{{"sentences", st.sentences},
              {"tokens", st.tokens},
              {"targets", st.targets},
              {"mean_target_length", st.mean_target_length},
              {"multi_polarity_sentences", st.multi_polarity_sentences},
              {"label_entropy", st.label_entropy},
              {"label_kurtosis", st.label_kurtosis},
              {"label_count", st.label_count},
              {"observed_labels", st.observed_labels}};
}

struct ConvertArgs {
  std::string input, output, from = "bio", scheme = "bioul", categories;
};

int Convert(const ConvertArgs& a, std::ostream& out) {
  const std::vector<Sentence> in = ReadCorpus(a.input);
  const LabelScheme source =
      SchemeForCorpus(in, ParseTagStyle(a.from), SplitCommas(a.categories));
  const std::vector<std::vector<Span>> spans = CorpusSpans(in, source);
  std::set<std::string> labels;
  for (const auto& s : spans) {
    for (const auto& sp : s) labels.insert(sp.label);
  }
  std::vector<std::string> cats = SplitCommas(a.categories);
  if (cats.empty()) cats.assign(labels.begin(), labels.end());
  const LabelScheme target(ParseTagStyle(a.scheme), cats);
  std::vector<Sentence> converted;
  for (std::size_t i = 0; i < in.size(); ++i) {
    Sentence s;
    s.tokens = in[i].tokens;
    s.spans = spans[i];
    s.tags = TagNames(SpansToTags(spans[i], s.tokens.size(), target,
                                  "sentence " + std::to_string(i)),
                      target);
    converted.push_back(std::move(s));
  }
  WriteConll(a.output, converted);
  WriteManifest(SiblingManifest(a.output), "convert", std::nullopt,
                "from=" + a.from + "\nscheme=" + a.scheme +
                    "\ncategories=" + a.categories + "\n",
                Json{{"input", a.input}});
  out << "converted " << converted.size() << " sentences to "
      << TagStyleName(target.style()) << " (" << target.size()
      << " tags)\n";
  return kExitOk;
}

struct StatsArgs {
  std::string input, scheme = "bioul", categories, output;
};

int Stats(const StatsArgs& a, std::ostream& out) {
  const std::vector<Sentence> in = ReadCorpus(a.input);
  const LabelScheme scheme =
      SchemeForCorpus(in, ParseTagStyle(a.scheme), SplitCommas(a.categories));
  const DatasetStats st = ComputeDatasetStats(in, scheme);
  const std::string table = StatsTable(st);
  out << table;
  if (!a.output.empty()) {
    WriteText(a.output, StatsJson(st).dump(2) + "\n");
    WriteManifest(SiblingManifest(a.output), "stats", std::nullopt,
                  "scheme=" + a.scheme + "\ncategories=" + a.categories + "\n",
                  Json{{"input", a.input}});
  }
  return kExitOk;
}

struct TrainArgs {
  std::string config, train, dev, out, mode = "stl", aux_train,
      aux_scheme = "bio", embeddings, contextual_train, contextual_dev,
      contextual_aux, categories = "POS,NEU,NEG";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> hidden1, hidden2;
};

int Train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const bool mtl = a.mode == "mtl";
  if (mtl && a.aux_train.empty()) {
    throw UsageError("--mode mtl requires --aux-train");
  }
  if (!mtl && !a.aux_train.empty()) {
    throw UsageError("--aux-train is only valid with --mode mtl");
  }
  if (a.embeddings.empty() == a.contextual_train.empty()) {
    throw UsageError("give exactly one of --embeddings or --contextual-train");
  }
  if (!a.contextual_train.empty() &&
      (a.contextual_dev.empty() || (mtl && a.contextual_aux.empty()))) {
    throw UsageError(
        "contextual training needs --contextual-dev (and --contextual-aux "
        "for mtl)");
  }

  TrainConfig tc = ReadTrainConfig(a.config);
  if (a.seed) tc.seed = *a.seed;
  tc.Validate();

  const std::vector<Sentence> train = ReadConll(a.train);
  const std::vector<Sentence> dev = ReadConll(a.dev);
  std::vector<Sentence> aux;
  if (mtl) aux = ReadConll(a.aux_train);

  ModelConfig mc;
  mc.main_scheme = LabelScheme::Bioul(SplitCommas(a.categories));
  if (a.hidden1) mc.hidden1 = *a.hidden1;
  if (a.hidden2) mc.hidden2 = *a.hidden2;
  mc.dropout = tc.dropout;
  if (mtl) {
    mc.aux_scheme =
        LabelScheme::FromTagStrings(ParseTagStyle(a.aux_scheme), AllTags(aux));
  }

  std::optional<ContextualStack> ctx_train, ctx_dev, ctx_aux;
  std::optional<Model> model;
  if (!a.embeddings.empty()) {
    std::unordered_set<std::string> vocab;
    const std::vector<const std::vector<Sentence>*> corpora = {&train, &dev, &aux};
    for (const auto* corpus : corpora) {
      for (const auto& s : *corpus) vocab.insert(s.tokens.begin(), s.tokens.end());
    }
    auto table = std::make_shared<const StaticEmbeddingTable>(
        LoadStaticEmbeddings(a.embeddings, &vocab));
    mc.source = EmbeddingSource::kStatic;
    mc.embedding_dim = table->dim();
    model.emplace(mc, std::move(table));
  } else {
    ctx_train = MaybeStack(a.contextual_train, train);
    ctx_dev = MaybeStack(a.contextual_dev, dev);
    if (mtl) ctx_aux = MaybeStack(a.contextual_aux, aux);
    mc.source = EmbeddingSource::kContextualMix;
    mc.embedding_dim = ctx_train->dim;
    mc.contextual_layers = ctx_train->num_layers;
    model.emplace(mc);
  }
  InitializeModel(*model, tc.seed);

  const auto train_ex = MakeExamples(
      train, mc.main_scheme, ctx_train ? &*ctx_train : nullptr);
  const auto dev_ex =
      MakeExamples(dev, mc.main_scheme, ctx_dev ? &*ctx_dev : nullptr);
  const EpochCallback progress = [&err](const EpochLog& log) {
    char buf[160];
    if (log.dev) {
      std::snprintf(buf, sizeof buf,
                    "epoch %zu %s loss %.4f dev f1_i %.4f%s\n", log.epoch,
                    PhaseName(log.phase), log.mean_loss, log.dev->f1_i,
                    log.best ? " *" : "");
    } else {
      std::snprintf(buf, sizeof buf, "epoch %zu %s loss %.4f\n", log.epoch,
                    PhaseName(log.phase), log.mean_loss);
    }
    err << buf;
  };
  std::optional<TrainResult> result;
  if (mtl) {
    const auto aux_ex = MakeExamples(aux, *mc.aux_scheme,
                                     ctx_aux ? &*ctx_aux : nullptr);
    result.emplace(TrainMtl(*model, train_ex, aux_ex, dev_ex, tc, progress));
  } else {
    result.emplace(TrainStl(*model, train_ex, dev_ex, tc, progress));
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  SaveCheckpoint(result->best, (dir / "model.ckpt").string());
  WriteText(dir / "epochs.jsonl", EpochLogsJsonl(result->logs));
  const std::string config_text = FormatTrainConfig(tc) + "mode=" + a.mode +
                                  "\nmodel=" + ModelConfigJson(mc) + "\n";
  WriteText(dir / "train_config.txt", FormatTrainConfig(tc));
  Json inputs{{"train", a.train}, {"dev", a.dev}};
  if (mtl) inputs["aux_train"] = a.aux_train;
  if (!a.embeddings.empty()) inputs["embeddings"] = a.embeddings;
  if (!a.contextual_train.empty()) {
    inputs["contextual_train"] = a.contextual_train;
    inputs["contextual_dev"] = a.contextual_dev;
  }
  WriteManifest(dir / "manifest.json", "train", tc.seed, config_text, inputs);
  char buf[128];
  std::snprintf(buf, sizeof buf, "best epoch %zu of %zu, dev %s %.4f\n",
                result->best_epoch, result->epochs_run,
                tc.monitored_metric.c_str(), result->best_score);
  out << buf;
  return kExitOk;
}

std::vector<Sentence> PredictCorpus(const Model& model,
                                    const std::vector<Sentence>& input,
                                    const std::string& contextual) {
  const std::optional<ContextualStack> stack = MaybeStack(contextual, input);
  if (model.config().source == EmbeddingSource::kContextualMix && !stack) {
    throw UsageError("contextual checkpoint needs --contextual");
  }
  std::vector<Example> examples;
  for (std::size_t i = 0; i < input.size(); ++i) {
    Example ex;
    ex.tokens = input[i].tokens;
    if (stack) ex.layers = &stack->sentences[i];
    examples.push_back(std::move(ex));
  }
  const auto spans = PredictAll(model, examples);
  const LabelScheme& scheme = model.config().main_scheme;
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < input.size(); ++i) {
    Sentence s;
    s.tokens = input[i].tokens;
    s.spans = spans[i];
    s.tags = TagNames(SpansToTags(spans[i], s.tokens.size(), scheme), scheme);
    out.push_back(std::move(s));
  }
  return out;
}

struct PredictArgs {
  std::string checkpoint, input, contextual, output;
};

int Predict(const PredictArgs& a, std::ostream& out) {
  const Model model = LoadCheckpoint(a.checkpoint);
  const std::vector<Sentence> in = ReadConll(a.input);
  const std::vector<Sentence> pred = PredictCorpus(model, in, a.contextual);
  WriteConll(a.output, pred);
  WriteManifest(SiblingManifest(a.output), "predict", std::nullopt,
                "checkpoint_hash=" + Hex64(Fnv1a64(SerializeModel(model))) +
                    "\n",
                Json{{"checkpoint", a.checkpoint}, {"input", a.input}});
  out << "predicted " << pred.size() << " sentences\n";
  return kExitOk;
}

struct EvaluateArgs {
  std::string gold, pred, checkpoint, input, contextual, out,
      scheme = "bioul";
};

int Evaluate(const EvaluateArgs& a, std::ostream& out) {
  if (a.pred.empty() == a.checkpoint.empty()) {
    throw UsageError("give exactly one of --pred or --checkpoint");
  }
  const std::vector<Sentence> gold = ReadConll(a.gold);
  std::vector<Sentence> pred;
  if (!a.pred.empty()) {
    pred = ReadConll(a.pred);
  } else {
    const Model model = LoadCheckpoint(a.checkpoint);
    pred = PredictCorpus(model, ReadConll(a.input.empty() ? a.gold : a.input),
                         a.contextual);
  }
  RequireAligned(gold, pred);
  std::vector<std::string> tags = AllTags(gold);
  const std::vector<std::string> pred_tags = AllTags(pred);
  tags.insert(tags.end(), pred_tags.begin(), pred_tags.end());
  const LabelScheme scheme =
      LabelScheme::FromTagStrings(ParseTagStyle(a.scheme), tags);
  const TargetedMetrics m =
      ComputeMetrics(CorpusSpans(gold, scheme), CorpusSpans(pred, scheme));
  const std::string table = FormatMetricsTable(m);
  out << table;
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    WriteText(dir / "metrics.json", FormatMetricsJson(m));
    WriteText(dir / "metrics.txt", table);
    WriteManifest(dir / "manifest.json", "evaluate", std::nullopt,
                  "scheme=" + a.scheme + "\n",
                  Json{{"gold", a.gold},
                       {"pred", a.pred},
                       {"checkpoint", a.checkpoint}});
  }
  return kExitOk;
}

struct SignificanceArgs {
  std::string baseline, candidate, out;
  double alpha = kSignificanceLevel;
};

int Significance(const SignificanceArgs& a, std::ostream& out,
                 std::ostream& err) {
  const auto base = ReadRunDirectory(a.baseline);
  const auto cand = ReadRunDirectory(a.candidate);
  if (base.size() < 2 || cand.size() < 2) {
    throw DataError("significance testing needs at least 2 runs per side "
                    "(baseline " + std::to_string(base.size()) +
                    ", candidate " + std::to_string(cand.size()) + ")");
  }
  const RunComparison c = CompareRuns(base, cand, {}, a.alpha);
  for (const auto& w : c.warnings) err << "warning: " << w << "\n";
  const std::string table = FormatReportTable(c);
  out << table;
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    WriteText(dir / "significance.json", FormatReportJson(c));
    WriteText(dir / "significance.txt", table);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a.alpha);
    WriteManifest(dir / "manifest.json", "significance", std::nullopt,
                  std::string("alpha=") + buf + "\n",
                  Json{{"baseline", a.baseline}, {"candidate", a.candidate}});
  }
  return kExitOk;
}

int InspectCheckpointCmd(const std::string& path, std::ostream& out) {
  const CheckpointInfo info = InspectCheckpoint(path);
  const Model model = LoadCheckpoint(path);
  const ParameterCount pc = model.CountParameters();
  Json j;
  j["version"] = info.version;
  j["config"] = Json::parse(ModelConfigJson(info.config));
  j["vocabulary_size"] = info.vocabulary_size;
  Json tensors = Json::array();
  for (const auto& t : info.tensors) {
    tensors.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  }
  j["tensors"] = std::move(tensors);
  j["parameters"] = {{"total", pc.total},
                     {"trainable", pc.trainable},
                     {"trainable_main_path", pc.trainable_main_path},
                     {"components", pc.components}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Targeted sentiment sequence labelling toolkit", "mtsa"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", MTSA_VERSION);

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "Span or BIO data to BIOUL/BIO CoNLL");
  c->add_option("--input", convert.input, "CoNLL or span .jsonl")->required();
  c->add_option("--output", convert.output, "Output CoNLL")->required();
  c->add_option("--from", convert.from, "Tag style of CoNLL input");
  c->add_option("--scheme", convert.scheme, "Target style: bioul|bio|plain");
  c->add_option("--categories", convert.categories, "Comma-separated labels");

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Dataset statistics");
  s->add_option("--input", stats.input)->required();
  s->add_option("--scheme", stats.scheme);
  s->add_option("--categories", stats.categories);
  s->add_option("--output", stats.output, "Also write JSON here");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train an STL or MTL model");
  t->add_option("--config", train.config)->required();
  t->add_option("--train", train.train)->required();
  t->add_option("--dev", train.dev)->required();
  t->add_option("--out", train.out)->required();
  t->add_option("--mode", train.mode)
      ->check(CLI::IsMember({"stl", "mtl"}));
  t->add_option("--aux-train", train.aux_train);
  t->add_option("--aux-scheme", train.aux_scheme)
      ->check(CLI::IsMember({"bio", "bioul", "plain"}));
  t->add_option("--embeddings", train.embeddings, "word v1 ... vd text file");
  t->add_option("--contextual-train", train.contextual_train);
  t->add_option("--contextual-dev", train.contextual_dev);
  t->add_option("--contextual-aux", train.contextual_aux);
  t->add_option("--categories", train.categories);
  t->add_option("--seed", train.seed, "Overrides the config seed");
  t->add_option("--hidden1", train.hidden1);
  t->add_option("--hidden2", train.hidden2);

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "Tag a CoNLL file");
  p->add_option("--checkpoint", predict.checkpoint)->required();
  p->add_option("--input", predict.input)->required();
  p->add_option("--contextual", predict.contextual);
  p->add_option("--output", predict.output)->required();

  EvaluateArgs evaluate;
  auto* e = app.add_subcommand("evaluate", "Span-level metrics");
  e->add_option("--gold", evaluate.gold)->required();
  e->add_option("--pred", evaluate.pred);
  e->add_option("--checkpoint", evaluate.checkpoint);
  e->add_option("--input", evaluate.input, "Defaults to the gold tokens");
  e->add_option("--contextual", evaluate.contextual);
  e->add_option("--scheme", evaluate.scheme);
  e->add_option("--out", evaluate.out);

  SignificanceArgs sig;
  auto* g = app.add_subcommand("significance", "Compare two run sets");
  g->add_option("--baseline", sig.baseline)->required();
  g->add_option("--candidate", sig.candidate)->required();
  g->add_option("--out", sig.out);
  g->add_option("--alpha", sig.alpha);

  std::string ckpt;
  auto* i = app.add_subcommand("inspect-checkpoint", "Describe a checkpoint");
  i->add_option("--checkpoint", ckpt)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return Convert(convert, out);
    if (s->parsed()) return Stats(stats, out);
    if (t->parsed()) return Train(train, out, err);
    if (p->parsed()) return Predict(predict, out);
    if (e->parsed()) return Evaluate(evaluate, out);
    if (g->parsed()) return Significance(sig, out, err);
    if (i->parsed()) return InspectCheckpointCmd(ckpt, out);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mtsa
