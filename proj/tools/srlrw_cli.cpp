// Copyright 2026 The srl-rewriter Authors.
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

// srlrw: command-line front end for corpus generation, training, rewriting,
// evaluation and the ablation grid.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "srlrw/checkpoint.hpp"
#include "srlrw/generator.hpp"
#include "srlrw/manifest.hpp"
#include "srlrw/metrics.hpp"
#include "srlrw/record_io.hpp"
#include "srlrw/seeding.hpp"
#include "srlrw/sequence_builder.hpp"
#include "srlrw/srl_data.hpp"
#include "srlrw/training.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace srlrw;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string manifest;
};

void AddCommon(CLI::App *sub, Common &c) {
  sub->set_config("--config", "", "flat key=value file; flags on the command line win");
  sub->add_option("--seed", c.seed, "run seed");
  sub->add_option("--manifest", c.manifest, "where to write the run manifest");
}

// Every option of the subcommand with its effective value.
json ResolvedConfig(const CLI::App *sub) {
  json out = json::object();
  std::istringstream in(sub->config_to_str(true, false));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || line[0] == '[' || eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string &s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
    };
    trim(key);
    trim(value);
    if (key == "config" || key == "manifest") continue;
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    out[key] = value;
  }
  return out;
}

RunManifest StartManifest(const CLI::App *sub, const Common &c) {
  RunManifest m;
  m.command = sub->get_name();
  m.config = ResolvedConfig(sub);
  m.seeds["run"] = c.seed;
  return m;
}

void FinishManifest(RunManifest &m, const Common &c, const fs::path &fallback) {
  const fs::path path = c.manifest.empty() ? fallback : fs::path(c.manifest);
  m.Write(path);
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path.string());
  out << text;
}

std::vector<double> ParseDoubles(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<std::string> SplitList(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json ReportJson(const EvalReport &r) {
  return {{"bleu1", r.bleu1},   {"bleu2", r.bleu2},   {"bleu4", r.bleu4},
          {"rouge1", r.rouge1}, {"rouge2", r.rouge2}, {"rougeL", r.rougeL},
          {"em", r.em},         {"em_matches", r.em_matches},
          {"n_examples", r.n_examples}};
}

EntityLexicon ReadLexicon(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot open " + path.string());
  EntityLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cls, surface;
    if (!(ls >> cls) || cls[0] == '#') continue;
    std::getline(ls >> std::ws, surface);
    if (surface.empty()) throw Error(ErrorCode::kConfigInvalid, "bad lexicon line: " + line);
    lex[cls].push_back(surface);
  }
  return lex;
}

// Heuristic rules: an explicit file, or the generator's own rules.
struct RulesOptions {
  std::string path;
  bool ascii = false;

  HeuristicRules Load(RunManifest *m = nullptr) const {
    if (path.empty()) {
      GeneratorConfig g;
      g.ascii_entities = ascii;
      return GeneratorRules(g);
    }
    if (m) m->AddInput(path);
    return HeuristicRules::FromFile(path);
  }
};

void AddRulesOptions(CLI::App *sub, RulesOptions &r) {
  sub->add_option("--rules", r.path, "heuristic extractor rules file");
  sub->add_flag("--ascii", r.ascii, "use the ASCII-entity rules when --rules is absent");
}

struct SourceOptions {
  std::string mode = "gold";
  std::string scope = "full";

  TripleSource Get() const { return {ParseTripleMode(mode), ParseTripleScope(scope)}; }
};

void AddSourceOptions(CLI::App *sub, SourceOptions &s) {
  sub->add_option("--triple-source", s.mode, "gold | heuristic | none");
  sub->add_option("--triple-scope", s.scope, "full | last");
}

struct ModelOptions {
  ModelConfig config;
  std::string mask = "triple";
};

void AddModelOptions(CLI::App *sub, ModelOptions &m) {
  auto &c = m.config;
  sub->add_option("--d-model", c.d_model);
  sub->add_option("--n-heads", c.n_heads);
  sub->add_option("--n-layers", c.n_layers);
  sub->add_option("--d-ff", c.d_ff);
  sub->add_option("--max-position", c.max_position);
  sub->add_option("--dropout", c.dropout);
  sub->add_option("--layer-norm-eps", c.layer_norm_eps);
  sub->add_flag("--tie-embeddings", c.tie_embeddings);
  sub->add_option("--mask", m.mask, "none | bi | triple");
  sub->add_option("--source-mutual-visibility", c.mask_options.source_mutual_visibility,
                  "context tokens may attend triple tokens");
}

void AddTrainOptions(CLI::App *sub, TrainConfig &t) {
  sub->add_option("--batch-size", t.batch_size);
  sub->add_option("--lr", t.lr);
  sub->add_option("--max-steps", t.max_steps);
  sub->add_option("--eval-every", t.eval_every, "0: only after the last step");
  sub->add_option("--beta1", t.beta1);
  sub->add_option("--beta2", t.beta2);
  sub->add_option("--eps", t.eps);
  sub->add_option("--clip-norm", t.clip_norm, "<= 0 disables clipping");
  sub->add_option("--target-loss", t.target_loss, "> 0: stop once the training loss is below");
  sub->add_option("--max-decode-steps", t.max_decode_steps, "0: longest reference + 8");
  sub->add_option("--max-length", t.max_length, "0: unlimited");
}

AblationCell ParseCell(const std::string &label) {
  const auto slash = label.find('/');
  if (slash == std::string::npos) {
    throw Error(ErrorCode::kConfigInvalid, "cell '" + label + "' is not source/mask");
  }
  std::string src = label.substr(0, slash);
  AblationCell cell;
  if (src.size() > 5 && src.substr(src.size() - 5) == "-last") {
    cell.source.scope = TripleScope::kLastUtteranceOnly;
    src.resize(src.size() - 5);
  }
  cell.source.mode = ParseTripleMode(src);
  cell.variant = ParseMaskVariant(label.substr(slash + 1));
  return cell;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  Common common;
  GeneratorConfig config;
  std::string out_dir = "corpus";
  std::string family_weights;
  std::string lexicon;
};

int RunGen(const CLI::App *sub, GenArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  if (!a.family_weights.empty()) a.config.family_weights = ParseDoubles(a.family_weights);
  if (!a.lexicon.empty()) {
    a.config.entities = ReadLexicon(a.lexicon);
    m.AddInput(a.lexicon);
  }
  a.config.seed = DeriveSeed(a.common.seed, "corpus");
  m.seeds["corpus"] = a.config.seed;

  const GeneratedCorpus corpus = GenerateCorpus(a.config);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  WriteRecordFile(dir / "train.jsonl", corpus.train);
  WriteRecordFile(dir / "dev.jsonl", corpus.dev);
  WriteRecordFile(dir / "test.jsonl", corpus.test);
  GeneratorRules(a.config).Save(dir / "rules.txt");

  const DeclaredStatistics d = DeclareStatistics(a.config);
  json declared;
  declared["turn_two_elision_rate"] = TurnTwoElisionRate(a.config);
  declared["total_cross_turn"] = d.total_cross_turn;
  for (SemanticRole r : kAllRoles) {
    declared["roles"][std::string(RoleName(r))] = {
        {"overall", d.overall[static_cast<int>(r)]},
        {"cross_turn", d.cross_turn[static_cast<int>(r)]}};
  }
  WriteText(dir / "declared_stats.json", declared.dump(2) + "\n");

  for (const char *name : {"train.jsonl", "dev.jsonl", "test.jsonl", "rules.txt",
                           "declared_stats.json"}) {
    m.AddOutput(dir / name);
  }
  FinishManifest(m, a.common, dir / "manifest.json");
  std::printf("wrote %zu/%zu/%zu sessions to %s\n", corpus.train.size(), corpus.dev.size(),
              corpus.test.size(), dir.string().c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  Common common;
  ModelOptions model;
  TrainConfig train;
  SourceOptions source;
  RulesOptions rules;
  std::string train_path;
  std::string dev_path;
  std::string out_dir = "run";
  bool quiet = false;
};

int RunTrain(const CLI::App *sub, TrainArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  const auto corpus = ReadRecordFile(a.train_path);
  m.AddInput(a.train_path);
  std::vector<RewriteExample> dev;
  if (!a.dev_path.empty()) {
    dev = ReadRecordFile(a.dev_path);
    m.AddInput(a.dev_path);
  }
  const HeuristicRules rules = a.rules.Load(&m);
  const Vocabulary vocab = Vocabulary::Build(corpus);

  ModelConfig mc = a.model.config;
  mc.vocab_size = vocab.size();
  mc.mask_variant = ParseMaskVariant(a.model.mask);
  const std::uint64_t init_seed = DeriveSeed(a.common.seed, "init");
  m.seeds["init"] = init_seed;
  RewriterModel<float> model(mc, init_seed);

  TrainConfig tc = a.train;
  tc.seed = a.common.seed;
  tc.triple_source = a.source.Get();
  tc.mask_variant = mc.mask_variant;
  m.seeds["shuffle"] = DeriveSeed(tc.seed, "shuffle");
  m.seeds["triple-order"] = DeriveSeed(tc.seed, "triple-order");

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  std::ofstream log(dir / "steps.jsonl", std::ios::binary);
  TrainCallbacks cb;
  cb.on_step = [&](const StepLog &s) {
    log << json{{"step", s.step}, {"loss", s.loss}, {"grad_norm", s.grad_norm}}.dump() << '\n';
    if (!a.quiet && (s.step % 50 == 0 || s.step == 1)) {
      std::fprintf(stderr, "step %ld loss %.4f\n", s.step, s.loss);
    }
  };
  cb.on_eval = [&](const EvalPoint &p) {
    if (!a.quiet) std::fprintf(stderr, "eval @%ld  EM %.2f\n", p.step, 100 * p.dev.em);
  };
  const TrainResult r = Train(corpus, dev, model, vocab, tc, rules, cb);
  log.close();

  SaveCheckpoint(dir / "model.ckpt", model, vocab);
  json report;
  report["steps_run"] = r.steps_run;
  report["final_train_loss"] = r.final_train_loss;
  report["reached_target"] = r.reached_target;
  report["best_step"] = r.best_step;
  report["best_dev"] = ReportJson(r.best_dev);
  report["evals"] = json::array();
  for (const auto &e : r.evals) report["evals"].push_back({{"step", e.step}, {"dev", ReportJson(e.dev)}});
  report["parameter_count"] = model.parameter_count();
  WriteText(dir / "report.json", report.dump(2) + "\n");

  for (const char *name : {"steps.jsonl", "model.ckpt", "report.json"}) m.AddOutput(dir / name);
  FinishManifest(m, a.common, dir / "manifest.json");
  std::printf("steps %ld  train loss %.6f  best dev step %ld\n", r.steps_run,
              r.final_train_loss, r.best_step);
  if (!dev.empty()) std::printf("%s\n%s\n", EvalHeader().c_str(), FormatEvalRow(r.best_dev).c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct RewriteArgs {
  Common common;
  std::string input;
  std::string checkpoint;
  std::string out = "rewrites.jsonl";
  SourceOptions source;
  RulesOptions rules;
  int max_decode_steps = 0;
};

int RunRewrite(const CLI::App *sub, RewriteArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  auto records = ReadRecordFile(a.input);
  m.AddInput(a.input);
  auto ckpt = LoadCheckpoint<float>(a.checkpoint);
  m.AddInput(a.checkpoint);
  const HeuristicRules rules = a.rules.Load(&m);
  const int steps = a.max_decode_steps > 0 ? a.max_decode_steps
                                           : ckpt.model.config().max_position - 1;
  const std::uint64_t order = DeriveSeed(a.common.seed, "triple-order");
  m.seeds["triple-order"] = order;
  const auto out = DecodeCorpus(ckpt.model, ckpt.vocab, records, a.source.Get(), rules, order,
                                steps, false);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].reference = out.hypotheses[i];
  WriteRecordFile(a.out, records);
  m.AddOutput(a.out);
  FinishManifest(m, a.common, a.out + ".manifest.json");
  std::printf("rewrote %zu records\n", records.size());
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  Common common;
  std::string hyp;
  std::string ref;
  std::string out;
  bool smooth = false;
};

int RunEvaluate(const CLI::App *sub, EvaluateArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  const auto hyps = ReadRecordFile(a.hyp);
  const auto refs = ReadRecordFile(a.ref);
  m.AddInput(a.hyp);
  m.AddInput(a.ref);
  Corpus h, r;
  for (const auto &x : hyps) h.push_back(x.reference);
  for (const auto &x : refs) r.push_back(x.reference);
  const EvalReport rep = Evaluate(h, r, a.smooth);
  std::printf("%s\n%s\n", EvalHeader().c_str(), FormatEvalRow(rep).c_str());
  if (!a.out.empty()) {
    WriteText(a.out, ReportJson(rep).dump(2) + "\n");
    m.AddOutput(a.out);
  }
  FinishManifest(m, a.common, a.out.empty() ? "evaluate.manifest.json" : a.out + ".manifest.json");
  return 0;
}

// ---------------------------------------------------------------------------

struct ScoreSrlArgs {
  Common common;
  std::string gold;
  std::string pred;
  RulesOptions rules;
  std::string out;
};

int RunScoreSrl(const CLI::App *sub, ScoreSrlArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  const auto gold = ReadRecordFile(a.gold);
  m.AddInput(a.gold);
  std::vector<RewriteExample> pred;
  if (!a.pred.empty()) {
    pred = ReadRecordFile(a.pred);
    m.AddInput(a.pred);
  } else {
    const HeuristicRules rules = a.rules.Load(&m);
    pred = gold;
    for (auto &ex : pred) ex.triples = ExtractHeuristicTriples(ex.session, rules);
  }
  const SrlScore s = ScoreSrl(TuplesOf(pred), TuplesOf(gold));
  char buf[128];
  std::snprintf(buf, sizeof buf, "P %.4f  R %.4f  F1 %.4f\n", s.precision, s.recall, s.f1);
  std::fputs(buf, stdout);
  if (!a.out.empty()) {
    WriteText(a.out, json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}}
                             .dump(2) + "\n");
    m.AddOutput(a.out);
  }
  FinishManifest(m, a.common, a.out.empty() ? "score-srl.manifest.json" : a.out + ".manifest.json");
  return 0;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string out;
  bool lint = false;
};

int RunStats(const CLI::App *sub, StatsArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  std::vector<RewriteExample> corpus;
  for (const auto &p : a.inputs) {
    auto part = ReadRecordFile(p);
    corpus.insert(corpus.end(), part.begin(), part.end());
    m.AddInput(p);
  }
  const RoleStatistics st = ComputeStatistics(corpus);
  std::string text = FormatRoleTable(st);
  if (a.lint) {
    std::array<std::array<long, 3>, kNumLintRules> tally{};
    for (const auto &ex : corpus) {
      const auto rep = LintAnnotations(ex.session, ex.triples);
      for (const auto &t : rep.triples) {
        for (int k = 0; k < kNumLintRules; ++k) ++tally[k][static_cast<int>(t.verdicts[k])];
      }
    }
    const char *names[kNumLintRules] = {"C1 turn order", "C2 pronoun", "C3 speaker token",
                                        "C4 nearest"};
    char buf[128];
    text += "\nlint            pass   warn  violation\n";
    for (int k = 0; k < kNumLintRules; ++k) {
      std::snprintf(buf, sizeof buf, "%-16s %6ld %6ld %6ld\n", names[k], tally[k][0],
                    tally[k][1], tally[k][2]);
      text += buf;
    }
  }
  std::fputs(text.c_str(), stdout);
  if (!a.out.empty()) {
    json j;
    j["sessions"] = st.session_count;
    j["triples"] = st.triple_count;
    j["total_cross_turn"] = st.total_cross_turn_ratio();
    for (SemanticRole r : kAllRoles) {
      j["roles"][std::string(RoleName(r))] = {{"count", st.count[static_cast<int>(r)]},
                                              {"overall", st.overall_ratio(r)},
                                              {"cross_turn", st.cross_turn_ratio(r)}};
    }
    WriteText(a.out, j.dump(2) + "\n");
    m.AddOutput(a.out);
  }
  FinishManifest(m, a.common, a.out.empty() ? "stats.manifest.json" : a.out + ".manifest.json");
  return 0;
}

// ---------------------------------------------------------------------------

struct AblateArgs {
  Common common;
  ModelOptions model;
  TrainConfig train;
  RulesOptions rules;
  std::string train_path, dev_path, test_path;
  std::string cells;
  std::string seeds = "1,2,3";
  std::string out_dir = "ablation";
};

int RunAblate(const CLI::App *sub, AblateArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  const auto train = ReadRecordFile(a.train_path);
  const auto dev = ReadRecordFile(a.dev_path);
  const auto test = ReadRecordFile(a.test_path);
  m.AddInput(a.train_path);
  m.AddInput(a.dev_path);
  m.AddInput(a.test_path);
  const HeuristicRules rules = a.rules.Load(&m);

  std::vector<AblationCell> grid;
  if (a.cells.empty()) {
    grid = DefaultAblationGrid();
  } else {
    for (const auto &label : SplitList(a.cells)) grid.push_back(ParseCell(label));
  }
  std::vector<std::uint64_t> seeds;
  for (const auto &s : SplitList(a.seeds)) {
    seeds.push_back(DeriveSeed(a.common.seed + std::stoull(s), "cell"));
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) m.seeds["cell-" + std::to_string(i)] = seeds[i];

  json runs = json::array();
  const auto results = RunAblationGrid(
      train, dev, test, grid, seeds, a.model.config, a.train, rules,
      [&](const AblationRun &r) {
        std::fprintf(stderr, "%-20s seed %llu  test EM %.2f\n", r.cell.label().c_str(),
                     static_cast<unsigned long long>(r.seed), 100 * r.test.em);
      });
  for (const auto &r : results) {
    runs.push_back({{"cell", r.cell.label()},
                    {"seed", r.seed},
                    {"best_step", r.best_step},
                    {"dev", ReportJson(r.dev)},
                    {"test", ReportJson(r.test)}});
  }
  const std::string table = FormatAblationTable(results);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  WriteText(dir / "table.txt", table);
  WriteText(dir / "runs.json", runs.dump(2) + "\n");
  m.AddOutput(dir / "table.txt");
  m.AddOutput(dir / "runs.json");
  FinishManifest(m, a.common, dir / "manifest.json");
  std::fputs(table.c_str(), stdout);
  return 0;
}

// ---------------------------------------------------------------------------

struct PackArgs {
  Common common;
  std::string input;
  int index = 0;
  std::string checkpoint;
  std::string vocab;
  SourceOptions source;
  RulesOptions rules;
  std::string mask = "triple";
  bool source_mutual_visibility = true;
  bool dump = false;
  bool dump_mask = false;
  bool no_reference = false;
  std::string out;
};

int RunPack(const CLI::App *sub, PackArgs &a) {
  RunManifest m = StartManifest(sub, a.common);
  const auto records = ReadRecordFile(a.input);
  m.AddInput(a.input);
  if (a.index < 0 || a.index >= static_cast<int>(records.size())) {
    throw Error(ErrorCode::kIdOutOfRange, "record index " + std::to_string(a.index) +
                                              " outside 0.." +
                                              std::to_string(records.size()));
  }
  Vocabulary vocab;
  if (!a.checkpoint.empty()) {
    vocab = LoadCheckpoint<float>(a.checkpoint).vocab;
    m.AddInput(a.checkpoint);
  } else if (!a.vocab.empty()) {
    vocab = Vocabulary::Load(a.vocab);
    m.AddInput(a.vocab);
  } else {
    vocab = Vocabulary::Build(records);
  }
  const HeuristicRules rules = a.rules.Load(&m);
  const auto &ex = records[a.index];
  PackOptions opt;
  opt.seed = DeriveSeed(DeriveSeed(a.common.seed, "triple-order") + a.index, "triple-order");
  opt.include_reference = !a.no_reference;
  m.seeds["triple-order"] = opt.seed;
  const PackedSequence seq = Pack(ex, AcquireTriples(ex, a.source.Get(), rules), vocab, opt);

  std::string text;
  if (a.dump || !a.dump_mask) text += DumpPacked(seq, vocab);
  if (a.dump_mask) {
    MaskOptions mo;
    mo.source_mutual_visibility = a.source_mutual_visibility;
    text += DumpMask(BuildMask(seq.regions, ParseMaskVariant(a.mask), mo));
  }
  if (a.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    WriteText(a.out, text);
    m.AddOutput(a.out);
  }
  FinishManifest(m, a.common, a.out.empty() ? "pack.manifest.json" : a.out + ".manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"srlrw: SRL-guided dialogue rewriter"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GenArgs gen;
  auto *gen_cmd = app.add_subcommand("gen-corpus", "generate a synthetic train/dev/test corpus");
  AddCommon(gen_cmd, gen.common);
  gen_cmd->add_option("--out-dir", gen.out_dir);
  gen_cmd->add_option("--n-sessions", gen.config.n_sessions);
  gen_cmd->add_option("--dev-fraction", gen.config.dev_fraction);
  gen_cmd->add_option("--test-fraction", gen.config.test_fraction);
  gen_cmd->add_option("--omission-rate", gen.config.omission_rate);
  gen_cmd->add_option("--pronoun-rate", gen.config.pronoun_rate);
  gen_cmd->add_option("--cross-turn-rate", gen.config.cross_turn_rate);
  gen_cmd->add_flag("--ascii", gen.config.ascii_entities, "latin-only entities and templates");
  gen_cmd->add_option("--family-weights", gen.family_weights, "comma-separated, one per family");
  gen_cmd->add_option("--lexicon", gen.lexicon, "entity lexicon: `<class> <surface>` lines");

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "train a rewriter");
  AddCommon(train_cmd, train.common);
  train_cmd->add_option("--train", train.train_path)->required();
  train_cmd->add_option("--dev", train.dev_path);
  train_cmd->add_option("--out-dir", train.out_dir);
  train_cmd->add_flag("--quiet", train.quiet);
  AddModelOptions(train_cmd, train.model);
  AddTrainOptions(train_cmd, train.train);
  AddSourceOptions(train_cmd, train.source);
  AddRulesOptions(train_cmd, train.rules);

  RewriteArgs rewrite;
  auto *rewrite_cmd = app.add_subcommand("rewrite", "greedy-decode rewrites for a record file");
  AddCommon(rewrite_cmd, rewrite.common);
  rewrite_cmd->add_option("--input", rewrite.input)->required();
  rewrite_cmd->add_option("--checkpoint", rewrite.checkpoint)->required();
  rewrite_cmd->add_option("--out", rewrite.out);
  rewrite_cmd->add_option("--max-decode-steps", rewrite.max_decode_steps, "0: max_position - 1");
  AddSourceOptions(rewrite_cmd, rewrite.source);
  AddRulesOptions(rewrite_cmd, rewrite.rules);

  EvaluateArgs evaluate;
  auto *eval_cmd = app.add_subcommand("evaluate", "BLEU/ROUGE/EM of hypotheses vs references");
  AddCommon(eval_cmd, evaluate.common);
  eval_cmd->add_option("--hyp", evaluate.hyp)->required();
  eval_cmd->add_option("--ref", evaluate.ref)->required();
  eval_cmd->add_option("--out", evaluate.out, "JSON report");
  eval_cmd->add_flag("--smooth", evaluate.smooth, "add-one smoothing for BLEU orders > 1");

  ScoreSrlArgs score;
  auto *score_cmd = app.add_subcommand("score-srl", "micro P/R/F1 of predicted triples");
  AddCommon(score_cmd, score.common);
  score_cmd->add_option("--gold", score.gold)->required();
  score_cmd->add_option("--pred", score.pred, "records with predicted triples; default: heuristic");
  score_cmd->add_option("--out", score.out, "JSON report");
  AddRulesOptions(score_cmd, score.rules);

  StatsArgs stats;
  auto *stats_cmd = app.add_subcommand("stats", "role distribution and cross-turn ratios");
  AddCommon(stats_cmd, stats.common);
  stats_cmd->add_option("--input", stats.inputs)->required();
  stats_cmd->add_option("--out", stats.out, "JSON report");
  stats_cmd->add_flag("--lint", stats.lint, "also tally the annotation checks");

  AblateArgs ablate;
  auto *ablate_cmd = app.add_subcommand("ablate", "train and test every grid cell per seed");
  AddCommon(ablate_cmd, ablate.common);
  ablate_cmd->add_option("--train", ablate.train_path)->required();
  ablate_cmd->add_option("--dev", ablate.dev_path)->required();
  ablate_cmd->add_option("--test", ablate.test_path)->required();
  ablate_cmd->add_option("--cells", ablate.cells, "comma-separated source/mask labels");
  ablate_cmd->add_option("--seeds", ablate.seeds, "comma-separated seed offsets");
  ablate_cmd->add_option("--out-dir", ablate.out_dir);
  AddModelOptions(ablate_cmd, ablate.model);
  AddTrainOptions(ablate_cmd, ablate.train);
  AddRulesOptions(ablate_cmd, ablate.rules);

  PackArgs pack;
  auto *pack_cmd = app.add_subcommand("pack", "show the packed input of one record");
  AddCommon(pack_cmd, pack.common);
  pack_cmd->add_option("--input", pack.input)->required();
  pack_cmd->add_option("--index", pack.index);
  pack_cmd->add_option("--checkpoint", pack.checkpoint, "take the vocabulary from here");
  pack_cmd->add_option("--vocab", pack.vocab, "vocabulary file");
  pack_cmd->add_option("--mask", pack.mask, "none | bi | triple");
  pack_cmd->add_option("--source-mutual-visibility", pack.source_mutual_visibility);
  pack_cmd->add_flag("--dump", pack.dump, "token/segment/position/region rows");
  pack_cmd->add_flag("--dump-mask", pack.dump_mask, "visibility matrix");
  pack_cmd->add_flag("--no-reference", pack.no_reference, "pack for decoding");
  pack_cmd->add_option("--out", pack.out);
  AddSourceOptions(pack_cmd, pack.source);
  AddRulesOptions(pack_cmd, pack.rules);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) return RunGen(gen_cmd, gen);
    if (*train_cmd) return RunTrain(train_cmd, train);
    if (*rewrite_cmd) return RunRewrite(rewrite_cmd, rewrite);
    if (*eval_cmd) return RunEvaluate(eval_cmd, evaluate);
    if (*score_cmd) return RunScoreSrl(score_cmd, score);
    if (*stats_cmd) return RunStats(stats_cmd, stats);
    if (*ablate_cmd) return RunAblate(ablate_cmd, ablate);
    if (*pack_cmd) return RunPack(pack_cmd, pack);
  } catch (const Error &e) {
    std::fprintf(stderr, "error %s: %s\n", std::string(ErrorCodeName(e.code())).c_str(),
                 e.what());
    return 1;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 2;
}
