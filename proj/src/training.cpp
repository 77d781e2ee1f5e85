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

#include "srlrw/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "srlrw/seeding.hpp"
#include "srlrw/sequence_builder.hpp"

namespace srlrw {

template <typename Scalar>
AdamOptimizer<Scalar>::AdamOptimizer(const ParameterSet<Scalar> &like, Hyper hyper)
    : hyper_(hyper), m_(like), v_(like) {
  m_.SetZero();
  v_.SetZero();
}

template <typename Scalar>
void AdamOptimizer<Scalar>::Step(ParameterSet<Scalar> &params,
                                 const ParameterSet<Scalar> &grads) {
  if (params.size() != grads.size() || params.size() != m_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "optimizer state does not match parameters");
  }
  ++step_;
  const Scalar b1 = Scalar(hyper_.beta1), b2 = Scalar(hyper_.beta2);
  const Scalar c1 = Scalar(1) - Scalar(std::pow(hyper_.beta1, double(step_)));
  const Scalar c2 = Scalar(1) - Scalar(std::pow(hyper_.beta2, double(step_)));
  const Scalar lr = Scalar(hyper_.lr), eps = Scalar(hyper_.eps);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto &m = m_.tensors[k];
    auto &v = v_.tensors[k];
    const auto &g = grads.tensors[k];
    m = b1 * m + (Scalar(1) - b1) * g;
    v = b2 * v + (Scalar(1) - b2) * g.cwiseProduct(g);
    params.tensors[k].array() -=
        lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }
}

template <typename Scalar>
double ClipGlobalNorm(ParameterSet<Scalar> &grads, double max_norm) {
  const double norm = std::sqrt(static_cast<double>(grads.SquaredNorm()));
  if (max_norm > 0.0 && norm > max_norm) grads.Scale(Scalar(max_norm / norm));
  return norm;
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::kConfigInvalid, msg); };
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!(lr >= 0.0)) fail("lr must be >= 0");
  if (max_steps < 0) fail("max_steps must be >= 0");
  if (eval_every < 0) fail("eval_every must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    fail("betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) fail("eps must be > 0");
  if (max_decode_steps < 0 || max_length < 0) fail("lengths must be >= 0");
}

std::vector<PackedSequence> PackCorpus(const std::vector<RewriteExample> &examples,
                                       const Vocabulary &vocab, const TripleSource &source,
                                       const HeuristicRules &rules, std::uint64_t seed,
                                       bool include_reference, int max_length) {
  std::vector<PackedSequence> out;
  out.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    PackOptions opt;
    opt.seed = DeriveSeed(seed + i, "triple-order");
    opt.include_reference = include_reference;
    opt.max_length = max_length;
    out.push_back(Pack(examples[i], AcquireTriples(examples[i], source, rules), vocab, opt));
  }
  return out;
}

int DefaultDecodeSteps(const std::vector<RewriteExample> &corpus, const ModelConfig &config) {
  std::size_t longest = 0;
  for (const auto &ex : corpus) longest = std::max(longest, ex.reference.size());
  // The rewrite region holds [BOS] + tokens, each with its own position.
  return std::max(1, std::min(static_cast<int>(longest) + 8, config.max_position - 1));
}

template <typename Scalar>
DecodeOutput DecodeCorpus(const RewriterModel<Scalar> &model, const Vocabulary &vocab,
                          const std::vector<RewriteExample> &examples,
                          const TripleSource &source, const HeuristicRules &rules,
                          std::uint64_t seed, int max_decode_steps, bool with_report) {
  DecodeOutput out;
  if (examples.empty()) return out;
  const auto sources = PackCorpus(examples, vocab, source, rules, seed, false);
  constexpr std::size_t kChunk = 64;
  for (std::size_t start = 0; start < sources.size(); start += kChunk) {
    const std::size_t end = std::min(sources.size(), start + kChunk);
    const std::vector<PackedSequence> chunk(sources.begin() + start, sources.begin() + end);
    for (const auto &ids : GreedyDecodeBatch(model, chunk, max_decode_steps)) {
      out.hypotheses.push_back(vocab.Decode(ids));
    }
  }
  if (with_report) {
    Corpus refs;
    for (const auto &ex : examples) refs.push_back(ex.reference);
    out.report = Evaluate(out.hypotheses, refs);
  }
  return out;
}

template <typename Scalar>
double CorpusLoss(const RewriterModel<Scalar> &model, const std::vector<PackedSequence> &seqs,
                  int batch_size) {
  double total = 0.0;
  for (std::size_t start = 0; start < seqs.size(); start += batch_size) {
    const std::size_t end = std::min(seqs.size(), start + static_cast<std::size_t>(batch_size));
    std::vector<const PackedSequence *> batch;
    std::vector<VisibilityMatrix> masks;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(&seqs[i]);
      masks.push_back(model.MaskFor(seqs[i]));
    }
    for (Scalar l : model.Loss(batch, masks)) total += static_cast<double>(l);
  }
  return seqs.empty() ? 0.0 : total / static_cast<double>(seqs.size());
}

template <typename Scalar>
TrainResult Train(const std::vector<RewriteExample> &corpus,
                  const std::vector<RewriteExample> &dev, RewriterModel<Scalar> &model,
                  const Vocabulary &vocab, const TrainConfig &config,
                  const HeuristicRules &rules, const TrainCallbacks &callbacks) {
  config.Validate();
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "training corpus is empty");
  if (model.config().mask_variant != config.mask_variant) {
    throw Error(ErrorCode::kVariantMismatch,
                std::string("model uses ") +
                    std::string(MaskVariantName(model.config().mask_variant)) +
                    " but training asks for " +
                    std::string(MaskVariantName(config.mask_variant)));
  }
  if (model.config().vocab_size != vocab.size()) {
    throw Error(ErrorCode::kShapeMismatch, "model vocab_size differs from the vocabulary");
  }

  const std::uint64_t order_seed = DeriveSeed(config.seed, "triple-order");
  const auto seqs =
      PackCorpus(corpus, vocab, config.triple_source, rules, order_seed, true, config.max_length);
  std::vector<VisibilityMatrix> masks;
  masks.reserve(seqs.size());
  for (const auto &s : seqs) masks.push_back(model.MaskFor(s));

  const int decode_steps = config.max_decode_steps > 0
                               ? config.max_decode_steps
                               : DefaultDecodeSteps(corpus, model.config());

  AdamOptimizer<Scalar> adam(model.params(),
                             {config.lr, config.beta1, config.beta2, config.eps});
  model.SeedDropout(DeriveSeed(config.seed, "dropout"));
  std::mt19937_64 shuffle_rng(DeriveSeed(config.seed, "shuffle"));

  TrainResult result;
  ParameterSet<Scalar> best_params;
  auto evaluate = [&](long step) {
    if (dev.empty()) return;
    EvalPoint point{step, DecodeCorpus(model, vocab, dev, config.triple_source, rules,
                                       DeriveSeed(config.seed, "dev-order"), decode_steps)
                              .report};
    result.evals.push_back(point);
    if (callbacks.on_eval) callbacks.on_eval(point);
    if (result.best_step < 0 || point.dev.em_matches > result.best_dev.em_matches) {
      result.best_step = step;
      result.best_dev = point.dev;
      best_params = model.params();
    }
  };

  std::vector<std::size_t> order(seqs.size());
  std::size_t cursor = order.size();
  long step = 0;
  bool last_evaluated = false;
  while (step < config.max_steps) {
    if (cursor >= order.size()) {
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(shuffle_rng)]);
      }
      cursor = 0;
    }
    const std::size_t end =
        std::min(order.size(), cursor + static_cast<std::size_t>(config.batch_size));
    std::vector<const PackedSequence *> batch;
    std::vector<VisibilityMatrix> batch_masks;
    for (std::size_t i = cursor; i < end; ++i) {
      batch.push_back(&seqs[order[i]]);
      batch_masks.push_back(masks[order[i]]);
    }
    cursor = end;

    const auto losses = model.LossAndGradients(batch, batch_masks, true);
    double loss = 0.0;
    for (Scalar l : losses) loss += static_cast<double>(l);
    loss /= static_cast<double>(losses.size());
    ++step;
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence,
                  "non-finite loss " + std::to_string(loss) + " at step " +
                      std::to_string(step) + " (batch of " + std::to_string(batch.size()) +
                      ", lr " + std::to_string(config.lr) + ")");
    }
    const double norm = ClipGlobalNorm(model.grads(), config.clip_norm);
    if (!std::isfinite(norm)) {
      throw Error(ErrorCode::kDivergence, "non-finite gradient norm at step " +
                                              std::to_string(step));
    }
    adam.Step(model.params(), model.grads());

    StepLog log{step, loss, norm};
    result.steps.push_back(log);
    if (callbacks.on_step) callbacks.on_step(log);

    last_evaluated = false;
    if (config.eval_every > 0 && step % config.eval_every == 0) {
      evaluate(step);
      last_evaluated = true;
    }
    if (config.target_loss > 0.0 && loss < config.target_loss &&
        CorpusLoss(model, seqs, config.batch_size) < config.target_loss) {
      result.reached_target = true;
      break;
    }
  }
  result.steps_run = step;
  if (!last_evaluated) evaluate(step);
  if (result.best_step >= 0) model.params() = best_params;
  result.final_train_loss = CorpusLoss(model, seqs, config.batch_size);
  return result;
}

// ---------------------------------------------------------------------------

std::string AblationCell::label() const {
  std::string src(TripleModeName(source.mode));
  if (source.scope == TripleScope::kLastUtteranceOnly) src += "-last";
  return src + "/" + std::string(MaskVariantName(variant));
}

std::vector<AblationCell> DefaultAblationGrid() {
  using M = TripleMode;
  using S = TripleScope;
  return {
      {{M::kNone, S::kFullContext}, MaskVariant::kNoSrl},
      {{M::kGold, S::kFullContext}, MaskVariant::kBiMask},
      {{M::kGold, S::kFullContext}, MaskVariant::kTripleMask},
      {{M::kGold, S::kLastUtteranceOnly}, MaskVariant::kTripleMask},
      {{M::kHeuristic, S::kFullContext}, MaskVariant::kTripleMask},
  };
}

namespace {

bool SameCell(const AblationCell &a, const AblationCell &b) {
  return a.source.mode == b.source.mode && a.source.scope == b.source.scope &&
         a.variant == b.variant;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<AblationRun> RunAblationGrid(const std::vector<RewriteExample> &train,
                                         const std::vector<RewriteExample> &dev,
                                         const std::vector<RewriteExample> &test,
                                         const std::vector<AblationCell> &grid,
                                         const std::vector<std::uint64_t> &seeds,
                                         const ModelConfig &model_config,
                                         const TrainConfig &train_config,
                                         const HeuristicRules &rules,
                                         const std::function<void(const AblationRun &)> &on_run) {
  if (grid.empty()) throw Error(ErrorCode::kConfigInvalid, "ablation grid is empty");
  if (seeds.empty()) throw Error(ErrorCode::kConfigInvalid, "no seeds given");
  const Vocabulary vocab = Vocabulary::Build(train);

  std::vector<AblationRun> runs;
  for (const auto &cell : grid) {
    for (std::uint64_t seed : seeds) {
      ModelConfig mc = model_config;
      mc.vocab_size = vocab.size();
      mc.mask_variant = cell.variant;
      RewriterModel<float> model(mc, DeriveSeed(seed, "init"));

      TrainConfig tc = train_config;
      tc.seed = seed;
      tc.triple_source = cell.source;
      tc.mask_variant = cell.variant;
      const TrainResult tr = Train(train, dev, model, vocab, tc, rules);

      AblationRun run;
      run.cell = cell;
      run.seed = seed;
      run.best_step = tr.best_step;
      run.dev = tr.best_dev;
      const int steps = tc.max_decode_steps > 0 ? tc.max_decode_steps
                                                : DefaultDecodeSteps(train, mc);
      run.test = DecodeCorpus(model, vocab, test, cell.source, rules,
                              DeriveSeed(seed, "test-order"), steps)
                     .report;
      if (on_run) on_run(run);
      runs.push_back(run);
    }
  }
  return runs;
}

double MedianTestEm(const std::vector<AblationRun> &runs, const AblationCell &cell) {
  std::vector<double> em;
  for (const auto &r : runs) {
    if (SameCell(r.cell, cell)) em.push_back(r.test.em);
  }
  if (em.empty()) throw Error(ErrorCode::kConfigInvalid, "cell " + cell.label() + " not run");
  return Median(em);
}

std::string FormatAblationTable(const std::vector<AblationRun> &runs) {
  std::vector<AblationCell> cells;
  for (const auto &r : runs) {
    if (std::none_of(cells.begin(), cells.end(),
                     [&](const AblationCell &c) { return SameCell(c, r.cell); })) {
      cells.push_back(r.cell);
    }
  }
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-20s %5s ", "cell", "seeds");
  out += buf + EvalHeader() + "\n";
  for (const auto &cell : cells) {
    std::vector<double> m[7];
    for (const auto &r : runs) {
      if (!SameCell(r.cell, cell)) continue;
      const EvalReport &t = r.test;
      const double vals[7] = {t.bleu1, t.bleu2, t.bleu4, t.rouge1, t.rouge2, t.rougeL, t.em};
      for (int k = 0; k < 7; ++k) m[k].push_back(vals[k]);
    }
    EvalReport med;
    med.bleu1 = Median(m[0]);
    med.bleu2 = Median(m[1]);
    med.bleu4 = Median(m[2]);
    med.rouge1 = Median(m[3]);
    med.rouge2 = Median(m[4]);
    med.rougeL = Median(m[5]);
    med.em = Median(m[6]);
    std::snprintf(buf, sizeof buf, "%-20s %5zu ", cell.label().c_str(), m[0].size());
    out += buf + FormatEvalRow(med) + "\n";
  }
  return out;
}

#define SRLRW_INSTANTIATE_TRAINING(S)                                                       \
  template class AdamOptimizer<S>;                                                         \
  template double ClipGlobalNorm<S>(ParameterSet<S> &, double);                            \
  template DecodeOutput DecodeCorpus<S>(const RewriterModel<S> &, const Vocabulary &,      \
                                        const std::vector<RewriteExample> &,               \
                                        const TripleSource &, const HeuristicRules &,      \
                                        std::uint64_t, int, bool);                          \
  template double CorpusLoss<S>(const RewriterModel<S> &,                                  \
                                const std::vector<PackedSequence> &, int);                 \
  template TrainResult Train<S>(const std::vector<RewriteExample> &,                       \
                                const std::vector<RewriteExample> &, RewriterModel<S> &,   \
                                const Vocabulary &, const TrainConfig &,                   \
                                const HeuristicRules &, const TrainCallbacks &);

SRLRW_INSTANTIATE_TRAINING(float)
SRLRW_INSTANTIATE_TRAINING(double)

#undef SRLRW_INSTANTIATE_TRAINING

}  // namespace srlrw
