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

#ifndef SRLRW_TRAINING_HPP_
#define SRLRW_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srlrw/metrics.hpp"
#include "srlrw/model.hpp"
#include "srlrw/srl_data.hpp"
#include "srlrw/vocabulary.hpp"

namespace srlrw {

// Bias-corrected adaptive-moment updates.
template <typename Scalar>
class AdamOptimizer {
 public:
  struct Hyper {
    double lr = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  AdamOptimizer(const ParameterSet<Scalar> &like, Hyper hyper);

  void Step(ParameterSet<Scalar> &params, const ParameterSet<Scalar> &grads);

  long step() const { return step_; }
  const Hyper &hyper() const { return hyper_; }
  const ParameterSet<Scalar> &first_moment() const { return m_; }
  const ParameterSet<Scalar> &second_moment() const { return v_; }

 private:
  Hyper hyper_;
  ParameterSet<Scalar> m_;
  ParameterSet<Scalar> v_;
  long step_ = 0;
};

// Rescales the gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
template <typename Scalar>
double ClipGlobalNorm(ParameterSet<Scalar> &grads, double max_norm);

struct TrainConfig {
  int batch_size = 32;
  double lr = 5e-5;
  long max_steps = 1000;
  long eval_every = 0;  // 0: evaluate only after the last step
  std::uint64_t seed = 0;
  TripleSource triple_source;
  MaskVariant mask_variant = MaskVariant::kTripleMask;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;    // <= 0 disables clipping
  double target_loss = 0.0;  // > 0: stop once the full training loss drops below
  int max_decode_steps = 0;  // 0: longest training reference + 8
  int max_length = 0;        // 0: bounded by the model's max_position

  void Validate() const;
};

// Packs every example with the triples of `source`. Each example gets its own
// triple-order seed derived from `seed` and its index.
std::vector<PackedSequence> PackCorpus(const std::vector<RewriteExample> &examples,
                                       const Vocabulary &vocab, const TripleSource &source,
                                       const HeuristicRules &rules, std::uint64_t seed,
                                       bool include_reference, int max_length = 0);

struct DecodeOutput {
  Corpus hypotheses;
  EvalReport report;  // only filled when references are available
};

template <typename Scalar>
DecodeOutput DecodeCorpus(const RewriterModel<Scalar> &model, const Vocabulary &vocab,
                          const std::vector<RewriteExample> &examples,
                          const TripleSource &source, const HeuristicRules &rules,
                          std::uint64_t seed, int max_decode_steps,
                          bool with_report = true);

struct StepLog {
  long step = 0;
  double loss = 0.0;       // batch mean of the summed NLL
  double grad_norm = 0.0;  // before clipping
};

struct EvalPoint {
  long step = 0;
  EvalReport dev;
};

struct TrainResult {
  std::vector<StepLog> steps;
  std::vector<EvalPoint> evals;
  long best_step = -1;  // -1 without a dev set
  EvalReport best_dev;
  long steps_run = 0;
  double final_train_loss = 0.0;
  bool reached_target = false;
};

struct TrainCallbacks {
  std::function<void(const StepLog &)> on_step;
  std::function<void(const EvalPoint &)> on_eval;
};

// Trains `model` in place. With a dev set the model ends up holding the
// parameters of the evaluation with the best dev EM (earliest on ties).
template <typename Scalar>
TrainResult Train(const std::vector<RewriteExample> &corpus,
                  const std::vector<RewriteExample> &dev, RewriterModel<Scalar> &model,
                  const Vocabulary &vocab, const TrainConfig &config,
                  const HeuristicRules &rules = {}, const TrainCallbacks &callbacks = {});

// Mean over examples of the summed NLL, no dropout.
template <typename Scalar>
double CorpusLoss(const RewriterModel<Scalar> &model, const std::vector<PackedSequence> &seqs,
                  int batch_size);

int DefaultDecodeSteps(const std::vector<RewriteExample> &corpus, const ModelConfig &config);

// ---------------------------------------------------------------------------
// Ablation grid
// ---------------------------------------------------------------------------

struct AblationCell {
  TripleSource source;
  MaskVariant variant = MaskVariant::kTripleMask;

  std::string label() const;
};

// None/NoSrl, Gold/Bi, Gold/Triple, Gold-last-utterance/Triple,
// Heuristic/Triple.
std::vector<AblationCell> DefaultAblationGrid();

struct AblationRun {
  AblationCell cell;
  std::uint64_t seed = 0;
  long best_step = -1;
  EvalReport dev;
  EvalReport test;
};

// One full train + test evaluation per cell per seed on the same splits.
// The vocabulary is built from `train`.
std::vector<AblationRun> RunAblationGrid(const std::vector<RewriteExample> &train,
                                         const std::vector<RewriteExample> &dev,
                                         const std::vector<RewriteExample> &test,
                                         const std::vector<AblationCell> &grid,
                                         const std::vector<std::uint64_t> &seeds,
                                         const ModelConfig &model_config,
                                         const TrainConfig &train_config,
                                         const HeuristicRules &rules,
                                         const std::function<void(const AblationRun &)>
                                             &on_run = {});

// Median test EM over the seeds of one cell.
double MedianTestEm(const std::vector<AblationRun> &runs, const AblationCell &cell);

// One row per cell (median over seeds of every metric), aligned columns.
std::string FormatAblationTable(const std::vector<AblationRun> &runs);

}  // namespace srlrw

#endif  // SRLRW_TRAINING_HPP_
