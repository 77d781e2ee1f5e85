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

#ifndef SRLRW_MODEL_HPP_
#define SRLRW_MODEL_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srlrw/attention_mask.hpp"
#include "srlrw/sequence_builder.hpp"

namespace srlrw {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct ModelConfig {
  int d_model = 32;
  int n_heads = 4;
  int n_layers = 2;
  int d_ff = 64;
  int vocab_size = 0;
  int max_position = 64;
  double dropout = 0.0;
  double layer_norm_eps = 1e-5;
  bool tie_embeddings = false;
  MaskVariant mask_variant = MaskVariant::kTripleMask;
  MaskOptions mask_options;

  // Throws CONFIG_INVALID on inconsistent sizes.
  void Validate() const;
  bool operator==(const ModelConfig &) const = default;
};

// Named parameter tensors in a fixed declared order. Vectors are stored as
// 1 x n matrices so every tensor has the same type.
template <typename Scalar>
struct ParameterSet {
  std::vector<std::string> names;
  std::vector<MatrixX<Scalar>> tensors;

  std::size_t size() const { return tensors.size(); }
  Eigen::Index count() const;
  void SetZero();
  Scalar SquaredNorm() const;
  void Scale(Scalar s);
};

// Index layout of ParameterSet::tensors for a given config.
struct ParameterLayout {
  static constexpr int kWordEmb = 0;
  static constexpr int kSegmentEmb = 1;
  static constexpr int kPositionEmb = 2;
  static constexpr int kPerLayer = 16;
  enum LayerSlot {
    kWq = 0, kBq, kWk, kBk, kWv, kBv, kWo, kBo,
    kLn1Gain, kLn1Bias, kLn2Gain, kLn2Bias, kW1, kB1, kW2, kB2,
  };

  explicit ParameterLayout(const ModelConfig &config)
      : n_layers_(config.n_layers), tied_(config.tie_embeddings) {}

  int layer(int l, LayerSlot slot) const { return 3 + l * kPerLayer + slot; }
  int final_gain() const { return 3 + n_layers_ * kPerLayer; }
  int final_bias() const { return final_gain() + 1; }
  // -1 when the output projection is tied to the word embedding.
  int out_weight() const { return tied_ ? -1 : final_bias() + 1; }
  int out_bias() const { return final_bias() + (tied_ ? 1 : 2); }
  int tensor_count() const { return out_bias() + 1; }

 private:
  int n_layers_;
  bool tied_;
};

// Forward activations kept for the backward pass.
template <typename Scalar>
struct ForwardCache;

// Summed word + segment + position embeddings, a stack of pre-norm
// transformer blocks whose self-attention is restricted by a visibility
// matrix, a final layer norm and a softmax output projection. The mask
// variant changes no parameter shape.
template <typename Scalar>
class RewriterModel {
 public:
  using Matrix = MatrixX<Scalar>;

  RewriterModel(const ModelConfig &config, std::uint64_t seed);

  const ModelConfig &config() const { return config_; }
  ParameterSet<Scalar> &params() { return params_; }
  const ParameterSet<Scalar> &params() const { return params_; }
  ParameterSet<Scalar> &grads() { return grads_; }
  const ParameterSet<Scalar> &grads() const { return grads_; }
  Eigen::Index parameter_count() const { return params_.count(); }

  // Row i = word[token_i] + segment[segment_i] + position[position_i].
  Matrix Embed(const PackedSequence &seq) const;

  // Next-token distribution at every position (rows sum to 1).
  Matrix Forward(const PackedSequence &seq, const VisibilityMatrix &mask) const;

  // Distributions at every real position of every sequence. Sequences are
  // padded to a common length; pad tokens see only themselves and no real
  // token sees a pad.
  std::vector<Matrix> ForwardBatch(const std::vector<const PackedSequence *> &seqs,
                                   const std::vector<VisibilityMatrix> &masks) const;

  // Distribution at the last position of each sequence.
  std::vector<VectorX<Scalar>> ForwardLast(
      const std::vector<const PackedSequence *> &seqs,
      const std::vector<VisibilityMatrix> &masks) const;

  // Summed NLL of the rewrite targets for every sequence, averaged over the
  // batch, with gradients of that average written to grads() (overwritten).
  // Returns the per-example summed losses.
  std::vector<Scalar> LossAndGradients(const std::vector<const PackedSequence *> &seqs,
                                       const std::vector<VisibilityMatrix> &masks,
                                       bool training = false);

  // Loss only, same definition as LossAndGradients.
  std::vector<Scalar> Loss(const std::vector<const PackedSequence *> &seqs,
                           const std::vector<VisibilityMatrix> &masks) const;

  // Mask built from the sequence regions and this model's variant.
  VisibilityMatrix MaskFor(const PackedSequence &seq) const;

  // Reseed the dropout stream.
  void SeedDropout(std::uint64_t seed) { dropout_rng_.seed(seed); }

 private:
  void Run(const std::vector<const PackedSequence *> &seqs,
           const std::vector<VisibilityMatrix> &masks, bool training,
           ForwardCache<Scalar> &cache) const;
  Matrix OutputWeight() const;

  ModelConfig config_;
  ParameterLayout layout_;
  ParameterSet<Scalar> params_;
  ParameterSet<Scalar> grads_;
  mutable std::mt19937_64 dropout_rng_;
};

// -sum_t log p(target_t) over the rewrite targets r_1..r_T and the final
// [EOS], each read from its predecessor's row of `distributions`.
template <typename Scalar>
Scalar NllLoss(const MatrixX<Scalar> &distributions, const PackedSequence &seq);

// (row, target id) pairs scored by the NLL: every rewrite position except the
// last predicts its successor.
std::vector<std::pair<int, TokenId>> LossTargets(const PackedSequence &seq);

// Greedy decoding. Ties in the argmax go to the lowest token id.
struct DecodeState {
  PackedSequence prefix;
  std::vector<TokenId> emitted;
  int step = 0;
  bool finished = false;
};

TokenId ArgmaxLowest(const Eigen::Ref<const Eigen::VectorXd> &scores);

template <typename Scalar>
std::vector<TokenId> GreedyDecode(const RewriterModel<Scalar> &model,
                                  const PackedSequence &source, int max_steps);

// Decodes several sources in lock-step through the padded batch path.
template <typename Scalar>
std::vector<std::vector<TokenId>> GreedyDecodeBatch(
    const RewriterModel<Scalar> &model, const std::vector<PackedSequence> &sources,
    int max_steps);

extern template class RewriterModel<float>;
extern template class RewriterModel<double>;

}  // namespace srlrw

#endif  // SRLRW_MODEL_HPP_
