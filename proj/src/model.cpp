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

#include "srlrw/model.hpp"

#include <algorithm>
#include <cmath>

namespace srlrw {

void ModelConfig::Validate() const {
  auto fail = [](const std::string &what) { throw Error(ErrorCode::kConfigInvalid, what); };
  if (d_model <= 0 || n_heads <= 0 || n_layers < 0 || d_ff <= 0) fail("non-positive size");
  if (d_model % n_heads != 0) fail("d_model must be divisible by n_heads");
  if (vocab_size <= kNumReserved) fail("vocab_size too small");
  if (max_position <= 0) fail("max_position must be positive");
  if (dropout < 0.0 || dropout >= 1.0) fail("dropout must be in [0, 1)");
}

template <typename Scalar>
Eigen::Index ParameterSet<Scalar>::count() const {
  Eigen::Index n = 0;
  for (const auto &t : tensors) n += t.size();
  return n;
}

template <typename Scalar>
void ParameterSet<Scalar>::SetZero() {
  for (auto &t : tensors) t.setZero();
}

template <typename Scalar>
Scalar ParameterSet<Scalar>::SquaredNorm() const {
  Scalar s = 0;
  for (const auto &t : tensors) s += t.squaredNorm();
  return s;
}

template <typename Scalar>
void ParameterSet<Scalar>::Scale(Scalar s) {
  for (auto &t : tensors) t *= s;
}

template struct ParameterSet<float>;
template struct ParameterSet<double>;

template <typename Scalar>
using Mat = MatrixX<Scalar>;

template <typename Scalar>
struct LayerNormCache {
  Mat<Scalar> xhat;
  VectorX<Scalar> rstd;
};

namespace {

// tanh approximation of GELU and its derivative
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

template <typename Scalar>
Scalar Gelu(Scalar x) {
  const Scalar t = std::tanh(Scalar(kGeluC) * (x + Scalar(kGeluA) * x * x * x));
  return Scalar(0.5) * x * (Scalar(1) + t);
}

template <typename Scalar>
Scalar GeluGrad(Scalar x) {
  const Scalar u = Scalar(kGeluC) * (x + Scalar(kGeluA) * x * x * x);
  const Scalar t = std::tanh(u);
  const Scalar du = Scalar(kGeluC) * (Scalar(1) + Scalar(3 * kGeluA) * x * x);
  return Scalar(0.5) * (Scalar(1) + t) + Scalar(0.5) * x * (Scalar(1) - t * t) * du;
}

template <typename Scalar>
Mat<Scalar> LayerNormForward(const Mat<Scalar> &x, const Mat<Scalar> &gain,
                                const Mat<Scalar> &bias, Scalar eps,
                                LayerNormCache<Scalar> *cache) {
  const Eigen::Index d = x.cols();
  VectorX<Scalar> mean = x.rowwise().sum() / Scalar(d);
  Mat<Scalar> xc = x.colwise() - mean;
  VectorX<Scalar> var = xc.rowwise().squaredNorm() / Scalar(d);
  VectorX<Scalar> rstd = (var.array() + eps).rsqrt().matrix();
  Mat<Scalar> xhat = rstd.asDiagonal() * xc;
  Mat<Scalar> y = (xhat.array().rowwise() * gain.row(0).array()).matrix();
  y.rowwise() += bias.row(0);
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->rstd = std::move(rstd);
  }
  return y;
}

template <typename Scalar>
Mat<Scalar> LayerNormBackward(const Mat<Scalar> &dy, const Mat<Scalar> &gain,
                                 const LayerNormCache<Scalar> &cache,
                                 Mat<Scalar> &dgain, Mat<Scalar> &dbias) {
  const Eigen::Index d = dy.cols();
  dgain.row(0) += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  dbias.row(0) += dy.colwise().sum();
  Mat<Scalar> dxhat = (dy.array().rowwise() * gain.row(0).array()).matrix();
  VectorX<Scalar> m1 = dxhat.rowwise().sum() / Scalar(d);
  VectorX<Scalar> m2 = (dxhat.array() * cache.xhat.array()).rowwise().sum().matrix() /
                       Scalar(d);
  Mat<Scalar> dx = dxhat.colwise() - m1;
  dx -= m2.asDiagonal() * cache.xhat;
  return cache.rstd.asDiagonal() * dx;
}

template <typename Scalar>
void SoftmaxRowsInPlace(Mat<Scalar> &m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    const Scalar mx = row.maxCoeff();
    row = (row.array() - mx).exp().matrix();
    row /= row.sum();
  }
}

}  // namespace

template <typename Scalar>
struct LayerCache {
  Mat<Scalar> x_in;
  LayerNormCache<Scalar> ln1;
  Mat<Scalar> a;
  Mat<Scalar> q, k, v;
  std::vector<Mat<Scalar>> probs;  // [b * heads + h]
  Mat<Scalar> o;
  Mat<Scalar> att_drop;
  Mat<Scalar> x1;
  LayerNormCache<Scalar> ln2;
  Mat<Scalar> c;
  Mat<Scalar> h;
  Mat<Scalar> g;
  Mat<Scalar> ffn_drop;
};

template <typename Scalar>
struct ForwardCache {
  int batch = 0;
  int len = 0;
  std::vector<int> lens;
  std::vector<TokenId> tokens;
  std::vector<int> segments;
  std::vector<int> positions;
  std::vector<Mat<Scalar>> bias;
  std::vector<LayerCache<Scalar>> layers;
  LayerNormCache<Scalar> lnf;
  Mat<Scalar> y;
};

template <typename Scalar>
RewriterModel<Scalar>::RewriterModel(const ModelConfig &config, std::uint64_t seed)
    : config_(config), layout_(config_), dropout_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
  config_.Validate();
  const int d = config_.d_model, V = config_.vocab_size, F = config_.d_ff;
  std::mt19937_64 rng(seed);

  auto uniform = [&](int rows, int cols, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Mat<Scalar> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Scalar(dist(rng));
    return m;
  };
  auto add = [&](std::string name, Mat<Scalar> m) {
    params_.names.push_back(std::move(name));
    params_.tensors.push_back(std::move(m));
  };
  const double emb_bound = 1.0 / std::sqrt(static_cast<double>(d));

  add("word_embedding", uniform(V, d, emb_bound));
  add("segment_embedding", uniform(kNumSegments, d, emb_bound));
  add("position_embedding", uniform(config_.max_position, d, emb_bound));
  for (int l = 0; l < config_.n_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    for (const char *proj : {"query", "key", "value", "output"}) {
      add(p + "attention." + proj + ".weight", uniform(d, d, 1.0 / std::sqrt(double(d))));
      add(p + "attention." + proj + ".bias", Mat<Scalar>::Zero(1, d));
    }
    add(p + "norm1.gain", Mat<Scalar>::Ones(1, d));
    add(p + "norm1.bias", Mat<Scalar>::Zero(1, d));
    add(p + "norm2.gain", Mat<Scalar>::Ones(1, d));
    add(p + "norm2.bias", Mat<Scalar>::Zero(1, d));
    add(p + "ffn.in.weight", uniform(d, F, 1.0 / std::sqrt(double(d))));
    add(p + "ffn.in.bias", Mat<Scalar>::Zero(1, F));
    add(p + "ffn.out.weight", uniform(F, d, 1.0 / std::sqrt(double(F))));
    add(p + "ffn.out.bias", Mat<Scalar>::Zero(1, d));
  }
  add("final_norm.gain", Mat<Scalar>::Ones(1, d));
  add("final_norm.bias", Mat<Scalar>::Zero(1, d));
  if (!config_.tie_embeddings) {
    add("output.weight", uniform(d, V, 1.0 / std::sqrt(double(d))));
  }
  add("output.bias", Mat<Scalar>::Zero(1, V));

  grads_ = params_;
  grads_.SetZero();
}

template <typename Scalar>
Mat<Scalar> RewriterModel<Scalar>::OutputWeight() const {
  if (config_.tie_embeddings) {
    return params_.tensors[ParameterLayout::kWordEmb].transpose();
  }
  return params_.tensors[layout_.out_weight()];
}

template <typename Scalar>
Mat<Scalar> RewriterModel<Scalar>::Embed(const PackedSequence &seq) const {
  const auto &word = params_.tensors[ParameterLayout::kWordEmb];
  const auto &segment = params_.tensors[ParameterLayout::kSegmentEmb];
  const auto &position = params_.tensors[ParameterLayout::kPositionEmb];
  Mat<Scalar> x(seq.size(), config_.d_model);
  for (int i = 0; i < seq.size(); ++i) {
    const TokenId tok = seq.token_ids[i];
    const int seg = static_cast<int>(seq.segment_ids[i]);
    const int pos = seq.position_ids[i];
    if (tok < 0 || tok >= config_.vocab_size || pos < 0 || pos >= config_.max_position) {
      throw Error(ErrorCode::kIdOutOfRange,
                  "token " + std::to_string(tok) + " / position " + std::to_string(pos) +
                      " at index " + std::to_string(i));
    }
    x.row(i) = word.row(tok) + segment.row(seg) + position.row(pos);
  }
  return x;
}

template <typename Scalar>
VisibilityMatrix RewriterModel<Scalar>::MaskFor(const PackedSequence &seq) const {
  return BuildMask(seq.regions, config_.mask_variant, config_.mask_options);
}

template <typename Scalar>
void RewriterModel<Scalar>::Run(const std::vector<const PackedSequence *> &seqs,
                                const std::vector<VisibilityMatrix> &masks,
                                bool training, ForwardCache<Scalar> &cache) const {
  if (seqs.empty() || seqs.size() != masks.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one mask per sequence required");
  }
  const int B = static_cast<int>(seqs.size());
  int L = 0;
  for (int b = 0; b < B; ++b) {
    const int n = seqs[b]->size();
    if (n == 0 || masks[b].rows() != n || masks[b].cols() != n) {
      throw Error(ErrorCode::kShapeMismatch,
                  "mask side " + std::to_string(masks[b].rows()) + " vs sequence length " +
                      std::to_string(n));
    }
    L = std::max(L, n);
  }
  const int d = config_.d_model, H = config_.n_heads, dk = d / H;
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(dk));
  const Scalar neg = kMaskNegative<Scalar>;

  cache.batch = B;
  cache.len = L;
  cache.lens.assign(B, 0);
  cache.tokens.assign(B * L, kPadId);
  cache.segments.assign(B * L, 0);
  cache.positions.assign(B * L, 0);
  cache.bias.assign(B, Mat<Scalar>());

  Mat<Scalar> x = Mat<Scalar>::Zero(B * L, d);
  const auto &word = params_.tensors[ParameterLayout::kWordEmb];
  const auto &segment = params_.tensors[ParameterLayout::kSegmentEmb];
  const auto &position = params_.tensors[ParameterLayout::kPositionEmb];
  for (int b = 0; b < B; ++b) {
    const auto &seq = *seqs[b];
    const int n = seq.size();
    cache.lens[b] = n;
    x.middleRows(b * L, n) = Embed(seq);
    for (int i = 0; i < n; ++i) {
      cache.tokens[b * L + i] = seq.token_ids[i];
      cache.segments[b * L + i] = static_cast<int>(seq.segment_ids[i]);
      cache.positions[b * L + i] = seq.position_ids[i];
    }
    for (int i = n; i < L; ++i) {
      x.row(b * L + i) = word.row(kPadId) + segment.row(0) + position.row(0);
    }
    Mat<Scalar> bias = Mat<Scalar>::Constant(L, L, neg);
    bias.topLeftCorner(n, n) = MaskToAdditive<Scalar>(masks[b], neg);
    for (int i = n; i < L; ++i) bias(i, i) = Scalar(0);
    cache.bias[b] = std::move(bias);
  }

  const double keep = 1.0 - config_.dropout;
  const bool use_dropout = training && config_.dropout > 0.0;
  auto dropout_mask = [&](Eigen::Index rows, Eigen::Index cols) {
    std::bernoulli_distribution coin(keep);
    Mat<Scalar> m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = coin(dropout_rng_) ? Scalar(1.0 / keep) : Scalar(0);
    }
    return m;
  };

  const Scalar eps = Scalar(config_.layer_norm_eps);
  cache.layers.assign(config_.n_layers, LayerCache<Scalar>());
  for (int l = 0; l < config_.n_layers; ++l) {
    auto P = [&](ParameterLayout::LayerSlot s) -> const Mat<Scalar> & {
      return params_.tensors[layout_.layer(l, s)];
    };
    auto &lc = cache.layers[l];
    lc.x_in = x;
    lc.a = LayerNormForward<Scalar>(x, P(ParameterLayout::kLn1Gain),
                                    P(ParameterLayout::kLn1Bias), eps, &lc.ln1);
    lc.q = lc.a * P(ParameterLayout::kWq);
    lc.q.rowwise() += P(ParameterLayout::kBq).row(0);
    lc.k = lc.a * P(ParameterLayout::kWk);
    lc.k.rowwise() += P(ParameterLayout::kBk).row(0);
    lc.v = lc.a * P(ParameterLayout::kWv);
    lc.v.rowwise() += P(ParameterLayout::kBv).row(0);

    lc.o.resize(B * L, d);
    lc.probs.assign(B * H, Mat<Scalar>());
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        Mat<Scalar> s = lc.q.block(b * L, h * dk, L, dk) *
                           lc.k.block(b * L, h * dk, L, dk).transpose();
        s *= scale;
        s += cache.bias[b];
        SoftmaxRowsInPlace(s);
        lc.o.block(b * L, h * dk, L, dk) = s * lc.v.block(b * L, h * dk, L, dk);
        lc.probs[b * H + h] = std::move(s);
      }
    }
    Mat<Scalar> att = lc.o * P(ParameterLayout::kWo);
    att.rowwise() += P(ParameterLayout::kBo).row(0);
    if (use_dropout) {
      lc.att_drop = dropout_mask(att.rows(), att.cols());
      att = att.cwiseProduct(lc.att_drop);
    }
    lc.x1 = x + att;

    lc.c = LayerNormForward<Scalar>(lc.x1, P(ParameterLayout::kLn2Gain),
                                    P(ParameterLayout::kLn2Bias), eps, &lc.ln2);
    lc.h = lc.c * P(ParameterLayout::kW1);
    lc.h.rowwise() += P(ParameterLayout::kB1).row(0);
    lc.g = lc.h.unaryExpr([](Scalar v) { return Gelu(v); });
    Mat<Scalar> f = lc.g * P(ParameterLayout::kW2);
    f.rowwise() += P(ParameterLayout::kB2).row(0);
    if (use_dropout) {
      lc.ffn_drop = dropout_mask(f.rows(), f.cols());
      f = f.cwiseProduct(lc.ffn_drop);
    }
    x = lc.x1 + f;
  }
  cache.y = LayerNormForward<Scalar>(x, params_.tensors[layout_.final_gain()],
                                     params_.tensors[layout_.final_bias()], eps,
                                     &cache.lnf);
}

template <typename Scalar>
Mat<Scalar> RewriterModel<Scalar>::Forward(const PackedSequence &seq,
                                              const VisibilityMatrix &mask) const {
  return ForwardBatch({&seq}, {mask}).front();
}

template <typename Scalar>
std::vector<Mat<Scalar>> RewriterModel<Scalar>::ForwardBatch(
    const std::vector<const PackedSequence *> &seqs,
    const std::vector<VisibilityMatrix> &masks) const {
  ForwardCache<Scalar> cache;
  Run(seqs, masks, false, cache);
  const Mat<Scalar> w = OutputWeight();
  const auto &bias = params_.tensors[layout_.out_bias()];
  std::vector<Mat<Scalar>> out;
  for (int b = 0; b < cache.batch; ++b) {
    Mat<Scalar> logits = cache.y.middleRows(b * cache.len, cache.lens[b]) * w;
    logits.rowwise() += bias.row(0);
    SoftmaxRowsInPlace(logits);
    out.push_back(std::move(logits));
  }
  return out;
}

template <typename Scalar>
std::vector<VectorX<Scalar>> RewriterModel<Scalar>::ForwardLast(
    const std::vector<const PackedSequence *> &seqs,
    const std::vector<VisibilityMatrix> &masks) const {
  ForwardCache<Scalar> cache;
  Run(seqs, masks, false, cache);
  Mat<Scalar> last(cache.batch, config_.d_model);
  for (int b = 0; b < cache.batch; ++b) {
    last.row(b) = cache.y.row(b * cache.len + cache.lens[b] - 1);
  }
  Mat<Scalar> logits = last * OutputWeight();
  logits.rowwise() += params_.tensors[layout_.out_bias()].row(0);
  SoftmaxRowsInPlace(logits);
  std::vector<VectorX<Scalar>> out;
  for (int b = 0; b < cache.batch; ++b) out.push_back(logits.row(b).transpose());
  return out;
}

std::vector<std::pair<int, TokenId>> LossTargets(const PackedSequence &seq) {
  std::vector<std::pair<int, TokenId>> out;
  const int start = seq.len_z + seq.len_c;
  for (int i = start; i + 1 < seq.size(); ++i) out.emplace_back(i, seq.token_ids[i + 1]);
  return out;
}

template <typename Scalar>
Scalar NllLoss(const MatrixX<Scalar> &distributions, const PackedSequence &seq) {
  if (seq.len_r < 2) throw Error(ErrorCode::kNoReference, "no rewrite targets");
  if (distributions.rows() != seq.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one distribution per position required");
  }
  Scalar loss = 0;
  for (const auto &[row, target] : LossTargets(seq)) {
    loss -= std::log(distributions(row, target));
  }
  return loss;
}

template float NllLoss<float>(const MatrixX<float> &, const PackedSequence &);
template double NllLoss<double>(const MatrixX<double> &, const PackedSequence &);

template <typename Scalar>
std::vector<Scalar> RewriterModel<Scalar>::Loss(
    const std::vector<const PackedSequence *> &seqs,
    const std::vector<VisibilityMatrix> &masks) const {
  ForwardCache<Scalar> cache;
  Run(seqs, masks, false, cache);
  const Mat<Scalar> w = OutputWeight();
  const auto &bias = params_.tensors[layout_.out_bias()];
  std::vector<Scalar> losses;
  for (int b = 0; b < cache.batch; ++b) {
    const auto targets = LossTargets(*seqs[b]);
    if (targets.empty()) throw Error(ErrorCode::kNoReference, "no rewrite targets");
    Mat<Scalar> rows(targets.size(), config_.d_model);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      rows.row(t) = cache.y.row(b * cache.len + targets[t].first);
    }
    Mat<Scalar> logits = rows * w;
    logits.rowwise() += bias.row(0);
    SoftmaxRowsInPlace(logits);
    Scalar loss = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      loss -= std::log(logits(t, targets[t].second));
    }
    losses.push_back(loss);
  }
  return losses;
}

template <typename Scalar>
std::vector<Scalar> RewriterModel<Scalar>::LossAndGradients(
    const std::vector<const PackedSequence *> &seqs,
    const std::vector<VisibilityMatrix> &masks, bool training) {
  ForwardCache<Scalar> cache;
  Run(seqs, masks, training, cache);
  grads_.SetZero();

  const int B = cache.batch, L = cache.len, d = config_.d_model;
  const int H = config_.n_heads, dk = d / H;
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(dk));
  const Scalar inv_batch = Scalar(1) / Scalar(B);

  // Gather the rows that predict a target.
  std::vector<int> rows;
  std::vector<TokenId> targets;
  std::vector<int> owner;
  for (int b = 0; b < B; ++b) {
    const auto t = LossTargets(*seqs[b]);
    if (t.empty()) throw Error(ErrorCode::kNoReference, "no rewrite targets");
    for (const auto &[row, target] : t) {
      rows.push_back(b * L + row);
      targets.push_back(target);
      owner.push_back(b);
    }
  }
  const int T = static_cast<int>(rows.size());
  Mat<Scalar> ysel(T, d);
  for (int t = 0; t < T; ++t) ysel.row(t) = cache.y.row(rows[t]);
  const Mat<Scalar> w = OutputWeight();
  Mat<Scalar> probs = ysel * w;
  probs.rowwise() += params_.tensors[layout_.out_bias()].row(0);
  SoftmaxRowsInPlace(probs);

  std::vector<Scalar> losses(B, Scalar(0));
  Mat<Scalar> dlogits = probs;
  for (int t = 0; t < T; ++t) {
    losses[owner[t]] -= std::log(probs(t, targets[t]));
    dlogits(t, targets[t]) -= Scalar(1);
  }
  for (Scalar l : losses) {
    if (!std::isfinite(static_cast<double>(l))) {
      throw Error(ErrorCode::kDivergence, "non-finite loss");
    }
  }
  dlogits *= inv_batch;

  auto G = [&](int idx) -> Mat<Scalar> & { return grads_.tensors[idx]; };
  if (config_.tie_embeddings) {
    G(ParameterLayout::kWordEmb) += dlogits.transpose() * ysel;
  } else {
    G(layout_.out_weight()) += ysel.transpose() * dlogits;
  }
  G(layout_.out_bias()).row(0) += dlogits.colwise().sum();
  const Mat<Scalar> dysel = dlogits * w.transpose();
  Mat<Scalar> dy = Mat<Scalar>::Zero(B * L, d);
  for (int t = 0; t < T; ++t) dy.row(rows[t]) += dysel.row(t);

  Mat<Scalar> dx = LayerNormBackward<Scalar>(
      dy, params_.tensors[layout_.final_gain()], cache.lnf, G(layout_.final_gain()),
      G(layout_.final_bias()));

  for (int l = config_.n_layers - 1; l >= 0; --l) {
    auto P = [&](ParameterLayout::LayerSlot s) -> const Mat<Scalar> & {
      return params_.tensors[layout_.layer(l, s)];
    };
    auto DP = [&](ParameterLayout::LayerSlot s) -> Mat<Scalar> & {
      return grads_.tensors[layout_.layer(l, s)];
    };
    const auto &lc = cache.layers[l];

    // Feed-forward branch.
    Mat<Scalar> df = dx;
    if (lc.ffn_drop.size()) df = df.cwiseProduct(lc.ffn_drop);
    DP(ParameterLayout::kW2) += lc.g.transpose() * df;
    DP(ParameterLayout::kB2).row(0) += df.colwise().sum();
    Mat<Scalar> dh = df * P(ParameterLayout::kW2).transpose();
    dh = dh.cwiseProduct(lc.h.unaryExpr([](Scalar v) { return GeluGrad(v); }));
    DP(ParameterLayout::kW1) += lc.c.transpose() * dh;
    DP(ParameterLayout::kB1).row(0) += dh.colwise().sum();
    const Mat<Scalar> dc = dh * P(ParameterLayout::kW1).transpose();
    Mat<Scalar> dx1 = dx + LayerNormBackward<Scalar>(dc, P(ParameterLayout::kLn2Gain),
                                                        lc.ln2, DP(ParameterLayout::kLn2Gain),
                                                        DP(ParameterLayout::kLn2Bias));

    // Attention branch.
    Mat<Scalar> datt = dx1;
    if (lc.att_drop.size()) datt = datt.cwiseProduct(lc.att_drop);
    DP(ParameterLayout::kWo) += lc.o.transpose() * datt;
    DP(ParameterLayout::kBo).row(0) += datt.colwise().sum();
    const Mat<Scalar> d_o = datt * P(ParameterLayout::kWo).transpose();

    Mat<Scalar> dq(B * L, d), dk_(B * L, d), dv(B * L, d);
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        const auto &p = lc.probs[b * H + h];
        const auto dob = d_o.block(b * L, h * dk, L, dk);
        Mat<Scalar> dp = dob * lc.v.block(b * L, h * dk, L, dk).transpose();
        dv.block(b * L, h * dk, L, dk) = p.transpose() * dob;
        VectorX<Scalar> dot = (dp.array() * p.array()).rowwise().sum().matrix();
        Mat<Scalar> ds = (p.array() * (dp.colwise() - dot).array()).matrix();
        ds *= scale;
        dq.block(b * L, h * dk, L, dk) = ds * lc.k.block(b * L, h * dk, L, dk);
        dk_.block(b * L, h * dk, L, dk) = ds.transpose() * lc.q.block(b * L, h * dk, L, dk);
      }
    }
    DP(ParameterLayout::kWq) += lc.a.transpose() * dq;
    DP(ParameterLayout::kBq).row(0) += dq.colwise().sum();
    DP(ParameterLayout::kWk) += lc.a.transpose() * dk_;
    DP(ParameterLayout::kBk).row(0) += dk_.colwise().sum();
    DP(ParameterLayout::kWv) += lc.a.transpose() * dv;
    DP(ParameterLayout::kBv).row(0) += dv.colwise().sum();
    const Mat<Scalar> da = dq * P(ParameterLayout::kWq).transpose() +
                              dk_ * P(ParameterLayout::kWk).transpose() +
                              dv * P(ParameterLayout::kWv).transpose();
    dx = dx1 + LayerNormBackward<Scalar>(da, P(ParameterLayout::kLn1Gain), lc.ln1,
                                         DP(ParameterLayout::kLn1Gain),
                                         DP(ParameterLayout::kLn1Bias));
  }

  auto &dword = G(ParameterLayout::kWordEmb);
  auto &dseg = G(ParameterLayout::kSegmentEmb);
  auto &dpos = G(ParameterLayout::kPositionEmb);
  for (int b = 0; b < B; ++b) {
    for (int i = 0; i < cache.lens[b]; ++i) {
      const int r = b * L + i;
      dword.row(cache.tokens[r]) += dx.row(r);
      dseg.row(cache.segments[r]) += dx.row(r);
      dpos.row(cache.positions[r]) += dx.row(r);
    }
  }
  return losses;
}

TokenId ArgmaxLowest(const Eigen::Ref<const Eigen::VectorXd> &scores) {
  TokenId best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<TokenId>(i);
  }
  return best;
}

template <typename Scalar>
std::vector<std::vector<TokenId>> GreedyDecodeBatch(
    const RewriterModel<Scalar> &model, const std::vector<PackedSequence> &sources,
    int max_steps) {
  std::vector<DecodeState> states(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    states[i].prefix = sources[i];
    BeginRewrite(states[i].prefix);
    states[i].finished = max_steps <= 0;
  }
  while (true) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (!states[i].finished) active.push_back(i);
    }
    if (active.empty()) break;
    std::vector<const PackedSequence *> seqs;
    std::vector<VisibilityMatrix> masks;
    for (std::size_t i : active) {
      seqs.push_back(&states[i].prefix);
      masks.push_back(model.MaskFor(states[i].prefix));
    }
    const auto dists = model.ForwardLast(seqs, masks);
    for (std::size_t a = 0; a < active.size(); ++a) {
      auto &st = states[active[a]];
      const TokenId next = ArgmaxLowest(dists[a].template cast<double>());
      ++st.step;
      if (next == kEosId) {
        st.finished = true;
        continue;
      }
      st.emitted.push_back(next);
      AppendRewriteToken(st.prefix, next);
      if (st.step >= max_steps) st.finished = true;
    }
  }
  std::vector<std::vector<TokenId>> out;
  for (auto &st : states) out.push_back(std::move(st.emitted));
  return out;
}

template <typename Scalar>
std::vector<TokenId> GreedyDecode(const RewriterModel<Scalar> &model,
                                  const PackedSequence &source, int max_steps) {
  return GreedyDecodeBatch(model, {source}, max_steps).front();
}

template class RewriterModel<float>;
template class RewriterModel<double>;

template std::vector<TokenId> GreedyDecode(const RewriterModel<float> &,
                                           const PackedSequence &, int);
template std::vector<TokenId> GreedyDecode(const RewriterModel<double> &,
                                           const PackedSequence &, int);
template std::vector<std::vector<TokenId>> GreedyDecodeBatch(
    const RewriterModel<float> &, const std::vector<PackedSequence> &, int);
template std::vector<std::vector<TokenId>> GreedyDecodeBatch(
    const RewriterModel<double> &, const std::vector<PackedSequence> &, int);

}  // namespace srlrw
