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

#ifndef SRLRW_METRICS_HPP_
#define SRLRW_METRICS_HPP_

#include <string>
#include <vector>

#include "srlrw/core_types.hpp"

namespace srlrw {

using Corpus = std::vector<TokenList>;

// Sufficient statistics of corpus BLEU. Shards can be accumulated separately
// and merged before the score is taken.
struct BleuStats {
  static constexpr int kMaxOrder = 4;
  long matches[kMaxOrder] = {};
  long totals[kMaxOrder] = {};
  long hyp_length = 0;
  long ref_length = 0;

  void Add(const TokenList &hyp, const TokenList &ref);
  void Merge(const BleuStats &other);
  // Geometric mean of the modified precisions 1..n times the brevity penalty
  // exp(min(0, 1 - ref/hyp)). Add-one smoothing applies to orders above 1.
  double Score(int n, bool add_one_smoothing = false) const;
};

double Bleu(const Corpus &hyps, const Corpus &refs, int n, bool add_one_smoothing = false);

// Macro average over pairs of the n-gram overlap F1 (clipped counts). A pair
// with no n-grams on either side scores 1, on exactly one side 0.
double RougeN(const Corpus &hyps, const Corpus &refs, int n);

// Macro average of the LCS-based F1.
double RougeL(const Corpus &hyps, const Corpus &refs);

int LcsLength(const TokenList &a, const TokenList &b);

// Reserved tokens are dropped from both sides before comparing.
TokenList StripReserved(const TokenList &tokens);
long ExactMatchCount(const Corpus &hyps, const Corpus &refs);
double ExactMatch(const Corpus &hyps, const Corpus &refs);

struct EvalReport {
  double bleu1 = 0, bleu2 = 0, bleu4 = 0;
  double rouge1 = 0, rouge2 = 0, rougeL = 0;
  double em = 0;
  long n_examples = 0;
  long em_matches = 0;
};

EvalReport Evaluate(const Corpus &hyps, const Corpus &refs, bool add_one_smoothing = false);

// "B1 B2 B4 R1 R2 RL EM" header and the matching row, x100 with 2 decimals.
std::string EvalHeader();
std::string FormatEvalRow(const EvalReport &r);

}  // namespace srlrw

#endif  // SRLRW_METRICS_HPP_
