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

#include "srlrw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace srlrw {

namespace {

using NgramCounts = std::map<TokenList, long>;

NgramCounts CountNgrams(const TokenList &tokens, int n) {
  NgramCounts counts;
  for (int i = 0; i + n <= static_cast<int>(tokens.size()); ++i) {
    ++counts[TokenList(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

long ClippedOverlap(const NgramCounts &hyp, const NgramCounts &ref) {
  long overlap = 0;
  for (const auto &[gram, c] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

void CheckCorpora(const Corpus &hyps, const Corpus &refs) {
  if (hyps.empty()) throw Error(ErrorCode::kEmptyCorpus, "no hypotheses");
  if (hyps.size() != refs.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(hyps.size()) + " hypotheses vs " +
                    std::to_string(refs.size()) + " references");
  }
}

double F1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

void BleuStats::Add(const TokenList &hyp, const TokenList &ref) {
  hyp_length += static_cast<long>(hyp.size());
  ref_length += static_cast<long>(ref.size());
  for (int k = 1; k <= kMaxOrder; ++k) {
    const auto h = CountNgrams(hyp, k);
    matches[k - 1] += ClippedOverlap(h, CountNgrams(ref, k));
    totals[k - 1] += std::max(0L, static_cast<long>(hyp.size()) - k + 1);
  }
}

void BleuStats::Merge(const BleuStats &other) {
  for (int k = 0; k < kMaxOrder; ++k) {
    matches[k] += other.matches[k];
    totals[k] += other.totals[k];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
}

double BleuStats::Score(int n, bool add_one_smoothing) const {
  if (n < 1 || n > kMaxOrder) {
    throw Error(ErrorCode::kConfigInvalid, "BLEU order must be 1..4");
  }
  if (hyp_length == 0) return 0.0;
  double log_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    double m = static_cast<double>(matches[k]);
    double t = static_cast<double>(totals[k]);
    if (add_one_smoothing && k > 0) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0 || t == 0.0) return 0.0;
    log_sum += std::log(m / t);
  }
  const double bp =
      std::exp(std::min(0.0, 1.0 - static_cast<double>(ref_length) / hyp_length));
  return bp * std::exp(log_sum / n);
}

double Bleu(const Corpus &hyps, const Corpus &refs, int n, bool add_one_smoothing) {
  CheckCorpora(hyps, refs);
  BleuStats stats;
  for (std::size_t i = 0; i < hyps.size(); ++i) stats.Add(hyps[i], refs[i]);
  return stats.Score(n, add_one_smoothing);
}

double RougeN(const Corpus &hyps, const Corpus &refs, int n) {
  CheckCorpora(hyps, refs);
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto h = CountNgrams(hyps[i], n);
    const auto r = CountNgrams(refs[i], n);
    long hn = 0, rn = 0;
    for (const auto &[g, c] : h) hn += c;
    for (const auto &[g, c] : r) rn += c;
    if (hn == 0 || rn == 0) {
      sum += (hn == 0 && rn == 0) ? 1.0 : 0.0;
      continue;
    }
    const double overlap = static_cast<double>(ClippedOverlap(h, r));
    sum += F1(overlap / hn, overlap / rn);
  }
  return sum / static_cast<double>(hyps.size());
}

int LcsLength(const TokenList &a, const TokenList &b) {
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double RougeL(const Corpus &hyps, const Corpus &refs) {
  CheckCorpora(hyps, refs);
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto &h = hyps[i];
    const auto &r = refs[i];
    if (h.empty() || r.empty()) {
      sum += (h.empty() && r.empty()) ? 1.0 : 0.0;
      continue;
    }
    const double lcs = LcsLength(h, r);
    sum += F1(lcs / h.size(), lcs / r.size());
  }
  return sum / static_cast<double>(hyps.size());
}

TokenList StripReserved(const TokenList &tokens) {
  TokenList out;
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [](const Token &t) { return !IsReservedToken(t); });
  return out;
}

long ExactMatchCount(const Corpus &hyps, const Corpus &refs) {
  CheckCorpora(hyps, refs);
  long n = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (StripReserved(hyps[i]) == StripReserved(refs[i])) ++n;
  }
  return n;
}

double ExactMatch(const Corpus &hyps, const Corpus &refs) {
  return static_cast<double>(ExactMatchCount(hyps, refs)) / static_cast<double>(hyps.size());
}

EvalReport Evaluate(const Corpus &hyps, const Corpus &refs, bool add_one_smoothing) {
  CheckCorpora(hyps, refs);
  EvalReport r;
  BleuStats stats;
  for (std::size_t i = 0; i < hyps.size(); ++i) stats.Add(hyps[i], refs[i]);
  r.bleu1 = stats.Score(1, add_one_smoothing);
  r.bleu2 = stats.Score(2, add_one_smoothing);
  r.bleu4 = stats.Score(4, add_one_smoothing);
  r.rouge1 = RougeN(hyps, refs, 1);
  r.rouge2 = RougeN(hyps, refs, 2);
  r.rougeL = RougeL(hyps, refs);
  r.n_examples = static_cast<long>(hyps.size());
  r.em_matches = ExactMatchCount(hyps, refs);
  r.em = static_cast<double>(r.em_matches) / static_cast<double>(r.n_examples);
  return r;
}

std::string EvalHeader() {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%7s %7s %7s %7s %7s %7s %7s", "B1", "B2", "B4", "R1",
                "R2", "RL", "EM");
  return buf;
}

std::string FormatEvalRow(const EvalReport &r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%7.2f %7.2f %7.2f %7.2f %7.2f %7.2f %7.2f", 100 * r.bleu1,
                100 * r.bleu2, 100 * r.bleu4, 100 * r.rouge1, 100 * r.rouge2,
                100 * r.rougeL, 100 * r.em);
  return buf;
}

}  // namespace srlrw
