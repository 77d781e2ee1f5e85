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

#ifndef SRLRW_TESTS_FIXTURES_HPP_
#define SRLRW_TESTS_FIXTURES_HPP_

#include <random>
#include <vector>

#include "srlrw/core_types.hpp"
#include "srlrw/sequence_builder.hpp"
#include "srlrw/tokenize.hpp"

namespace srlrw::testing {

// 需要粤语 / 粤语是普通话吗 / 不算吧  ->  粤语不算普通话吧
inline RewriteExample CantoneseExample() {
  RewriteExample ex;
  auto utt = [&](const char *text, Speaker s) {
    ex.session.utterances.push_back(
        {SplitCharacters(text), s, static_cast<int>(ex.session.utterances.size())});
  };
  utt("需要粤语", Speaker::kA);
  utt("粤语是普通话吗", Speaker::kB);
  utt("不算吧", Speaker::kA);
  const Span xuyao{0, 0, 2}, yueyu0{0, 2, 4};
  const Span yueyu1{1, 0, 2}, shi{1, 2, 3}, putonghua{1, 3, 6};
  const Span busuan{2, 0, 2};
  ex.triples = {
      {xuyao, SemanticRole::kArg1, yueyu0},
      {shi, SemanticRole::kArg0, yueyu1},
      {shi, SemanticRole::kArg1, putonghua},
      {busuan, SemanticRole::kArg0, yueyu1},
      {busuan, SemanticRole::kArg1, putonghua},
  };
  ex.reference = SplitCharacters("粤语不算普通话吧");
  return ex;
}

// Random [z][c][r] region layout.
inline std::vector<RegionTag> RandomLayout(std::mt19937_64 &rng, int max_triples = 4,
                                           int max_utts = 3, int max_len = 4,
                                           int max_r = 5) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<RegionTag> tags;
  const int n_triples = uni(0, max_triples);
  for (int k = 0; k < n_triples; ++k) {
    for (int i = uni(1, max_len); i > 0; --i) tags.push_back({RegionTag::Kind::kTriple, k});
  }
  const int n_utts = uni(1, max_utts);
  for (int u = 0; u < n_utts; ++u) {
    for (int i = uni(1, max_len); i > 0; --i) tags.push_back({RegionTag::Kind::kContext, u});
  }
  for (int i = uni(0, max_r); i > 0; --i) tags.push_back({RegionTag::Kind::kRewrite, 0});
  return tags;
}

}  // namespace srlrw::testing

#endif  // SRLRW_TESTS_FIXTURES_HPP_
