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

#ifndef SRLRW_SEQUENCE_BUILDER_HPP_
#define SRLRW_SEQUENCE_BUILDER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "srlrw/core_types.hpp"
#include "srlrw/vocabulary.hpp"

namespace srlrw {

enum class SegmentType : std::uint8_t { kA = 0, kB = 1, kSrl = 2 };
inline constexpr int kNumSegments = 3;

std::string_view SegmentName(SegmentType s);

// Which part of the packed input a token belongs to. Triple regions carry the
// index of the triple in linearized order, context regions the turn index.
struct RegionTag {
  enum class Kind : std::uint8_t { kTriple = 0, kContext = 1, kRewrite = 2 };
  Kind kind = Kind::kContext;
  int index = 0;

  bool operator==(const RegionTag &) const = default;
};

std::string FormatRegion(const RegionTag &tag);

struct PackedSequence {
  std::vector<TokenId> token_ids;
  std::vector<SegmentType> segment_ids;
  std::vector<int> position_ids;
  std::vector<RegionTag> regions;
  int len_z = 0;
  int len_c = 0;
  int len_r = 0;

  int size() const { return static_cast<int>(token_ids.size()); }
};

struct LinearizedTriples {
  TokenList tokens;
  std::vector<int> triple_index;  // per token, index in the shuffled order
  std::vector<int> order;         // order[k] = position of triple k in input
};

// Renders each triple as predicate ++ <ROLE> ++ argument, triples in a seeded
// uniformly random order.
LinearizedTriples LinearizeTriples(const std::vector<PATriple> &triples,
                                   const DialogueSession &session,
                                   std::uint64_t seed);

// E_SRL on triple tokens; context tokens get E_A when spoken by the speaker of
// the last utterance, E_B otherwise; the rewrite region is always E_A.
std::vector<SegmentType> AssignSegments(const std::vector<RegionTag> &regions,
                                        const DialogueSession &session);

// Positions restart at 0 at the start of every triple, utterance and the
// rewrite region.
std::vector<int> AssignPositions(const std::vector<RegionTag> &regions);

struct PackOptions {
  std::uint64_t seed = 0;
  bool include_reference = true;
  int max_length = 0;  // 0 = unlimited; longer inputs are rejected
};

// Layout: linearized z ++ (u_i ++ [EOS])_i ++ ([BOS] ++ r ++ [EOS]).
PackedSequence Pack(const RewriteExample &example,
                    const std::vector<PATriple> &triples, const Vocabulary &vocab,
                    const PackOptions &options);

// Starts the rewrite region for decoding ([BOS] only).
void BeginRewrite(PackedSequence &seq);
void AppendRewriteToken(PackedSequence &seq, TokenId id);

// Multi-line dump of the parallel arrays, one labelled line each.
std::string DumpPacked(const PackedSequence &seq, const Vocabulary &vocab);

}  // namespace srlrw

#endif  // SRLRW_SEQUENCE_BUILDER_HPP_
