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

#include "srlrw/sequence_builder.hpp"

#include <numeric>
#include <random>

namespace srlrw {

std::string_view SegmentName(SegmentType s) {
  switch (s) {
    case SegmentType::kA: return "E_A";
    case SegmentType::kB: return "E_B";
    case SegmentType::kSrl: return "E_SRL";
  }
  return "?";
}

std::string FormatRegion(const RegionTag &tag) {
  switch (tag.kind) {
    case RegionTag::Kind::kTriple: return "z" + std::to_string(tag.index);
    case RegionTag::Kind::kContext: return "c" + std::to_string(tag.index);
    case RegionTag::Kind::kRewrite: return "r";
  }
  return "?";
}

LinearizedTriples LinearizeTriples(const std::vector<PATriple> &triples,
                                   const DialogueSession &session,
                                   std::uint64_t seed) {
  LinearizedTriples out;
  out.order.resize(triples.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = triples.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(out.order[i - 1], out.order[pick(rng)]);
  }
  for (std::size_t k = 0; k < out.order.size(); ++k) {
    const PATriple &t = triples[out.order[k]];
    auto emit = [&](const std::string &tok) {
      out.tokens.push_back(tok);
      out.triple_index.push_back(static_cast<int>(k));
    };
    for (const auto &tok : SliceSpan(session, t.predicate)) emit(tok);
    emit(RoleToken(t.role));
    for (const auto &tok : SliceSpan(session, t.argument)) emit(tok);
  }
  return out;
}

std::vector<SegmentType> AssignSegments(const std::vector<RegionTag> &regions,
                                        const DialogueSession &session) {
  std::vector<SegmentType> out;
  out.reserve(regions.size());
  const Speaker target = session.target_speaker();
  for (const auto &tag : regions) {
    switch (tag.kind) {
      case RegionTag::Kind::kTriple:
        out.push_back(SegmentType::kSrl);
        break;
      case RegionTag::Kind::kContext:
        out.push_back(session.utterances.at(tag.index).speaker == target
                          ? SegmentType::kA
                          : SegmentType::kB);
        break;
      case RegionTag::Kind::kRewrite:
        out.push_back(SegmentType::kA);
        break;
    }
  }
  return out;
}

std::vector<int> AssignPositions(const std::vector<RegionTag> &regions) {
  std::vector<int> out(regions.size(), 0);
  for (std::size_t i = 1; i < regions.size(); ++i) {
    out[i] = regions[i] == regions[i - 1] ? out[i - 1] + 1 : 0;
  }
  return out;
}

PackedSequence Pack(const RewriteExample &example,
                    const std::vector<PATriple> &triples, const Vocabulary &vocab,
                    const PackOptions &options) {
  vocab.CheckReserved();
  if (options.include_reference && example.reference.empty()) {
    throw Error(ErrorCode::kNoReference, "packing a rewrite region needs a reference");
  }
  PackedSequence seq;
  const auto lin = LinearizeTriples(triples, example.session, options.seed);
  for (std::size_t i = 0; i < lin.tokens.size(); ++i) {
    seq.token_ids.push_back(vocab.id(lin.tokens[i]));
    seq.regions.push_back({RegionTag::Kind::kTriple, lin.triple_index[i]});
  }
  seq.len_z = seq.size();

  for (const auto &u : example.session.utterances) {
    const RegionTag tag{RegionTag::Kind::kContext, u.turn_index};
    for (const auto &tok : u.tokens) {
      seq.token_ids.push_back(vocab.id(tok));
      seq.regions.push_back(tag);
    }
    seq.token_ids.push_back(kEosId);
    seq.regions.push_back(tag);
  }
  seq.len_c = seq.size() - seq.len_z;

  if (options.include_reference) {
    const RegionTag tag{RegionTag::Kind::kRewrite, 0};
    seq.token_ids.push_back(kBosId);
    seq.regions.push_back(tag);
    for (const auto &tok : example.reference) {
      seq.token_ids.push_back(vocab.id(tok));
      seq.regions.push_back(tag);
    }
    seq.token_ids.push_back(kEosId);
    seq.regions.push_back(tag);
  }
  seq.len_r = seq.size() - seq.len_z - seq.len_c;

  if (options.max_length > 0 && seq.size() > options.max_length) {
    throw Error(ErrorCode::kSequenceTooLong,
                "packed length " + std::to_string(seq.size()) + " exceeds " +
                    std::to_string(options.max_length));
  }
  seq.segment_ids = AssignSegments(seq.regions, example.session);
  seq.position_ids = AssignPositions(seq.regions);
  return seq;
}

void BeginRewrite(PackedSequence &seq) { AppendRewriteToken(seq, kBosId); }

void AppendRewriteToken(PackedSequence &seq, TokenId id) {
  seq.position_ids.push_back(seq.len_r);
  seq.token_ids.push_back(id);
  seq.segment_ids.push_back(SegmentType::kA);
  seq.regions.push_back({RegionTag::Kind::kRewrite, 0});
  ++seq.len_r;
}

std::string DumpPacked(const PackedSequence &seq, const Vocabulary &vocab) {
  std::string out = "tokens:";
  for (TokenId id : seq.token_ids) out += " " + vocab.token(id);
  out += "\nids:";
  for (TokenId id : seq.token_ids) out += " " + std::to_string(id);
  out += "\nsegments:";
  for (auto s : seq.segment_ids) out += " " + std::string(SegmentName(s));
  out += "\npositions:";
  for (int p : seq.position_ids) out += " " + std::to_string(p);
  out += "\nregions:";
  for (const auto &r : seq.regions) out += " " + FormatRegion(r);
  out += "\nlengths: " + std::to_string(seq.len_z) + " " + std::to_string(seq.len_c) +
         " " + std::to_string(seq.len_r) + "\n";
  return out;
}

}  // namespace srlrw
