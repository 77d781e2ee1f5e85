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

#include "srlrw/vocabulary.hpp"

#include <fstream>

namespace srlrw {

std::string RoleToken(SemanticRole role) {
  return "<" + std::string(RoleName(role)) + ">";
}

Vocabulary::Vocabulary() {
  for (auto t : {kPadToken, kEosToken, kBosToken, kUnkToken}) Add(std::string(t));
  for (SemanticRole r : kAllRoles) Add(RoleToken(r));
}

TokenId Vocabulary::Add(const std::string &token) {
  auto [it, inserted] = index_.emplace(token, static_cast<TokenId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

Vocabulary Vocabulary::Build(const std::vector<RewriteExample> &corpus) {
  Vocabulary v;
  for (const auto &ex : corpus) {
    for (const auto &u : ex.session.utterances) {
      for (const auto &t : u.tokens) v.Add(t);
    }
    for (const auto &t : ex.reference) v.Add(t);
  }
  return v;
}

Vocabulary Vocabulary::FromTokens(const std::vector<std::string> &tokens) {
  Vocabulary v;
  v.tokens_.clear();
  v.index_.clear();
  for (const auto &t : tokens) {
    if (!v.index_.emplace(t, v.size()).second) {
      throw Error(ErrorCode::kParseError, "duplicate vocabulary token " + t);
    }
    v.tokens_.push_back(t);
  }
  v.CheckReserved();
  return v;
}

Vocabulary Vocabulary::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) tokens.push_back(line);
  return FromTokens(tokens);
}

void Vocabulary::Save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path.string());
  for (const auto &t : tokens_) out << t << '\n';
}

TokenId Vocabulary::id(const std::string &token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

const std::string &Vocabulary::token(TokenId id) const {
  if (id < 0 || id >= size()) {
    throw Error(ErrorCode::kIdOutOfRange, "token id " + std::to_string(id));
  }
  return tokens_[id];
}

void Vocabulary::CheckReserved() const {
  const std::string_view reserved[] = {kPadToken, kEosToken, kBosToken, kUnkToken};
  for (int i = 0; i < kNumReserved; ++i) {
    if (size() <= i || tokens_[i] != reserved[i]) {
      throw Error(ErrorCode::kVocabOverflow,
                  "reserved token " + std::string(reserved[i]) + " missing at id " +
                      std::to_string(i));
    }
  }
  for (SemanticRole r : kAllRoles) {
    const TokenId id = role_id(r);
    if (size() <= id || tokens_[id] != RoleToken(r)) {
      throw Error(ErrorCode::kVocabOverflow, "role marker " + RoleToken(r) + " missing");
    }
  }
}

TokenList Vocabulary::Decode(const std::vector<TokenId> &ids) const {
  TokenList out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(token(id));
  return out;
}

}  // namespace srlrw
