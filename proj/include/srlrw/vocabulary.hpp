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

#ifndef SRLRW_VOCABULARY_HPP_
#define SRLRW_VOCABULARY_HPP_

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "srlrw/core_types.hpp"

namespace srlrw {

using TokenId = int;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kEosId = 1;
inline constexpr TokenId kBosId = 2;
inline constexpr TokenId kUnkId = 3;
inline constexpr int kNumReserved = 4;

// Role markers linearized between predicate and argument, e.g. "<ARG0>".
std::string RoleToken(SemanticRole role);

// Token <-> id bijection. Ids 0..3 are [PAD] [EOS] [BOS] [UNK]; the nine role
// markers follow; corpus tokens come after in first-seen order.
class Vocabulary {
 public:
  // Reserved tokens and role markers only.
  Vocabulary();

  static Vocabulary Build(const std::vector<RewriteExample> &corpus);
  // One token per line, id = line number.
  static Vocabulary Load(const std::filesystem::path &path);
  static Vocabulary FromTokens(const std::vector<std::string> &tokens);

  void Save(const std::filesystem::path &path) const;

  TokenId Add(const std::string &token);
  TokenId id(const std::string &token) const;  // [UNK] when absent
  bool contains(const std::string &token) const { return index_.count(token) > 0; }
  const std::string &token(TokenId id) const;
  TokenId role_id(SemanticRole role) const { return kNumReserved + static_cast<int>(role); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  // Fails with VOCAB_OVERFLOW unless reserved tokens and role markers sit at
  // their fixed ids.
  void CheckReserved() const;

  TokenList Decode(const std::vector<TokenId> &ids) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

}  // namespace srlrw

#endif  // SRLRW_VOCABULARY_HPP_
