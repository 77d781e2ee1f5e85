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

#ifndef SRLRW_CORE_TYPES_HPP_
#define SRLRW_CORE_TYPES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srlrw {

using Token = std::string;
using TokenList = std::vector<Token>;

// Error codes carried by every exception thrown from the library.
enum class ErrorCode {
  kEmptyCorpus,
  kMissingGold,
  kVocabOverflow,
  kVariantMismatch,
  kIdOutOfRange,
  kShapeMismatch,
  kNoReference,
  kDivergence,
  kConfigInvalid,
  kCheckpointMismatch,
  kSequenceTooLong,
  kParseError,
  kInvalidExample,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class Speaker : std::uint8_t { kA = 0, kB = 1 };

std::string_view SpeakerName(Speaker s);
std::optional<Speaker> ParseSpeaker(std::string_view name);

// The nine roles of the conversational SRL inventory.
enum class SemanticRole : std::uint8_t {
  kArg0 = 0,
  kArg1,
  kArg2,
  kArg3,
  kArg4,
  kAmTmp,
  kAmLoc,
  kAmPrp,
  kAmNeg,
};

inline constexpr int kNumRoles = 9;
inline constexpr std::array<SemanticRole, kNumRoles> kAllRoles = {
    SemanticRole::kArg0,  SemanticRole::kArg1,  SemanticRole::kArg2,
    SemanticRole::kArg3,  SemanticRole::kArg4,  SemanticRole::kAmTmp,
    SemanticRole::kAmLoc, SemanticRole::kAmPrp, SemanticRole::kAmNeg};

std::string_view RoleName(SemanticRole role);
std::optional<SemanticRole> ParseRole(std::string_view name);

// Tokens that may never appear inside an utterance.
inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kEosToken = "[EOS]";
inline constexpr std::string_view kBosToken = "[BOS]";
inline constexpr std::string_view kUnkToken = "[UNK]";

bool IsReservedToken(std::string_view token);

struct Utterance {
  TokenList tokens;
  Speaker speaker = Speaker::kA;
  int turn_index = 0;
};

// An ordered dialogue c = (u_1 .. u_N); the last utterance is the one to be
// rewritten.
struct DialogueSession {
  std::vector<Utterance> utterances;

  int size() const { return static_cast<int>(utterances.size()); }
  const Utterance &last() const { return utterances.back(); }
  Speaker target_speaker() const { return utterances.back().speaker; }
};

// Token range [start, end) inside utterance `turn`.
struct Span {
  int turn = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  auto operator<=>(const Span &) const = default;
};

struct PATriple {
  Span predicate;
  SemanticRole role = SemanticRole::kArg0;
  Span argument;

  auto operator<=>(const PATriple &) const = default;
};

struct RewriteExample {
  DialogueSession session;
  std::vector<PATriple> triples;
  TokenList reference;
};

enum class ViolationCode {
  kEmptySession,
  kBadTurnIndex,
  kEmptyUtterance,
  kReservedToken,
  kSpanOutOfRange,
  kFutureArgument,
  kEmptyReference,
};

std::string_view ViolationCodeName(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string detail;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationCode code) const;
};

// Checks every structural invariant of an example. Never throws; problems are
// reported as data. `require_reference` applies the training/evaluation rule
// that r is non-empty.
ValidationResult ValidateExample(const RewriteExample &example,
                                 bool require_reference = true);

bool SpanInSession(const Span &span, const DialogueSession &session);

// Tokens covered by `span`. The span must be valid for `session`.
TokenList SliceSpan(const DialogueSession &session, const Span &span);

// Joins tokens without separators (character corpora) or with a single space.
std::string JoinTokens(const TokenList &tokens, std::string_view sep = "");

}  // namespace srlrw

#endif  // SRLRW_CORE_TYPES_HPP_
