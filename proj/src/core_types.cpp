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

#include "srlrw/core_types.hpp"

#include <algorithm>

namespace srlrw {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyCorpus: return "EMPTY_CORPUS";
    case ErrorCode::kMissingGold: return "MISSING_GOLD";
    case ErrorCode::kVocabOverflow: return "VOCAB_OVERFLOW";
    case ErrorCode::kVariantMismatch: return "VARIANT_MISMATCH";
    case ErrorCode::kIdOutOfRange: return "ID_OUT_OF_RANGE";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kNoReference: return "NO_REFERENCE";
    case ErrorCode::kDivergence: return "DIVERGENCE";
    case ErrorCode::kConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::kCheckpointMismatch: return "CHECKPOINT_MISMATCH";
    case ErrorCode::kSequenceTooLong: return "SEQUENCE_TOO_LONG";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kInvalidExample: return "INVALID_EXAMPLE";
  }
  return "UNKNOWN";
}

std::string_view SpeakerName(Speaker s) { return s == Speaker::kA ? "A" : "B"; }

std::optional<Speaker> ParseSpeaker(std::string_view name) {
  if (name == "A") return Speaker::kA;
  if (name == "B") return Speaker::kB;
  return std::nullopt;
}

namespace {
constexpr std::array<std::string_view, kNumRoles> kRoleNames = {
    "ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "AM-TMP", "AM-LOC", "AM-PRP",
    "AM-NEG"};
}  // namespace

std::string_view RoleName(SemanticRole role) {
  return kRoleNames[static_cast<int>(role)];
}

std::optional<SemanticRole> ParseRole(std::string_view name) {
  for (int i = 0; i < kNumRoles; ++i) {
    if (kRoleNames[i] == name) return static_cast<SemanticRole>(i);
  }
  return std::nullopt;
}

bool IsReservedToken(std::string_view token) {
  return token == kPadToken || token == kEosToken || token == kBosToken ||
         token == kUnkToken;
}

std::string_view ViolationCodeName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kEmptySession: return "EMPTY_SESSION";
    case ViolationCode::kBadTurnIndex: return "BAD_TURN_INDEX";
    case ViolationCode::kEmptyUtterance: return "EMPTY_UTTERANCE";
    case ViolationCode::kReservedToken: return "RESERVED_TOKEN";
    case ViolationCode::kSpanOutOfRange: return "SPAN_OUT_OF_RANGE";
    case ViolationCode::kFutureArgument: return "FUTURE_ARGUMENT";
    case ViolationCode::kEmptyReference: return "EMPTY_REFERENCE";
  }
  return "UNKNOWN";
}

bool ValidationResult::has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation &v) { return v.code == code; });
}

bool SpanInSession(const Span &span, const DialogueSession &session) {
  if (span.turn < 0 || span.turn >= session.size()) return false;
  const int len = static_cast<int>(session.utterances[span.turn].tokens.size());
  return 0 <= span.start && span.start < span.end && span.end <= len;
}

ValidationResult ValidateExample(const RewriteExample &example,
                                 bool require_reference) {
  ValidationResult result;
  auto add = [&](ViolationCode code, std::string detail) {
    result.violations.push_back({code, std::move(detail)});
  };

  const auto &utts = example.session.utterances;
  if (utts.empty()) add(ViolationCode::kEmptySession, "session has no utterances");
  for (std::size_t i = 0; i < utts.size(); ++i) {
    const auto &u = utts[i];
    if (u.turn_index != static_cast<int>(i)) {
      add(ViolationCode::kBadTurnIndex,
          "utterance " + std::to_string(i) + " has turn_index " +
              std::to_string(u.turn_index));
    }
    if (u.tokens.empty()) {
      add(ViolationCode::kEmptyUtterance, "utterance " + std::to_string(i));
    }
    for (const auto &tok : u.tokens) {
      if (IsReservedToken(tok)) {
        add(ViolationCode::kReservedToken,
            "utterance " + std::to_string(i) + " contains " + tok);
      }
    }
  }

  for (std::size_t k = 0; k < example.triples.size(); ++k) {
    const auto &t = example.triples[k];
    const std::string where = "triple " + std::to_string(k);
    if (!SpanInSession(t.predicate, example.session)) {
      add(ViolationCode::kSpanOutOfRange, where + " predicate");
    }
    if (!SpanInSession(t.argument, example.session)) {
      add(ViolationCode::kSpanOutOfRange, where + " argument");
    }
    // Turn order is checked even when a span overflows its utterance so both
    // problems surface together.
    if (t.argument.turn > t.predicate.turn) {
      add(ViolationCode::kFutureArgument,
          where + ": argument turn " + std::to_string(t.argument.turn) +
              " > predicate turn " + std::to_string(t.predicate.turn));
    }
  }

  if (require_reference) {
    if (example.reference.empty()) {
      add(ViolationCode::kEmptyReference, "reference is empty");
    }
    for (const auto &tok : example.reference) {
      if (IsReservedToken(tok)) {
        add(ViolationCode::kReservedToken, "reference contains " + tok);
      }
    }
  }
  return result;
}

TokenList SliceSpan(const DialogueSession &session, const Span &span) {
  const auto &toks = session.utterances.at(span.turn).tokens;
  return TokenList(toks.begin() + span.start, toks.begin() + span.end);
}

std::string JoinTokens(const TokenList &tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace srlrw
