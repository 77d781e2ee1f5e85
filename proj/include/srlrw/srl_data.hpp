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

#ifndef SRLRW_SRL_DATA_HPP_
#define SRLRW_SRL_DATA_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "srlrw/core_types.hpp"

namespace srlrw {

// ---------------------------------------------------------------------------
// Annotation lint
// ---------------------------------------------------------------------------

// Surface forms consulted by the annotation rules. Entries are compared
// against the concatenated span tokens.
struct LintLexicon {
  std::set<std::string> pronouns;
  // First/second-person forms that must be annotated as the speaker token.
  std::set<std::string> speaker_forms;

  static LintLexicon Default();
  // One entry per line: `pronoun <form>` or `speaker <form>`. '#' comments.
  static LintLexicon FromFile(const std::filesystem::path &path);
};

enum class LintVerdict { kPass, kWarning, kViolation };

std::string_view LintVerdictName(LintVerdict v);

// The four annotation validity criteria.
enum class LintRule { kTurnOrder = 0, kPronoun, kSpeakerToken, kNearest };
inline constexpr int kNumLintRules = 4;

struct TripleLint {
  std::array<LintVerdict, kNumLintRules> verdicts{};
  std::array<std::string, kNumLintRules> notes;

  LintVerdict operator[](LintRule r) const { return verdicts[static_cast<int>(r)]; }
};

struct AnnotationLintReport {
  std::vector<TripleLint> triples;

  int count(LintRule rule, LintVerdict verdict) const;
};

AnnotationLintReport LintAnnotations(const DialogueSession &session,
                                     const std::vector<PATriple> &triples,
                                     const LintLexicon &lexicon = LintLexicon::Default());

// Token distance between two spans of a session, measured on the
// concatenation of all utterances (gap between the closest ends).
int SpanDistance(const DialogueSession &session, const Span &a, const Span &b);

// ---------------------------------------------------------------------------
// Role statistics
// ---------------------------------------------------------------------------

struct RoleStatistics {
  std::array<long, kNumRoles> count{};
  std::array<long, kNumRoles> cross_turn{};
  long triple_count = 0;
  long predicate_count = 0;
  long utterance_count = 0;
  long session_count = 0;

  double overall_ratio(SemanticRole r) const;
  double cross_turn_ratio(SemanticRole r) const;
  double total_cross_turn_ratio() const;
};

RoleStatistics ComputeStatistics(const std::vector<RewriteExample> &corpus);

// Two-column role table (overall ratio, cross-turn ratio) in percent, ARG0
// through AM-PRP, plus AM-NEG when present, followed by totals.
std::string FormatRoleTable(const RoleStatistics &stats);

// ---------------------------------------------------------------------------
// SRL scoring
// ---------------------------------------------------------------------------

struct SrlTuple {
  int example = 0;  // record index, so tuples from different sessions differ
  Span predicate;
  Span argument;
  SemanticRole label = SemanticRole::kArg0;

  auto operator<=>(const SrlTuple &) const = default;
};

struct SrlScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

double HarmonicMean(double p, double r);

SrlScore ScoreSrl(const std::set<SrlTuple> &predicted, const std::set<SrlTuple> &gold);

std::set<SrlTuple> TuplesOf(const std::vector<RewriteExample> &records);

// ---------------------------------------------------------------------------
// Triple acquisition
// ---------------------------------------------------------------------------

enum class TripleMode { kGold, kHeuristic, kNone };
enum class TripleScope { kFullContext, kLastUtteranceOnly };

struct TripleSource {
  TripleMode mode = TripleMode::kGold;
  TripleScope scope = TripleScope::kFullContext;
};

std::string_view TripleModeName(TripleMode m);
std::string_view TripleScopeName(TripleScope s);
TripleMode ParseTripleMode(std::string_view name);
TripleScope ParseTripleScope(std::string_view name);

// Pattern rules for the heuristic extractor: an entity lexicon grouped by
// class and, per predicate surface form, the roles it takes.
struct HeuristicRules {
  enum class Direction { kBefore, kAfter };
  struct RoleRule {
    SemanticRole role;
    std::string entity_class;
    Direction direction;
  };
  struct PredicateRule {
    TokenList surface;
    std::vector<RoleRule> roles;
  };

  std::map<std::string, std::vector<TokenList>> entities;
  std::vector<PredicateRule> predicates;

  // Lines: `entity <class> <surface>` / `rule <predicate> <role> <class>
  // <before|after>`. Multi-token surfaces are written with '|' between
  // tokens; a bare non-ASCII surface is split into characters.
  static HeuristicRules FromFile(const std::filesystem::path &path);
  void Save(const std::filesystem::path &path) const;
};

// Deterministic extractor: finds lexicon predicates in every utterance and,
// for each role rule, picks the nearest unused entity of the rule's class.
std::vector<PATriple> ExtractHeuristicTriples(const DialogueSession &session,
                                              const HeuristicRules &rules);

std::vector<PATriple> AcquireTriples(const RewriteExample &example,
                                     const TripleSource &source,
                                     const HeuristicRules &rules);

}  // namespace srlrw

#endif  // SRLRW_SRL_DATA_HPP_
