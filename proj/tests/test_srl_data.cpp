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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "srlrw/generator.hpp"
#include "srlrw/srl_data.hpp"
#include "srlrw/tokenize.hpp"

using namespace srlrw;

namespace {

RewriteExample TwoTurn(const char *first, const char *second) {
  RewriteExample ex;
  ex.session.utterances.push_back({SplitCharacters(first), Speaker::kA, 0});
  ex.session.utterances.push_back({SplitCharacters(second), Speaker::kB, 1});
  ex.reference = SplitCharacters(second);
  return ex;
}

// Distance on the flattened session, computed independently of SpanDistance.
int FlatDistance(const DialogueSession &s, const Span &a, const Span &b) {
  int off[8] = {0};
  for (int t = 0; t < s.size(); ++t) off[t + 1] = off[t] + s.utterances[t].tokens.size();
  int best = 1 << 30;
  for (int i = off[a.turn] + a.start; i < off[a.turn] + a.end; ++i) {
    for (int j = off[b.turn] + b.start; j < off[b.turn] + b.end; ++j) {
      best = std::min(best, std::abs(i - j) - 1);
    }
  }
  return std::max(best, 0);
}

}  // namespace

TEST_SUITE("srl-data") {

TEST_CASE("C1: argument after its predicate") {
  const auto ex = testing::CantoneseExample();
  const std::vector<PATriple> bad = {{{0, 0, 2}, SemanticRole::kArg1, {1, 3, 6}}};
  const auto rep = LintAnnotations(ex.session, bad);
  REQUIRE(rep.triples.size() == 1);
  CHECK(rep.triples[0][LintRule::kTurnOrder] == LintVerdict::kViolation);
  const auto good = LintAnnotations(ex.session, ex.triples);
  CHECK(good.count(LintRule::kTurnOrder, LintVerdict::kPass) == 5);
}

TEST_CASE("C2: pronoun argument with an earlier mention warns") {
  auto ex = TwoTurn("粤语很难", "它不算吧");
  const std::vector<PATriple> t = {{{1, 1, 3}, SemanticRole::kArg0, {1, 0, 1}}};
  const auto rep = LintAnnotations(ex.session, t);
  CHECK(rep.triples[0][LintRule::kPronoun] == LintVerdict::kWarning);
  CHECK(LintVerdictName(rep.triples[0][LintRule::kPronoun]) == "WARN");
  const std::vector<PATriple> resolved = {{{1, 1, 3}, SemanticRole::kArg0, {0, 0, 2}}};
  CHECK(LintAnnotations(ex.session, resolved).triples[0][LintRule::kPronoun] ==
        LintVerdict::kPass);
}

TEST_CASE("C3: speaker arguments must be the speaker token") {
  auto ex = TwoTurn("我要粤语", "不算吧");
  const std::vector<PATriple> t = {{{0, 1, 2}, SemanticRole::kArg0, {0, 0, 1}}};
  CHECK(LintAnnotations(ex.session, t).triples[0][LintRule::kSpeakerToken] ==
        LintVerdict::kViolation);
}

TEST_CASE("C4: the farther of two identical candidates is flagged") {
  auto ex = TwoTurn("粤语和粤语", "不算吧");
  const Span pred{1, 0, 2};
  const Span far{0, 0, 2}, near{0, 3, 5};
  // Oracle: enumerate every span with the same surface, keep the closest.
  std::vector<Span> cands;
  const auto &toks = ex.session.utterances[0].tokens;
  for (int s = 0; s + 2 <= static_cast<int>(toks.size()); ++s) {
    if (toks[s] == "粤" && toks[s + 1] == "语") cands.push_back({0, s, s + 2});
  }
  REQUIRE(cands.size() == 2);
  const auto best = *std::min_element(cands.begin(), cands.end(), [&](auto &a, auto &b) {
    return FlatDistance(ex.session, a, pred) < FlatDistance(ex.session, b, pred);
  });
  CHECK(best == near);
  for (const Span &c : cands) CHECK(SpanDistance(ex.session, c, pred) == FlatDistance(ex.session, c, pred));

  const std::vector<PATriple> t = {{pred, SemanticRole::kArg0, far},
                                   {pred, SemanticRole::kArg0, near}};
  const auto rep = LintAnnotations(ex.session, t);
  CHECK(rep.triples[0][LintRule::kNearest] == LintVerdict::kViolation);
  CHECK(rep.triples[1][LintRule::kNearest] == LintVerdict::kPass);
}

TEST_CASE("lexicon file overrides the defaults") {
  const auto path = std::filesystem::temp_directory_path() / "srlrw_lexicon.txt";
  {
    std::ofstream out(path);
    out << "# custom\npronoun 该\nspeaker 俺\n";
  }
  const auto lex = LintLexicon::FromFile(path);
  CHECK(lex.pronouns.count("该"));
  CHECK(lex.speaker_forms.count("俺"));
  CHECK_FALSE(lex.pronouns.count("它"));
  std::filesystem::remove(path);
}

TEST_CASE("statistics: same-turn corpus has no cross-turn arguments") {
  auto ex = testing::CantoneseExample();
  ex.triples = {{{1, 2, 3}, SemanticRole::kArg0, {1, 0, 2}},
                {{1, 2, 3}, SemanticRole::kArg1, {1, 3, 6}}};
  const auto st = ComputeStatistics({ex});
  for (SemanticRole r : kAllRoles) CHECK(st.cross_turn_ratio(r) == 0.0);
}

TEST_CASE("statistics: hand-counted ratios") {
  auto ex = testing::CantoneseExample();
  const Span shi{1, 2, 3}, busuan{2, 0, 2};
  ex.triples.clear();
  for (int i = 0; i < 3; ++i) ex.triples.push_back({shi, SemanticRole::kArg0, {1, 0, 2}});
  ex.triples.push_back({busuan, SemanticRole::kArg0, {1, 0, 2}});
  for (int i = 0; i < 6; ++i) ex.triples.push_back({shi, SemanticRole::kArg1, {1, 3, 6}});
  const auto st = ComputeStatistics({ex});
  CHECK(st.triple_count == 10);
  CHECK(st.overall_ratio(SemanticRole::kArg0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(st.cross_turn_ratio(SemanticRole::kArg0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(st.cross_turn_ratio(SemanticRole::kArg1) == 0.0);
  double sum = 0.0;
  for (SemanticRole r : kAllRoles) sum += st.overall_ratio(r);
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK_THROWS_AS(ComputeStatistics({}), Error);
}

TEST_CASE("role table rows run ARG0 through AM-PRP") {
  GeneratorConfig cfg;
  cfg.n_sessions = 200;
  const auto st = ComputeStatistics(GenerateCorpus(cfg).train);
  const std::string table = FormatRoleTable(st);
  const char *rows[] = {"ARG0", "ARG1", "ARG2", "ARG3", "ARG4", "AM-TMP", "AM-LOC", "AM-PRP"};
  std::size_t pos = 0;
  for (const char *r : rows) {
    const auto at = table.find(std::string("\n") + r + " ", pos);
    REQUIRE(at != std::string::npos);
    pos = at + 1;
  }
  CHECK(table.find("AM-NEG") != std::string::npos);  // the generator emits negation

  auto ex = testing::CantoneseExample();
  CHECK(FormatRoleTable(ComputeStatistics({ex})).find("AM-NEG") == std::string::npos);
}

TEST_CASE("score_srl formula cases") {
  const SrlTuple t1{0, {0, 0, 1}, {0, 1, 2}, SemanticRole::kArg0};
  const SrlTuple t2{0, {0, 0, 1}, {0, 2, 3}, SemanticRole::kArg1};
  auto s = ScoreSrl({t1, t2}, {t1, t2});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);

  s = ScoreSrl({t1}, {t1, t2});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 0.5);
  CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK(std::abs(HarmonicMean(0.7566, 0.7447) - 0.7506) < 1e-4);

  s = ScoreSrl({}, {});
  CHECK(s.precision == 1.0);
  s = ScoreSrl({}, {t1});
  CHECK(s.precision == 0.0);
  CHECK(s.f1 == 0.0);
}

TEST_CASE("score_srl symmetry and F1 bounds") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<SrlTuple> a, b;
    for (int i = 0; i < 8; ++i) {
      a.insert({pick(rng), {0, 0, 1}, {0, pick(rng), 6}, SemanticRole::kArg0});
      b.insert({pick(rng), {0, 0, 1}, {0, pick(rng), 6}, SemanticRole::kArg0});
    }
    const auto ab = ScoreSrl(a, b);
    const auto ba = ScoreSrl(b, a);
    CHECK(ab.precision == ba.recall);
    CHECK(ab.recall == ba.precision);
    if (ab.precision > 0 && ab.recall > 0) {
      CHECK(ab.f1 <= std::max(ab.precision, ab.recall) + 1e-15);
      CHECK(ab.f1 >= std::min(ab.precision, ab.recall) - 1e-15);
    }
  }
}

TEST_CASE("triple acquisition modes") {
  const auto ex = testing::CantoneseExample();
  const HeuristicRules rules = GeneratorRules(GeneratorConfig{});

  CHECK(AcquireTriples(ex, {TripleMode::kNone, TripleScope::kFullContext}, rules).empty());
  CHECK(AcquireTriples(ex, {TripleMode::kNone, TripleScope::kLastUtteranceOnly}, rules).empty());

  const auto full = AcquireTriples(ex, {TripleMode::kGold, TripleScope::kFullContext}, rules);
  CHECK(full == ex.triples);
  const auto last =
      AcquireTriples(ex, {TripleMode::kGold, TripleScope::kLastUtteranceOnly}, rules);
  REQUIRE(last.size() == 2);
  for (const auto &t : last) CHECK(t.predicate.turn == 2);
  for (const auto &t : last) {
    CHECK(std::find(full.begin(), full.end(), t) != full.end());
  }

  auto bare = ex;
  bare.triples.clear();
  try {
    AcquireTriples(bare, {TripleMode::kGold, TripleScope::kFullContext}, rules);
    FAIL("expected MISSING_GOLD");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kMissingGold);
  }
}

TEST_CASE("heuristic extractor on the copula family") {
  const auto ex = testing::CantoneseExample();
  const auto found = ExtractHeuristicTriples(ex.session, GeneratorRules(GeneratorConfig{}));
  const Span busuan{2, 0, 2};
  const PATriple arg0{busuan, SemanticRole::kArg0, {1, 0, 2}};
  const PATriple arg1{busuan, SemanticRole::kArg1, {1, 3, 6}};
  CHECK(std::find(found.begin(), found.end(), arg0) != found.end());
  CHECK(std::find(found.begin(), found.end(), arg1) != found.end());
  CHECK(SliceSpan(ex.session, arg0.argument) == SplitCharacters("粤语"));
  CHECK(SliceSpan(ex.session, arg1.argument) == SplitCharacters("普通话"));
  CHECK(found == ExtractHeuristicTriples(ex.session, GeneratorRules(GeneratorConfig{})));
}

TEST_CASE("heuristic last-utterance triples are a subset of the full set") {
  GeneratorConfig cfg;
  cfg.n_sessions = 100;
  const auto rules = GeneratorRules(cfg);
  for (const auto &ex : GenerateCorpus(cfg).train) {
    const auto full = AcquireTriples(ex, {TripleMode::kHeuristic, TripleScope::kFullContext}, rules);
    const auto last =
        AcquireTriples(ex, {TripleMode::kHeuristic, TripleScope::kLastUtteranceOnly}, rules);
    for (const auto &t : last) CHECK(std::find(full.begin(), full.end(), t) != full.end());
  }
}

TEST_CASE("heuristic rules survive a save/load round trip") {
  const auto rules = GeneratorRules(GeneratorConfig{});
  const auto path = std::filesystem::temp_directory_path() / "srlrw_rules.txt";
  rules.Save(path);
  const auto back = HeuristicRules::FromFile(path);
  CHECK(back.entities == rules.entities);
  REQUIRE(back.predicates.size() == rules.predicates.size());
  for (std::size_t i = 0; i < rules.predicates.size(); ++i) {
    CHECK(back.predicates[i].surface == rules.predicates[i].surface);
    CHECK(back.predicates[i].roles.size() == rules.predicates[i].roles.size());
  }
  std::filesystem::remove(path);
}

}
