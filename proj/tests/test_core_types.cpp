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

#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "srlrw/core_types.hpp"
#include "srlrw/generator.hpp"
#include "srlrw/record_io.hpp"
#include "srlrw/tokenize.hpp"

using namespace srlrw;

TEST_SUITE("core-types") {

TEST_CASE("well-formed three-turn example validates") {
  const auto ex = testing::CantoneseExample();
  const auto res = ValidateExample(ex);
  CHECK(res.ok());
  CHECK(res.violations.empty());
}

TEST_CASE("argument end past the utterance is out of range") {
  auto ex = testing::CantoneseExample();
  ex.triples[0].argument.end = 5;  // utterance 0 has 4 tokens
  const auto res = ValidateExample(ex);
  CHECK_FALSE(res.ok());
  CHECK(res.has(ViolationCode::kSpanOutOfRange));
}

TEST_CASE("argument in a later turn is a future argument") {
  GeneratorConfig cfg;
  cfg.n_sessions = 20;
  cfg.seed = 3;
  const auto corpus = GenerateCorpus(cfg).train;
  int mutated = 0;
  for (auto ex : corpus) {
    // Move the first turn-0 predicate's argument onto the last utterance.
    for (auto &t : ex.triples) {
      if (t.predicate.turn != 0) continue;
      const int last = ex.session.size() - 1;
      const int len = static_cast<int>(ex.session.utterances[last].tokens.size());
      t.argument = {last, 0, std::min(len, t.argument.length())};
      // Hand check of the invariant on the mutated triple.
      REQUIRE(t.argument.turn > t.predicate.turn);
      ++mutated;
      break;
    }
    const auto res = ValidateExample(ex);
    CHECK(res.has(ViolationCode::kFutureArgument));
    CHECK_FALSE(res.has(ViolationCode::kSpanOutOfRange));
  }
  CHECK(mutated == static_cast<int>(corpus.size()));
}

TEST_CASE("reserved tokens, empty pieces and turn order are reported") {
  auto ex = testing::CantoneseExample();
  ex.session.utterances[1].tokens.push_back(std::string(kEosToken));
  CHECK(ValidateExample(ex).has(ViolationCode::kReservedToken));

  ex = testing::CantoneseExample();
  ex.session.utterances[2].tokens.clear();
  CHECK(ValidateExample(ex).has(ViolationCode::kEmptyUtterance));

  ex = testing::CantoneseExample();
  ex.session.utterances[1].turn_index = 5;
  CHECK(ValidateExample(ex).has(ViolationCode::kBadTurnIndex));

  ex = testing::CantoneseExample();
  ex.reference.clear();
  CHECK(ValidateExample(ex).has(ViolationCode::kEmptyReference));
  CHECK(ValidateExample(ex, false).ok());

  RewriteExample empty;
  CHECK(ValidateExample(empty).has(ViolationCode::kEmptySession));
}

TEST_CASE("validation is total and accepted spans always slice") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(-2, 8);
  const auto base = testing::CantoneseExample();
  for (int trial = 0; trial < 500; ++trial) {
    auto ex = base;
    for (auto &t : ex.triples) {
      t.argument = {small(rng), small(rng), small(rng)};
      t.predicate = {small(rng), small(rng), small(rng)};
    }
    ValidationResult res;
    CHECK_NOTHROW(res = ValidateExample(ex));
    if (res.ok()) {
      for (const auto &t : ex.triples) {
        CHECK_NOTHROW(SliceSpan(ex.session, t.argument));
        CHECK_NOTHROW(SliceSpan(ex.session, t.predicate));
      }
    }
  }
}

TEST_CASE("role names round-trip over the closed set") {
  CHECK(kAllRoles.size() == 9);
  for (SemanticRole r : kAllRoles) CHECK(ParseRole(RoleName(r)) == r);
  CHECK_FALSE(ParseRole("ARG5").has_value());
  CHECK(RoleName(SemanticRole::kAmNeg) == "AM-NEG");
}

TEST_CASE("records round-trip through the line format") {
  const auto ex = testing::CantoneseExample();
  const std::string line = FormatRecord(ex);
  const auto back = ParseRecord(line);
  CHECK(FormatRecord(back) == line);
  CHECK(back.triples == ex.triples);
  CHECK(back.reference == ex.reference);
  CHECK(back.session.utterances[1].speaker == Speaker::kB);
  CHECK(back.session.utterances[2].turn_index == 2);

  std::istringstream in(line + "\n{not json\n");
  try {
    ReadRecords(in);
    FAIL("expected a parse error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("records without triples or reference parse") {
  const auto ex = ParseRecord(R"({"utterances":[{"speaker":"A","tokens":["x"]}]})");
  CHECK(ex.triples.empty());
  CHECK(ex.reference.empty());
  CHECK(ex.session.size() == 1);
}

TEST_CASE("tokenizers") {
  CHECK(SplitCharacters("粤语 ok") == TokenList{"粤", "语", "o", "k"});
  CHECK(SplitWhitespace("  is  it \t here ") == TokenList{"is", "it", "here"});
  CHECK(Tokenize("ab", Tokenization::kCharacter).size() == 2);
  CHECK(Tokenize("ab", Tokenization::kWhitespace).size() == 1);
}

}
