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

#ifndef SRLRW_GENERATOR_HPP_
#define SRLRW_GENERATOR_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "srlrw/core_types.hpp"
#include "srlrw/srl_data.hpp"

namespace srlrw {

// A three-turn dialogue template. Turn 1 introduces the entities, turn 2
// relates them and turn 3 is the utterance to rewrite.
struct TemplateFamily {
  struct Piece {
    std::string text;  // literal text, or the prefix of a slot
    int var = -1;      // slot variable; -1 for a literal
  };
  struct Predicate {
    int piece;
    std::vector<std::pair<int, SemanticRole>> args;  // (piece, role)
  };
  struct Turn {
    std::vector<Piece> pieces;
    std::vector<Predicate> predicates;
  };

  std::string name;
  std::vector<std::string> var_classes;
  std::array<Turn, 3> turns;
};

// Built-in families; the character and ASCII inventories line up one to one.
const std::vector<TemplateFamily> &TemplateFamilies(bool ascii);

using EntityLexicon = std::map<std::string, std::vector<std::string>>;

const EntityLexicon &DefaultEntityLexicon(bool ascii);
const std::map<std::string, std::string> &ClassPronouns(bool ascii);

struct GeneratorConfig {
  long n_sessions = 1000;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  // Per argument slot of the last utterance.
  double omission_rate = 0.35;
  double pronoun_rate = 0.15;
  // Expected fraction of all gold arguments that lie in an earlier turn than
  // their predicate.
  double cross_turn_rate = 0.3;
  bool ascii_entities = false;
  std::vector<double> family_weights;  // empty: uniform
  EntityLexicon entities;              // empty: built-in lexicon
  std::uint64_t seed = 0;

  // Throws CONFIG_INVALID.
  void Validate() const;
};

// Probability of eliding a turn-2 argument whose entity already appeared in
// turn 1, chosen so the expected cross-turn ratio equals cross_turn_rate.
// CONFIG_INVALID when no probability in [0, 1] achieves it.
double TurnTwoElisionRate(const GeneratorConfig &config);

// Role mix the generator is expected to produce.
struct DeclaredStatistics {
  std::array<double, kNumRoles> overall{};
  std::array<double, kNumRoles> cross_turn{};
  double total_cross_turn = 0.0;
};

DeclaredStatistics DeclareStatistics(const GeneratorConfig &config);

enum class SlotChoice { kKeep, kOmit, kPronoun };

// Instantiates one family with fixed entity values and fixed elision choices
// for the argument slots of turns 2 and 3 (in piece order; missing entries
// mean keep).
RewriteExample Instantiate(const TemplateFamily &family, const std::vector<std::string> &values,
                           Speaker first_speaker, const std::vector<SlotChoice> &turn2,
                           const std::vector<SlotChoice> &turn3, bool ascii);

struct GeneratedCorpus {
  std::vector<RewriteExample> train;
  std::vector<RewriteExample> dev;
  std::vector<RewriteExample> test;
};

// Deterministic per seed. The splits share no identical record.
GeneratedCorpus GenerateCorpus(const GeneratorConfig &config);

// Heuristic extractor rules matching the generator's lexicon and templates.
HeuristicRules GeneratorRules(const GeneratorConfig &config);

}  // namespace srlrw

#endif  // SRLRW_GENERATOR_HPP_
