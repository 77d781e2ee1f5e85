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

#include "srlrw/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

#include "srlrw/record_io.hpp"
#include "srlrw/tokenize.hpp"

namespace srlrw {

namespace {

using Piece = TemplateFamily::Piece;
using R = SemanticRole;

Piece L(std::string text) { return {std::move(text), -1}; }
Piece S(int var, std::string prefix = "") { return {std::move(prefix), var}; }

std::vector<TemplateFamily> BuildCharacterFamilies() {
  return {
      {"copula",
       {"lang", "lang"},
       {{{{L("需要"), S(0)}, {{0, {{1, R::kArg1}}}}},
         {{S(0), L("是"), S(1), L("吗")}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{S(0), L("不算"), S(1), L("吧")}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}}}}},
      {"location",
       {"person", "city"},
       {{{{S(0), L("想"), L("搬到"), S(1)}, {{2, {{0, R::kArg0}, {3, R::kArg4}}}}},
         {{S(0), L("住在"), S(1), L("吗")}, {{1, {{0, R::kArg0}, {2, R::kAmLoc}}}}},
         {{S(0), L("就"), L("住在"), S(1), L("吧")}, {{2, {{0, R::kArg0}, {3, R::kAmLoc}}}}}}}},
      {"travel",
       {"person", "time", "city"},
       {{{{S(0), L("想"), S(1), L("去"), S(2)},
          {{3, {{0, R::kArg0}, {2, R::kAmTmp}, {4, R::kArg4}}}}},
         {{S(0), S(1), L("出发"), L("吗")}, {{2, {{0, R::kArg0}, {1, R::kAmTmp}}}}},
         {{S(0), S(1), L("就"), L("去"), S(2)},
          {{3, {{0, R::kArg0}, {1, R::kAmTmp}, {4, R::kArg4}}}}}}}},
      {"gift",
       {"person", "person", "book"},
       {{{{S(0), L("买了"), S(2)}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{S(0), L("要"), S(2, "把"), L("送给"), S(1), L("吗")},
          {{3, {{0, R::kArg0}, {2, R::kArg1}, {4, R::kArg2}}}}},
         {{S(0), L("会"), S(2, "把"), L("送给"), S(1)},
          {{3, {{0, R::kArg0}, {2, R::kArg1}, {4, R::kArg2}}}}}}}},
      {"study",
       {"person", "school", "purpose"},
       {{{{S(0), S(1, "在"), L("学习")}, {{2, {{0, R::kArg0}, {1, R::kAmLoc}}}}},
         {{S(0), S(2, "为了"), L("学习"), L("吗")}, {{2, {{0, R::kArg0}, {1, R::kAmPrp}}}}},
         {{S(0), S(1, "在"), S(2, "为了"), L("学习")},
          {{3, {{0, R::kArg0}, {1, R::kAmLoc}, {2, R::kAmPrp}}}}}}}},
      {"preference",
       {"person", "book"},
       {{{{S(0), L("在"), L("读"), S(1)}, {{2, {{0, R::kArg0}, {3, R::kArg1}}}}},
         {{S(0), L("喜欢"), S(1), L("吗")}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{S(0), L("不"), L("喜欢"), S(1)},
          {{2, {{0, R::kArg0}, {1, R::kAmNeg}, {3, R::kArg1}}}}}}}},
      {"exchange",
       {"person", "book", "book"},
       {{{{S(0), L("有"), S(1)}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{S(0), L("想"), S(1, "用"), L("换"), S(2), L("吗")},
          {{3, {{0, R::kArg0}, {2, R::kArg3}, {4, R::kArg1}}}}},
         {{S(0), S(1, "用"), L("换"), S(2), L("吧")},
          {{2, {{0, R::kArg0}, {1, R::kArg3}, {3, R::kArg1}}}}}}}},
  };
}

std::vector<TemplateFamily> BuildAsciiFamilies() {
  return {
      {"copula",
       {"lang", "lang"},
       {{{{L("need"), S(0)}, {{0, {{1, R::kArg1}}}}},
         {{L("is"), S(0), S(1), L("?")}, {{0, {{1, R::kArg0}, {2, R::kArg1}}}}},
         {{S(0), L("hardly"), L("counts"), S(1, "as")},
          {{2, {{0, R::kArg0}, {3, R::kArg1}}}}}}}},
      {"location",
       {"person", "city"},
       {{{{S(0), L("will"), L("move"), S(1, "to")}, {{2, {{0, R::kArg0}, {3, R::kArg4}}}}},
         {{L("does"), S(0), L("live"), S(1, "in"), L("?")},
          {{2, {{1, R::kArg0}, {3, R::kAmLoc}}}}},
         {{S(0), L("will"), L("live"), S(1, "in")}, {{2, {{0, R::kArg0}, {3, R::kAmLoc}}}}}}}},
      {"travel",
       {"person", "time", "city"},
       {{{{S(0), L("will"), L("go"), S(2, "to"), S(1)},
          {{2, {{0, R::kArg0}, {3, R::kArg4}, {4, R::kAmTmp}}}}},
         {{L("does"), S(0), L("leave"), S(1), L("?")}, {{2, {{1, R::kArg0}, {3, R::kAmTmp}}}}},
         {{S(0), L("will"), L("go"), S(2, "to"), S(1)},
          {{2, {{0, R::kArg0}, {3, R::kArg4}, {4, R::kAmTmp}}}}}}}},
      {"gift",
       {"person", "person", "book"},
       {{{{S(0), L("bought"), S(2)}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{L("will"), S(0), L("give"), S(2), S(1, "to"), L("?")},
          {{2, {{1, R::kArg0}, {3, R::kArg1}, {4, R::kArg2}}}}},
         {{S(0), L("will"), L("give"), S(2), S(1, "to")},
          {{2, {{0, R::kArg0}, {3, R::kArg1}, {4, R::kArg2}}}}}}}},
      {"study",
       {"person", "school", "purpose"},
       {{{{S(0), L("studies"), S(1, "at")}, {{1, {{0, R::kArg0}, {2, R::kAmLoc}}}}},
         {{L("does"), S(0), L("study"), S(2, "for"), L("?")},
          {{2, {{1, R::kArg0}, {3, R::kAmPrp}}}}},
         {{S(0), L("will"), L("study"), S(1, "at"), S(2, "for")},
          {{2, {{0, R::kArg0}, {3, R::kAmLoc}, {4, R::kAmPrp}}}}}}}},
      {"preference",
       {"person", "book"},
       {{{{S(0), L("reads"), S(1)}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{L("does"), S(0), L("like"), S(1), L("?")}, {{2, {{1, R::kArg0}, {3, R::kArg1}}}}},
         {{S(0), L("does"), L("not"), L("like"), S(1)},
          {{3, {{0, R::kArg0}, {2, R::kAmNeg}, {4, R::kArg1}}}}}}}},
      {"exchange",
       {"person", "book", "book"},
       {{{{S(0), L("has"), S(1)}, {{1, {{0, R::kArg0}, {2, R::kArg1}}}}},
         {{L("will"), S(0), L("trade"), S(1), S(2, "for"), L("?")},
          {{2, {{1, R::kArg0}, {3, R::kArg3}, {4, R::kArg1}}}}},
         {{S(0), L("will"), L("trade"), S(1), S(2, "for")},
          {{2, {{0, R::kArg0}, {3, R::kArg3}, {4, R::kArg1}}}}}}}},
  };
}

TokenList Split(std::string_view text, bool ascii) {
  return ascii ? SplitWhitespace(text) : SplitCharacters(text);
}

// Which argument slots of turn 2 may be elided: those whose entity already
// appeared in turn 1.
std::vector<bool> ElidableTurnTwo(const TemplateFamily &f) {
  std::set<int> introduced;
  for (const auto &p : f.turns[0].pieces) {
    if (p.var >= 0) introduced.insert(p.var);
  }
  std::vector<bool> out;
  for (const auto &p : f.turns[1].pieces) {
    if (p.var >= 0) out.push_back(introduced.count(p.var) > 0);
  }
  return out;
}

bool IsArgumentPiece(const TemplateFamily::Turn &turn, int piece) {
  for (const auto &pred : turn.predicates) {
    for (const auto &[pi, role] : pred.args) {
      if (pi == piece) return true;
    }
  }
  return false;
}

struct ArgumentSlot {
  int turn;
  SemanticRole role;
  bool is_slot;
  bool elidable_turn_two;
};

std::vector<ArgumentSlot> ArgumentSlots(const TemplateFamily &f) {
  const auto elidable = ElidableTurnTwo(f);
  std::vector<ArgumentSlot> out;
  for (int t = 0; t < 3; ++t) {
    const auto &turn = f.turns[t];
    for (const auto &pred : turn.predicates) {
      for (const auto &[pi, role] : pred.args) {
        const bool slot = turn.pieces[pi].var >= 0;
        bool e2 = false;
        if (slot && t == 1) {
          int k = 0;
          for (int i = 0; i < pi; ++i) k += turn.pieces[i].var >= 0;
          e2 = elidable[k];
        }
        out.push_back({t, role, slot, e2});
      }
    }
  }
  return out;
}

std::vector<double> NormalizedWeights(const GeneratorConfig &config, std::size_t n) {
  std::vector<double> w = config.family_weights.empty() ? std::vector<double>(n, 1.0)
                                                        : config.family_weights;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto &x : w) x /= sum;
  return w;
}

const EntityLexicon &LexiconOf(const GeneratorConfig &config) {
  return config.entities.empty() ? DefaultEntityLexicon(config.ascii_entities)
                                 : config.entities;
}

}  // namespace

const std::vector<TemplateFamily> &TemplateFamilies(bool ascii) {
  static const auto chars = BuildCharacterFamilies();
  static const auto latin = BuildAsciiFamilies();
  return ascii ? latin : chars;
}

const EntityLexicon &DefaultEntityLexicon(bool ascii) {
  static const EntityLexicon chars = {
      {"lang", {"粤语", "普通话", "英语", "法语", "日语", "德语", "韩语", "俄语"}},
      {"person", {"小明", "小红", "老王", "张三", "李四", "阿强", "小李", "老陈"}},
      {"city", {"北京", "上海", "南京", "济南", "广州", "成都", "杭州", "西安"}},
      {"time", {"明天", "后天", "周末", "下午", "晚上", "今晚"}},
      {"book", {"三体", "红楼梦", "围城", "活着", "十一种孤独", "西游记"}},
      {"school", {"清华大学", "复旦大学", "浙江大学", "武汉大学", "中山大学"}},
      {"purpose", {"考试", "旅游", "工作", "比赛"}},
  };
  static const EntityLexicon latin = {
      {"lang", {"cantonese", "mandarin", "english", "french", "japanese", "german",
                "korean", "russian"}},
      {"person", {"ming", "hong", "wang", "zhang", "li", "qiang", "chen", "liu"}},
      {"city", {"beijing", "shanghai", "nanjing", "jinan", "guangzhou", "chengdu",
                "hangzhou", "xian"}},
      {"time", {"tomorrow", "tonight", "weekend", "monday", "friday", "afternoon"}},
      {"book", {"dune", "hamlet", "emma", "ulysses", "beloved", "walden"}},
      {"school", {"tsinghua", "fudan", "zhejiang", "wuhan", "sysu"}},
      {"purpose", {"exams", "travel", "work", "contests"}},
  };
  return ascii ? latin : chars;
}

const std::map<std::string, std::string> &ClassPronouns(bool ascii) {
  static const std::map<std::string, std::string> chars = {
      {"lang", "它"},   {"person", "他"}, {"city", "那里"},   {"time", "那时"},
      {"book", "它"},   {"school", "那里"}, {"purpose", "这个"}};
  static const std::map<std::string, std::string> latin = {
      {"lang", "it"},   {"person", "he"},  {"city", "there"}, {"time", "then"},
      {"book", "it"},   {"school", "there"}, {"purpose", "this"}};
  return ascii ? latin : chars;
}

void GeneratorConfig::Validate() const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::kConfigInvalid, msg); };
  if (n_sessions < 1) fail("n_sessions must be >= 1");
  for (double r : {omission_rate, pronoun_rate, cross_turn_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) fail("rates must lie in [0, 1]");
  }
  if (omission_rate + pronoun_rate > 1.0) fail("omission_rate + pronoun_rate exceeds 1");
  if (!(dev_fraction >= 0.0 && test_fraction >= 0.0 && dev_fraction + test_fraction < 1.0)) {
    fail("dev/test fractions must be >= 0 with a sum below 1");
  }
  const auto &families = TemplateFamilies(ascii_entities);
  if (!family_weights.empty()) {
    if (family_weights.size() != families.size()) {
      fail("family_weights needs " + std::to_string(families.size()) + " entries");
    }
    double sum = 0.0;
    for (double w : family_weights) {
      if (!(w >= 0.0)) fail("family weights must be >= 0");
      sum += w;
    }
    if (sum <= 0.0) fail("no template family has positive weight");
  }
  const auto &lexicon = LexiconOf(*this);
  const auto weights = NormalizedWeights(*this, families.size());
  for (std::size_t f = 0; f < families.size(); ++f) {
    if (weights[f] == 0.0) continue;
    std::map<std::string, std::size_t> need;
    for (const auto &cls : families[f].var_classes) ++need[cls];
    for (const auto &[cls, n] : need) {
      auto it = lexicon.find(cls);
      if (it == lexicon.end() || it->second.size() < n) {
        fail("lexicon class '" + cls + "' needs at least " + std::to_string(n) + " entries");
      }
      for (const auto &surface : it->second) {
        if (Split(surface, ascii_entities).empty()) fail("empty entity in class " + cls);
      }
    }
  }
  TurnTwoElisionRate(*this);
}

double TurnTwoElisionRate(const GeneratorConfig &config) {
  const auto &families = TemplateFamilies(config.ascii_entities);
  const auto weights = NormalizedWeights(config, families.size());
  double total = 0.0, turn_two = 0.0, last_turn = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (const auto &a : ArgumentSlots(families[f])) {
      total += weights[f];
      if (a.elidable_turn_two) turn_two += weights[f];
      if (a.turn == 2 && a.is_slot) last_turn += weights[f];
    }
  }
  const double fixed = (config.omission_rate + config.pronoun_rate) * last_turn;
  const double lo = fixed / total;
  const double hi = (fixed + turn_two) / total;
  const double target = config.cross_turn_rate;
  constexpr double kTol = 1e-12;
  if (target < lo - kTol || target > hi + kTol) {
    throw Error(ErrorCode::kConfigInvalid,
                "cross_turn_rate " + std::to_string(target) +
                    " unreachable with these omission/pronoun rates; feasible range [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (turn_two == 0.0) return 0.0;
  return std::clamp((target * total - fixed) / turn_two, 0.0, 1.0);
}

DeclaredStatistics DeclareStatistics(const GeneratorConfig &config) {
  const auto &families = TemplateFamilies(config.ascii_entities);
  const auto weights = NormalizedWeights(config, families.size());
  const double q = TurnTwoElisionRate(config);
  const double last = config.omission_rate + config.pronoun_rate;

  std::array<double, kNumRoles> count{}, cross{};
  double total = 0.0, total_cross = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (const auto &a : ArgumentSlots(families[f])) {
      double p = 0.0;
      if (a.elidable_turn_two) p = q;
      if (a.turn == 2 && a.is_slot) p = last;
      const int r = static_cast<int>(a.role);
      count[r] += weights[f];
      cross[r] += weights[f] * p;
      total += weights[f];
      total_cross += weights[f] * p;
    }
  }
  DeclaredStatistics out;
  for (int r = 0; r < kNumRoles; ++r) {
    out.overall[r] = count[r] / total;
    out.cross_turn[r] = count[r] > 0.0 ? cross[r] / count[r] : 0.0;
  }
  out.total_cross_turn = total_cross / total;
  return out;
}

RewriteExample Instantiate(const TemplateFamily &family, const std::vector<std::string> &values,
                           Speaker first_speaker, const std::vector<SlotChoice> &turn2,
                           const std::vector<SlotChoice> &turn3, bool ascii) {
  if (values.size() != family.var_classes.size()) {
    throw Error(ErrorCode::kConfigInvalid, "family " + family.name + " takes " +
                                               std::to_string(family.var_classes.size()) +
                                               " entity values");
  }
  const auto &pronouns = ClassPronouns(ascii);
  const std::vector<SlotChoice> none;
  const std::array<const std::vector<SlotChoice> *, 3> choices = {&none, &turn2, &turn3};
  const Speaker other = first_speaker == Speaker::kA ? Speaker::kB : Speaker::kA;

  RewriteExample ex;
  std::vector<std::optional<Span>> mention(values.size());

  auto render = [&](int t, const std::vector<SlotChoice> &ch, TokenList &tokens,
                    std::vector<std::optional<Span>> &piece_span) {
    const auto &turn = family.turns[t];
    piece_span.assign(turn.pieces.size(), std::nullopt);
    std::size_t slot = 0;
    for (std::size_t i = 0; i < turn.pieces.size(); ++i) {
      const auto &p = turn.pieces[i];
      auto append = [&](std::string_view text) {
        const auto toks = Split(text, ascii);
        tokens.insert(tokens.end(), toks.begin(), toks.end());
      };
      if (p.var < 0) {
        const int start = static_cast<int>(tokens.size());
        append(p.text);
        piece_span[i] = Span{t, start, static_cast<int>(tokens.size())};
        continue;
      }
      const SlotChoice c = slot < ch.size() ? ch[slot] : SlotChoice::kKeep;
      ++slot;
      if (c == SlotChoice::kOmit) continue;
      append(p.text);
      if (c == SlotChoice::kPronoun) {
        append(pronouns.at(family.var_classes[p.var]));
        continue;
      }
      const int start = static_cast<int>(tokens.size());
      append(values[p.var]);
      piece_span[i] = Span{t, start, static_cast<int>(tokens.size())};
    }
  };

  for (int t = 0; t < 3; ++t) {
    const auto &turn = family.turns[t];
    Utterance u;
    u.turn_index = t;
    u.speaker = t == 1 ? other : first_speaker;
    std::vector<std::optional<Span>> piece_span;
    render(t, *choices[t], u.tokens, piece_span);

    for (const auto &pred : turn.predicates) {
      const Span pspan = *piece_span[pred.piece];
      for (const auto &[pi, role] : pred.args) {
        std::optional<Span> arg = piece_span[pi];
        if (!arg) arg = mention[turn.pieces[pi].var];
        if (!arg) {
          throw Error(ErrorCode::kConfigInvalid,
                      "family " + family.name + ": elided entity has no earlier mention");
        }
        ex.triples.push_back({pspan, role, *arg});
      }
    }
    for (std::size_t i = 0; i < turn.pieces.size(); ++i) {
      if (turn.pieces[i].var >= 0 && piece_span[i]) mention[turn.pieces[i].var] = piece_span[i];
    }
    ex.session.utterances.push_back(std::move(u));
  }

  std::vector<std::optional<Span>> unused;
  render(2, none, ex.reference, unused);
  return ex;
}

GeneratedCorpus GenerateCorpus(const GeneratorConfig &config) {
  config.Validate();
  const bool ascii = config.ascii_entities;
  const auto &families = TemplateFamilies(ascii);
  const auto &lexicon = LexiconOf(config);
  const auto weights = NormalizedWeights(config, families.size());
  const double q = TurnTwoElisionRate(config);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::discrete_distribution<int> pick_family(weights.begin(), weights.end());

  auto sample = [&]() {
    const auto &f = families[pick_family(rng)];
    std::vector<std::string> values(f.var_classes.size());
    std::map<std::string, std::vector<std::string>> pool;
    for (std::size_t v = 0; v < values.size(); ++v) {
      auto &left = pool.try_emplace(f.var_classes[v], lexicon.at(f.var_classes[v])).first->second;
      std::uniform_int_distribution<std::size_t> pick(0, left.size() - 1);
      const std::size_t k = pick(rng);
      values[v] = left[k];
      left.erase(left.begin() + static_cast<std::ptrdiff_t>(k));
    }
    const Speaker first = unit(rng) < 0.5 ? Speaker::kA : Speaker::kB;

    std::vector<SlotChoice> turn2;
    for (bool elidable : ElidableTurnTwo(f)) {
      turn2.push_back(elidable && unit(rng) < q ? SlotChoice::kOmit : SlotChoice::kKeep);
    }
    std::vector<SlotChoice> turn3;
    for (std::size_t i = 0; i < f.turns[2].pieces.size(); ++i) {
      if (f.turns[2].pieces[i].var < 0) continue;
      SlotChoice c = SlotChoice::kKeep;
      if (IsArgumentPiece(f.turns[2], static_cast<int>(i))) {
        const double u = unit(rng);
        if (u < config.omission_rate) {
          c = SlotChoice::kOmit;
        } else if (u < config.omission_rate + config.pronoun_rate) {
          c = SlotChoice::kPronoun;
        }
      }
      turn3.push_back(c);
    }
    return Instantiate(f, values, first, turn2, turn3, ascii);
  };

  const long n = config.n_sessions;
  const long n_dev = std::lround(static_cast<double>(n) * config.dev_fraction);
  const long n_test = std::lround(static_cast<double>(n) * config.test_fraction);
  const long n_train = n - n_dev - n_test;
  if (n_train < 1) throw Error(ErrorCode::kConfigInvalid, "no sessions left for training");

  // Sessions are drawn independently; identical sessions are kept together so
  // the splits stay disjoint without skewing the template mix.
  std::vector<RewriteExample> all;
  std::vector<std::string> keys;
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> group_order;
  all.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    all.push_back(sample());
    auto [it, fresh] = groups.try_emplace(FormatRecord(all.back()));
    if (fresh) group_order.push_back(it->first);
    it->second.push_back(all.size() - 1);
  }
  std::shuffle(group_order.begin(), group_order.end(), rng);

  enum Split : std::uint8_t { kTrain, kDev, kTest };
  std::vector<Split> split(all.size(), kTrain);
  long dev_left = n_dev, test_left = n_test;
  for (const auto &key : group_order) {
    const auto &members = groups.at(key);
    Split s = kTrain;
    if (test_left > 0) {
      s = kTest;
      test_left -= static_cast<long>(members.size());
    } else if (dev_left > 0) {
      s = kDev;
      dev_left -= static_cast<long>(members.size());
    }
    for (std::size_t i : members) split[i] = s;
  }

  GeneratedCorpus out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto &dst = split[i] == kTrain ? out.train : split[i] == kDev ? out.dev : out.test;
    dst.push_back(std::move(all[i]));
  }
  if (out.train.empty()) throw Error(ErrorCode::kConfigInvalid, "no sessions left for training");
  return out;
}

HeuristicRules GeneratorRules(const GeneratorConfig &config) {
  const bool ascii = config.ascii_entities;
  HeuristicRules rules;
  for (const auto &[cls, list] : LexiconOf(config)) {
    for (const auto &surface : list) rules.entities[cls].push_back(Split(surface, ascii));
  }
  for (const auto &f : TemplateFamilies(ascii)) {
    for (const auto &turn : f.turns) {
      for (const auto &pred : turn.predicates) {
        const TokenList surface = Split(turn.pieces[pred.piece].text, ascii);
        auto it = std::find_if(rules.predicates.begin(), rules.predicates.end(),
                               [&](const auto &p) { return p.surface == surface; });
        if (it == rules.predicates.end()) {
          rules.predicates.push_back({surface, {}});
          it = rules.predicates.end() - 1;
        }
        for (const auto &[pi, role] : pred.args) {
          const auto &piece = turn.pieces[pi];
          std::string cls = "negator";
          if (piece.var >= 0) {
            cls = f.var_classes[piece.var];
          } else {
            auto &neg = rules.entities[cls];
            const TokenList lit = Split(piece.text, ascii);
            if (std::find(neg.begin(), neg.end(), lit) == neg.end()) neg.push_back(lit);
          }
          const bool seen = std::any_of(it->roles.begin(), it->roles.end(),
                                        [&](const auto &r) { return r.role == role; });
          if (seen) continue;
          it->roles.push_back({role, cls,
                               pi < pred.piece ? HeuristicRules::Direction::kBefore
                                               : HeuristicRules::Direction::kAfter});
        }
      }
    }
  }
  return rules;
}

}  // namespace srlrw
