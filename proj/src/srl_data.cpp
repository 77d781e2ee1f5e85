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

#include "srlrw/srl_data.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "srlrw/tokenize.hpp"

namespace srlrw {

// ---------------------------------------------------------------------------
// Lint
// ---------------------------------------------------------------------------

LintLexicon LintLexicon::Default() {
  LintLexicon lex;
  lex.pronouns = {"它", "他", "她", "它们", "他们", "她们", "这", "那", "这个",
                  "那个", "这里", "那里", "那时", "这样", "这些", "it", "he",
                  "she", "they", "this", "that", "there", "then"};
  lex.speaker_forms = {"我", "你", "我们", "你们", "咱们", "I", "me", "you", "we"};
  return lex;
}

LintLexicon LintLexicon::FromFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot open " + path.string());
  LintLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind, form;
    if (!(ls >> kind) || kind[0] == '#') continue;
    if (!(ls >> form)) {
      throw Error(ErrorCode::kConfigInvalid, "lexicon line without form: " + line);
    }
    if (kind == "pronoun") {
      lex.pronouns.insert(form);
    } else if (kind == "speaker") {
      lex.speaker_forms.insert(form);
    } else {
      throw Error(ErrorCode::kConfigInvalid, "unknown lexicon entry kind " + kind);
    }
  }
  return lex;
}

std::string_view LintVerdictName(LintVerdict v) {
  switch (v) {
    case LintVerdict::kPass: return "PASS";
    case LintVerdict::kWarning: return "WARN";
    case LintVerdict::kViolation: return "VIOLATION";
  }
  return "?";
}

int AnnotationLintReport::count(LintRule rule, LintVerdict verdict) const {
  return static_cast<int>(std::count_if(
      triples.begin(), triples.end(),
      [&](const TripleLint &t) { return t[rule] == verdict; }));
}

namespace {

std::vector<int> TurnOffsets(const DialogueSession &session) {
  std::vector<int> offsets(session.utterances.size() + 1, 0);
  for (std::size_t i = 0; i < session.utterances.size(); ++i) {
    offsets[i + 1] = offsets[i] + static_cast<int>(session.utterances[i].tokens.size());
  }
  return offsets;
}

}  // namespace

int SpanDistance(const DialogueSession &session, const Span &a, const Span &b) {
  const auto off = TurnOffsets(session);
  const int as = off[a.turn] + a.start, ae = off[a.turn] + a.end;
  const int bs = off[b.turn] + b.start, be = off[b.turn] + b.end;
  if (ae <= bs) return bs - ae;
  if (be <= as) return as - be;
  return 0;
}

AnnotationLintReport LintAnnotations(const DialogueSession &session,
                                     const std::vector<PATriple> &triples,
                                     const LintLexicon &lexicon) {
  AnnotationLintReport report;
  for (const auto &t : triples) {
    TripleLint lint;
    auto set = [&](LintRule r, LintVerdict v, std::string note) {
      lint.verdicts[static_cast<int>(r)] = v;
      lint.notes[static_cast<int>(r)] = std::move(note);
    };

    if (t.argument.turn > t.predicate.turn) {
      set(LintRule::kTurnOrder, LintVerdict::kViolation, "argument in a later turn");
    }
    if (!SpanInSession(t.argument, session) || !SpanInSession(t.predicate, session)) {
      // Nothing else can be judged on an unresolvable span.
      for (int r = 1; r < kNumLintRules; ++r) {
        lint.verdicts[r] = LintVerdict::kViolation;
        lint.notes[r] = "span out of range";
      }
      report.triples.push_back(std::move(lint));
      continue;
    }

    const TokenList arg_tokens = SliceSpan(session, t.argument);
    const std::string surface = JoinTokens(arg_tokens);
    if (lexicon.pronouns.count(surface)) {
      set(LintRule::kPronoun, LintVerdict::kWarning, "WARN_PRONOUN: " + surface);
    }
    if (lexicon.speaker_forms.count(surface)) {
      set(LintRule::kSpeakerToken, LintVerdict::kViolation,
          "speaker reference '" + surface + "' must be A or B");
    }

    // Every other occurrence of the same surface form that the predicate may
    // legally reach is a competing candidate.
    const int chosen = SpanDistance(session, t.argument, t.predicate);
    const int len = t.argument.length();
    for (int turn = 0; turn <= t.predicate.turn && turn < session.size(); ++turn) {
      const auto &toks = session.utterances[turn].tokens;
      for (int s = 0; s + len <= static_cast<int>(toks.size()); ++s) {
        if (!std::equal(arg_tokens.begin(), arg_tokens.end(), toks.begin() + s)) {
          continue;
        }
        const Span cand{turn, s, s + len};
        if (cand == t.argument) continue;
        const int d = SpanDistance(session, cand, t.predicate);
        if (d < chosen) {
          set(LintRule::kNearest, LintVerdict::kViolation,
              "nearer candidate at turn " + std::to_string(turn) + " offset " +
                  std::to_string(s));
        }
      }
    }
    report.triples.push_back(std::move(lint));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

double RoleStatistics::overall_ratio(SemanticRole r) const {
  return triple_count == 0
             ? 0.0
             : static_cast<double>(count[static_cast<int>(r)]) / triple_count;
}

double RoleStatistics::cross_turn_ratio(SemanticRole r) const {
  const long n = count[static_cast<int>(r)];
  return n == 0 ? 0.0 : static_cast<double>(cross_turn[static_cast<int>(r)]) / n;
}

double RoleStatistics::total_cross_turn_ratio() const {
  long cross = 0;
  for (long c : cross_turn) cross += c;
  return triple_count == 0 ? 0.0 : static_cast<double>(cross) / triple_count;
}

RoleStatistics ComputeStatistics(const std::vector<RewriteExample> &corpus) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "statistics need a corpus");
  RoleStatistics stats;
  stats.session_count = static_cast<long>(corpus.size());
  for (const auto &ex : corpus) {
    stats.utterance_count += ex.session.size();
    std::set<Span> predicates;
    for (const auto &t : ex.triples) {
      const int r = static_cast<int>(t.role);
      ++stats.count[r];
      if (t.argument.turn != t.predicate.turn) ++stats.cross_turn[r];
      predicates.insert(t.predicate);
    }
    stats.triple_count += static_cast<long>(ex.triples.size());
    stats.predicate_count += static_cast<long>(predicates.size());
  }
  return stats;
}

std::string FormatRoleTable(const RoleStatistics &stats) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-8s %14s %17s\n", "", "Overall Ratio",
                "Cross-turn Ratio");
  out += buf;
  for (SemanticRole role : kAllRoles) {
    if (role == SemanticRole::kAmNeg && stats.count[static_cast<int>(role)] == 0) {
      continue;
    }
    std::snprintf(buf, sizeof buf, "%-8s %13.1f%% %16.1f%%\n",
                  std::string(RoleName(role)).c_str(),
                  100.0 * stats.overall_ratio(role),
                  100.0 * stats.cross_turn_ratio(role));
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "sessions %ld  utterances %ld  predicates %ld  arguments %ld  "
                "cross-turn %.2f%%\n",
                stats.session_count, stats.utterance_count, stats.predicate_count,
                stats.triple_count, 100.0 * stats.total_cross_turn_ratio());
  out += buf;
  return out;
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

double HarmonicMean(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

SrlScore ScoreSrl(const std::set<SrlTuple> &predicted, const std::set<SrlTuple> &gold) {
  std::size_t hit = 0;
  for (const auto &t : predicted) hit += gold.count(t);
  SrlScore s;
  if (predicted.empty()) {
    s.precision = gold.empty() ? 1.0 : 0.0;
  } else {
    s.precision = static_cast<double>(hit) / static_cast<double>(predicted.size());
  }
  if (gold.empty()) {
    s.recall = predicted.empty() ? 1.0 : 0.0;
  } else {
    s.recall = static_cast<double>(hit) / static_cast<double>(gold.size());
  }
  s.f1 = HarmonicMean(s.precision, s.recall);
  return s;
}

std::set<SrlTuple> TuplesOf(const std::vector<RewriteExample> &records) {
  std::set<SrlTuple> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto &t : records[i].triples) {
      out.insert({static_cast<int>(i), t.predicate, t.argument, t.role});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Acquisition
// ---------------------------------------------------------------------------

std::string_view TripleModeName(TripleMode m) {
  switch (m) {
    case TripleMode::kGold: return "gold";
    case TripleMode::kHeuristic: return "heuristic";
    case TripleMode::kNone: return "none";
  }
  return "?";
}

std::string_view TripleScopeName(TripleScope s) {
  return s == TripleScope::kFullContext ? "full" : "last";
}

TripleMode ParseTripleMode(std::string_view name) {
  if (name == "gold") return TripleMode::kGold;
  if (name == "heuristic") return TripleMode::kHeuristic;
  if (name == "none") return TripleMode::kNone;
  throw Error(ErrorCode::kConfigInvalid, "unknown triple mode " + std::string(name));
}

TripleScope ParseTripleScope(std::string_view name) {
  if (name == "full") return TripleScope::kFullContext;
  if (name == "last") return TripleScope::kLastUtteranceOnly;
  throw Error(ErrorCode::kConfigInvalid, "unknown triple scope " + std::string(name));
}

namespace {

// Rule-file surfaces: '|' separates tokens; a bare ASCII word is one token and
// any other bare surface is split into characters.
TokenList ParseSurface(const std::string &surface) {
  if (surface.find('|') != std::string::npos) {
    TokenList out;
    std::size_t start = 0;
    while (true) {
      const auto bar = surface.find('|', start);
      out.push_back(surface.substr(start, bar - start));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    return out;
  }
  const bool ascii = std::all_of(surface.begin(), surface.end(),
                                 [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  return ascii ? TokenList{surface} : SplitCharacters(surface);
}

}  // namespace

HeuristicRules HeuristicRules::FromFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot open " + path.string());
  HeuristicRules rules;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == '#') continue;
    if (kind == "entity") {
      std::string cls, surface;
      if (!(ls >> cls >> surface)) {
        throw Error(ErrorCode::kConfigInvalid, "bad entity line: " + line);
      }
      rules.entities[cls].push_back(ParseSurface(surface));
    } else if (kind == "rule") {
      std::string pred, role, cls, dir;
      if (!(ls >> pred >> role >> cls >> dir)) {
        throw Error(ErrorCode::kConfigInvalid, "bad rule line: " + line);
      }
      const auto parsed = ParseRole(role);
      if (!parsed || (dir != "before" && dir != "after")) {
        throw Error(ErrorCode::kConfigInvalid, "bad rule line: " + line);
      }
      const TokenList surface = ParseSurface(pred);
      auto it = std::find_if(rules.predicates.begin(), rules.predicates.end(),
                             [&](const PredicateRule &p) { return p.surface == surface; });
      if (it == rules.predicates.end()) {
        rules.predicates.push_back({surface, {}});
        it = rules.predicates.end() - 1;
      }
      it->roles.push_back(
          {*parsed, cls, dir == "after" ? Direction::kAfter : Direction::kBefore});
    } else {
      throw Error(ErrorCode::kConfigInvalid, "unknown rule kind " + kind);
    }
  }
  return rules;
}

void HeuristicRules::Save(const std::filesystem::path &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfigInvalid, "cannot write " + path.string());
  for (const auto &[cls, list] : entities) {
    for (const auto &e : list) out << "entity " << cls << ' ' << JoinTokens(e, "|") << '\n';
  }
  for (const auto &p : predicates) {
    for (const auto &r : p.roles) {
      out << "rule " << JoinTokens(p.surface, "|") << ' ' << RoleName(r.role) << ' '
          << r.entity_class << ' '
          << (r.direction == Direction::kAfter ? "after" : "before") << '\n';
    }
  }
}

namespace {

struct Mention {
  Span span;
  std::string cls;
};

// Greedy longest-match entity mentions, left to right, non-overlapping.
std::vector<Mention> FindMentions(const DialogueSession &session,
                                  const HeuristicRules &rules) {
  std::vector<Mention> out;
  for (int turn = 0; turn < session.size(); ++turn) {
    const auto &toks = session.utterances[turn].tokens;
    int i = 0;
    while (i < static_cast<int>(toks.size())) {
      int best_len = 0;
      const std::string *best_cls = nullptr;
      for (const auto &[cls, list] : rules.entities) {
        for (const auto &e : list) {
          const int n = static_cast<int>(e.size());
          if (n > best_len && i + n <= static_cast<int>(toks.size()) &&
              std::equal(e.begin(), e.end(), toks.begin() + i)) {
            best_len = n;
            best_cls = &cls;
          }
        }
      }
      if (best_len > 0) {
        out.push_back({{turn, i, i + best_len}, *best_cls});
        i += best_len;
      } else {
        ++i;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<PATriple> ExtractHeuristicTriples(const DialogueSession &session,
                                              const HeuristicRules &rules) {
  using Direction = HeuristicRules::Direction;
  const auto mentions = FindMentions(session, rules);
  std::vector<PATriple> out;

  for (int turn = 0; turn < session.size(); ++turn) {
    const auto &toks = session.utterances[turn].tokens;
    int i = 0;
    while (i < static_cast<int>(toks.size())) {
      const HeuristicRules::PredicateRule *rule = nullptr;
      for (const auto &p : rules.predicates) {
        const int n = static_cast<int>(p.surface.size());
        if (i + n <= static_cast<int>(toks.size()) &&
            std::equal(p.surface.begin(), p.surface.end(), toks.begin() + i) &&
            (!rule || n > static_cast<int>(rule->surface.size()))) {
          rule = &p;
        }
      }
      if (!rule) {
        ++i;
        continue;
      }
      const Span pred{turn, i, i + static_cast<int>(rule->surface.size())};
      std::vector<bool> used(mentions.size(), false);

      // Mentions preceding the predicate, nearest first.
      auto before = [&](const std::string &cls) -> int {
        for (int m = static_cast<int>(mentions.size()) - 1; m >= 0; --m) {
          const auto &mt = mentions[m];
          if (used[m] || mt.cls != cls) continue;
          if (mt.span.turn < turn || (mt.span.turn == turn && mt.span.end <= pred.start)) {
            return m;
          }
        }
        return -1;
      };
      auto after = [&](const std::string &cls) -> int {
        for (std::size_t m = 0; m < mentions.size(); ++m) {
          const auto &mt = mentions[m];
          if (!used[m] && mt.cls == cls && mt.span.turn == turn &&
              mt.span.start >= pred.end) {
            return static_cast<int>(m);
          }
        }
        return -1;
      };

      std::vector<PATriple> found;
      for (Direction pass : {Direction::kAfter, Direction::kBefore}) {
        for (const auto &rr : rule->roles) {
          if (rr.direction != pass) continue;
          int m = pass == Direction::kAfter ? after(rr.entity_class) : -1;
          if (m < 0) m = before(rr.entity_class);
          if (m < 0) continue;
          used[m] = true;
          found.push_back({pred, rr.role, mentions[m].span});
        }
      }
      // Emit in rule order regardless of resolution order.
      for (const auto &rr : rule->roles) {
        for (const auto &t : found) {
          if (t.role == rr.role) out.push_back(t);
        }
      }
      i = pred.end;
    }
  }
  return out;
}

std::vector<PATriple> AcquireTriples(const RewriteExample &example,
                                     const TripleSource &source,
                                     const HeuristicRules &rules) {
  std::vector<PATriple> triples;
  switch (source.mode) {
    case TripleMode::kNone:
      return {};
    case TripleMode::kGold:
      if (example.triples.empty()) {
        throw Error(ErrorCode::kMissingGold, "record carries no gold triples");
      }
      triples = example.triples;
      break;
    case TripleMode::kHeuristic:
      triples = ExtractHeuristicTriples(example.session, rules);
      break;
  }
  if (source.scope == TripleScope::kLastUtteranceOnly) {
    const int last = example.session.size() - 1;
    std::erase_if(triples, [last](const PATriple &t) { return t.predicate.turn != last; });
  }
  return triples;
}

}  // namespace srlrw
