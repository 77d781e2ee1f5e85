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

#include "srlrw/record_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace srlrw {

using nlohmann::json;

namespace {

Span SpanFromJson(const json &j) {
  return Span{j.at("turn").get<int>(), j.at("start").get<int>(),
              j.at("end").get<int>()};
}

json SpanToJson(const Span &s) {
  return json{{"turn", s.turn}, {"start", s.start}, {"end", s.end}};
}

}  // namespace

RewriteExample ParseRecord(const std::string &line) {
  RewriteExample ex;
  try {
    const json j = json::parse(line);
    int turn = 0;
    for (const auto &u : j.at("utterances")) {
      Utterance utt;
      const auto speaker = ParseSpeaker(u.at("speaker").get<std::string>());
      if (!speaker) {
        throw Error(ErrorCode::kParseError,
                    "unknown speaker " + u.at("speaker").dump());
      }
      utt.speaker = *speaker;
      utt.tokens = u.at("tokens").get<TokenList>();
      utt.turn_index = turn++;
      ex.session.utterances.push_back(std::move(utt));
    }
    if (j.contains("triples")) {
      for (const auto &t : j.at("triples")) {
        const auto role = ParseRole(t.at("role").get<std::string>());
        if (!role) {
          throw Error(ErrorCode::kParseError, "unknown role " + t.at("role").dump());
        }
        ex.triples.push_back(
            {SpanFromJson(t.at("predicate")), *role, SpanFromJson(t.at("argument"))});
      }
    }
    if (j.contains("reference")) ex.reference = j.at("reference").get<TokenList>();
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return ex;
}

std::string FormatRecord(const RewriteExample &example) {
  json utts = json::array();
  for (const auto &u : example.session.utterances) {
    utts.push_back(json{{"speaker", std::string(SpeakerName(u.speaker))},
                        {"tokens", u.tokens}});
  }
  json triples = json::array();
  for (const auto &t : example.triples) {
    triples.push_back(json{{"predicate", SpanToJson(t.predicate)},
                           {"role", std::string(RoleName(t.role))},
                           {"argument", SpanToJson(t.argument)}});
  }
  json j{{"utterances", std::move(utts)},
         {"triples", std::move(triples)},
         {"reference", example.reference}};
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

std::vector<RewriteExample> ReadRecords(std::istream &in) {
  std::vector<RewriteExample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ParseRecord(line));
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<RewriteExample> ReadRecordFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  return ReadRecords(in);
}

void WriteRecords(std::ostream &out, const std::vector<RewriteExample> &records) {
  for (const auto &r : records) out << FormatRecord(r) << '\n';
}

void WriteRecordFile(const std::filesystem::path &path,
                     const std::vector<RewriteExample> &records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path.string());
  WriteRecords(out, records);
}

}  // namespace srlrw
