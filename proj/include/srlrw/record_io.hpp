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

#ifndef SRLRW_RECORD_IO_HPP_
#define SRLRW_RECORD_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "srlrw/core_types.hpp"

namespace srlrw {

// Line-delimited records, one JSON object per line:
//   {"utterances":[{"speaker":"A","tokens":[..]}, ..],
//    "triples":[{"predicate":{"turn":t,"start":s,"end":e},"role":"ARG0",
//                "argument":{..}}, ..],
//    "reference":[..]}
// `triples` and `reference` may be omitted. Turn indices are taken from the
// array position.
RewriteExample ParseRecord(const std::string &line);
std::string FormatRecord(const RewriteExample &example);

std::vector<RewriteExample> ReadRecords(std::istream &in);
std::vector<RewriteExample> ReadRecordFile(const std::filesystem::path &path);

void WriteRecords(std::ostream &out, const std::vector<RewriteExample> &records);
void WriteRecordFile(const std::filesystem::path &path,
                     const std::vector<RewriteExample> &records);

}  // namespace srlrw

#endif  // SRLRW_RECORD_IO_HPP_
