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

#ifndef SRLRW_MANIFEST_HPP_
#define SRLRW_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace srlrw {

inline constexpr const char *kToolVersion = "srlrw 0.1.0";

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path &path);
std::string Sha256Hex(std::string_view bytes);

struct FileDigest {
  std::string path;
  std::string sha256;
};

// What a command ran with and what it read and wrote. Carries no timestamps,
// so re-running a command with the same inputs reproduces it byte for byte.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::map<std::string, std::uint64_t> seeds;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::string tool_version = kToolVersion;

  void AddInput(const std::filesystem::path &path);
  void AddOutput(const std::filesystem::path &path);

  nlohmann::ordered_json ToJson() const;
  static RunManifest FromJson(const nlohmann::json &j);

  void Write(const std::filesystem::path &path) const;
  // Throws CHECKPOINT_MISMATCH when a listed file's digest no longer matches.
  static RunManifest Read(const std::filesystem::path &path, bool verify = true);
};

}  // namespace srlrw

#endif  // SRLRW_MANIFEST_HPP_
