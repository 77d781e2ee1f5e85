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

#include "srlrw/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "srlrw/core_types.hpp"

namespace srlrw {

namespace {

std::string Hex(const unsigned char *data, unsigned int n) {
  static const char *kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 15];
  }
  return out;
}

}  // namespace

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &n, EVP_sha256(), nullptr)) {
    throw std::runtime_error("SHA-256 failed");
  }
  return Hex(digest, n);
}

std::string Sha256File(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Sha256Hex(ss.str());
}

void RunManifest::AddInput(const std::filesystem::path &path) {
  inputs.push_back({path.string(), Sha256File(path)});
}

void RunManifest::AddOutput(const std::filesystem::path &path) {
  outputs.push_back({path.string(), Sha256File(path)});
}

nlohmann::ordered_json RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["config"] = config;
  j["seeds"] = nlohmann::ordered_json::object();
  for (const auto &[name, s] : seeds) j["seeds"][name] = s;
  auto files = [](const std::vector<FileDigest> &list) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto &f : list) a.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return a;
  };
  j["inputs"] = files(inputs);
  j["outputs"] = files(outputs);
  return j;
}

RunManifest RunManifest::FromJson(const nlohmann::json &j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.config = nlohmann::ordered_json::parse(j.at("config").dump());
    for (const auto &[name, s] : j.at("seeds").items()) m.seeds[name] = s.get<std::uint64_t>();
    for (const auto &f : j.at("inputs")) m.inputs.push_back({f.at("path"), f.at("sha256")});
    for (const auto &f : j.at("outputs")) m.outputs.push_back({f.at("path"), f.at("sha256")});
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParseError, std::string("bad manifest: ") + e.what());
  }
  return m;
}

void RunManifest::Write(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path.string());
  out << ToJson().dump(2) << '\n';
}

RunManifest RunManifest::Read(const std::filesystem::path &path, bool verify) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParseError, std::string("bad manifest: ") + e.what());
  }
  RunManifest m = FromJson(j);
  if (verify) {
    for (const auto *list : {&m.inputs, &m.outputs}) {
      for (const auto &f : *list) {
        if (Sha256File(f.path) != f.sha256) {
          throw Error(ErrorCode::kCheckpointMismatch, "digest mismatch for " + f.path);
        }
      }
    }
  }
  return m;
}

}  // namespace srlrw
