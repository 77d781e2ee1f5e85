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

#include "srlrw/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace srlrw {

using nlohmann::json;

namespace {

constexpr char kMagic[] = "SRLRW-CKPT 1\n";

void PutFloat(std::ostream &out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  const char bytes[4] = {static_cast<char>(bits & 0xff),
                         static_cast<char>((bits >> 8) & 0xff),
                         static_cast<char>((bits >> 16) & 0xff),
                         static_cast<char>((bits >> 24) & 0xff)};
  out.write(bytes, 4);
}

float GetFloat(const unsigned char *p) {
  const std::uint32_t bits = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                             (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

}  // namespace

json ModelConfigToJson(const ModelConfig &c) {
  return json{{"d_model", c.d_model},
              {"n_heads", c.n_heads},
              {"n_layers", c.n_layers},
              {"d_ff", c.d_ff},
              {"vocab_size", c.vocab_size},
              {"max_position", c.max_position},
              {"dropout", c.dropout},
              {"layer_norm_eps", c.layer_norm_eps},
              {"tie_embeddings", c.tie_embeddings},
              {"mask_variant", std::string(MaskVariantName(c.mask_variant))},
              {"source_mutual_visibility", c.mask_options.source_mutual_visibility}};
}

ModelConfig ModelConfigFromJson(const json &j) {
  ModelConfig c;
  try {
    c.d_model = j.at("d_model");
    c.n_heads = j.at("n_heads");
    c.n_layers = j.at("n_layers");
    c.d_ff = j.at("d_ff");
    c.vocab_size = j.at("vocab_size");
    c.max_position = j.at("max_position");
    c.dropout = j.at("dropout");
    c.layer_norm_eps = j.at("layer_norm_eps");
    c.tie_embeddings = j.at("tie_embeddings");
    c.mask_variant = ParseMaskVariant(j.at("mask_variant").get<std::string>());
    c.mask_options.source_mutual_visibility = j.at("source_mutual_visibility");
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kCheckpointMismatch, std::string("bad config: ") + e.what());
  }
  return c;
}

template <typename Scalar>
void SaveCheckpoint(const std::filesystem::path &path, const RewriterModel<Scalar> &model,
                    const Vocabulary &vocab) {
  const auto &params = model.params();
  json tensors = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    tensors.push_back(json{{"name", params.names[i]},
                           {"rows", params.tensors[i].rows()},
                           {"cols", params.tensors[i].cols()}});
  }
  const json header{{"config", ModelConfigToJson(model.config())},
                    {"vocab", vocab.tokens()},
                    {"tensors", std::move(tensors)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kCheckpointMismatch, "cannot write " + path.string());
  out << kMagic << header.dump() << '\n';
  for (const auto &t : params.tensors) {
    for (Eigen::Index k = 0; k < t.size(); ++k) PutFloat(out, static_cast<float>(t.data()[k]));
  }
}

template <typename Scalar>
LoadedCheckpoint<Scalar> LoadCheckpoint(const std::filesystem::path &path,
                                        const std::optional<ModelConfig> &expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kCheckpointMismatch, "cannot open " + path.string());
  std::string magic_line, header_line;
  std::getline(in, magic_line);
  if (magic_line + "\n" != kMagic) {
    throw Error(ErrorCode::kCheckpointMismatch, path.string() + " is not a checkpoint");
  }
  std::getline(in, header_line);
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kCheckpointMismatch, e.what());
  }
  const ModelConfig config = ModelConfigFromJson(header.at("config"));
  if (expected && !(*expected == config)) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "stored config differs from the requested one: " +
                    ModelConfigToJson(config).dump());
  }
  Vocabulary vocab = Vocabulary::FromTokens(header.at("vocab").get<std::vector<std::string>>());
  if (vocab.size() != config.vocab_size) {
    throw Error(ErrorCode::kCheckpointMismatch, "vocabulary size differs from config");
  }

  RewriterModel<Scalar> model(config, 0);
  auto &params = model.params();
  const auto &declared = header.at("tensors");
  if (declared.size() != params.size()) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "tensor count " + std::to_string(declared.size()) + " vs " +
                    std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto &d = declared[i];
    if (d.at("name") != params.names[i] || d.at("rows") != params.tensors[i].rows() ||
        d.at("cols") != params.tensors[i].cols()) {
      throw Error(ErrorCode::kCheckpointMismatch, "tensor " + d.dump() + " does not match " +
                                                      params.names[i]);
    }
  }
  const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (body.size() != static_cast<std::size_t>(params.count()) * 4) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "expected " + std::to_string(params.count() * 4) + " data bytes, found " +
                    std::to_string(body.size()));
  }
  const auto *p = reinterpret_cast<const unsigned char *>(body.data());
  for (auto &t : params.tensors) {
    for (Eigen::Index k = 0; k < t.size(); ++k, p += 4) t.data()[k] = Scalar(GetFloat(p));
  }
  return {std::move(model), std::move(vocab)};
}

template void SaveCheckpoint(const std::filesystem::path &, const RewriterModel<float> &,
                             const Vocabulary &);
template void SaveCheckpoint(const std::filesystem::path &, const RewriterModel<double> &,
                             const Vocabulary &);
template LoadedCheckpoint<float> LoadCheckpoint(const std::filesystem::path &,
                                                const std::optional<ModelConfig> &);
template LoadedCheckpoint<double> LoadCheckpoint(const std::filesystem::path &,
                                                 const std::optional<ModelConfig> &);

}  // namespace srlrw
