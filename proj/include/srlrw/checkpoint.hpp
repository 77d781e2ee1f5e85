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

#ifndef SRLRW_CHECKPOINT_HPP_
#define SRLRW_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "srlrw/model.hpp"
#include "srlrw/vocabulary.hpp"

namespace srlrw {

nlohmann::json ModelConfigToJson(const ModelConfig &config);
ModelConfig ModelConfigFromJson(const nlohmann::json &j);

// File layout:
//   "SRLRW-CKPT 1\n"
//   one line of JSON: {"config": {...}, "vocab": [...],
//                      "tensors": [{"name", "rows", "cols"}, ...]}
//   every tensor's values, row-major, as little-endian IEEE-754 binary32,
//   in the declared order.
template <typename Scalar>
void SaveCheckpoint(const std::filesystem::path &path, const RewriterModel<Scalar> &model,
                    const Vocabulary &vocab);

template <typename Scalar>
struct LoadedCheckpoint {
  RewriterModel<Scalar> model;
  Vocabulary vocab;
};

// Throws CHECKPOINT_MISMATCH when the stored tensors disagree with the stored
// config, or with `expected` when given.
template <typename Scalar>
LoadedCheckpoint<Scalar> LoadCheckpoint(const std::filesystem::path &path,
                                        const std::optional<ModelConfig> &expected = {});

}  // namespace srlrw

#endif  // SRLRW_CHECKPOINT_HPP_
