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

#ifndef SRLRW_ATTENTION_MASK_HPP_
#define SRLRW_ATTENTION_MASK_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "srlrw/sequence_builder.hpp"

namespace srlrw {

enum class MaskVariant { kNoSrl, kBiMask, kTripleMask };

std::string_view MaskVariantName(MaskVariant v);
MaskVariant ParseMaskVariant(std::string_view name);

// M(i, j) is true iff token i may attend token j.
using VisibilityMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct MaskOptions {
  // Triple tokens and context tokens see each other. Turning this off confines
  // z to itself (and c to itself) for ablation.
  bool source_mutual_visibility = true;

  bool operator==(const MaskOptions &) const = default;
};

// Visibility for a [z][c][r] layout:
//   r -> z, c     always;     r -> r  iff j <= i
//   c -> c, z     always;     c -> r  never
//   z -> z        BiMask: always, TripleMask: same triple only
//   z -> c        always;     z -> r  never
VisibilityMatrix BuildMask(const std::vector<RegionTag> &regions, MaskVariant variant,
                           const MaskOptions &options = {});

// Throws SHAPE_MISMATCH unless tags run [triples][context][rewrite] with
// non-decreasing triple indices.
void CheckRegionLayout(const std::vector<RegionTag> &regions);

// 0 where visible, `neg_value` where blocked.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> MaskToAdditive(
    const VisibilityMatrix &mask, Scalar neg_value) {
  return mask.select(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
                         mask.rows(), mask.cols()),
                     Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(
                         mask.rows(), mask.cols(), neg_value));
}

// Default blocking constant: finite so that gradients stay finite.
template <typename Scalar>
constexpr Scalar kMaskNegative = Scalar(-1e9);

// Rows of '0'/'1' characters.
std::string DumpMask(const VisibilityMatrix &mask);

}  // namespace srlrw

#endif  // SRLRW_ATTENTION_MASK_HPP_
