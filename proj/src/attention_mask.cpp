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

#include "srlrw/attention_mask.hpp"

namespace srlrw {

std::string_view MaskVariantName(MaskVariant v) {
  switch (v) {
    case MaskVariant::kNoSrl: return "none";
    case MaskVariant::kBiMask: return "bi";
    case MaskVariant::kTripleMask: return "triple";
  }
  return "?";
}

MaskVariant ParseMaskVariant(std::string_view name) {
  if (name == "none") return MaskVariant::kNoSrl;
  if (name == "bi") return MaskVariant::kBiMask;
  if (name == "triple") return MaskVariant::kTripleMask;
  throw Error(ErrorCode::kConfigInvalid, "unknown mask variant " + std::string(name));
}

void CheckRegionLayout(const std::vector<RegionTag> &regions) {
  using Kind = RegionTag::Kind;
  for (std::size_t i = 1; i < regions.size(); ++i) {
    const auto &a = regions[i - 1];
    const auto &b = regions[i];
    if (static_cast<int>(b.kind) < static_cast<int>(a.kind) ||
        (a.kind == b.kind && a.kind != Kind::kRewrite && b.index < a.index)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "region tags out of order at " + std::to_string(i));
    }
  }
}

VisibilityMatrix BuildMask(const std::vector<RegionTag> &regions, MaskVariant variant,
                           const MaskOptions &options) {
  using Kind = RegionTag::Kind;
  CheckRegionLayout(regions);
  const int n = static_cast<int>(regions.size());
  int len_z = 0;
  while (len_z < n && regions[len_z].kind == Kind::kTriple) ++len_z;
  if (variant == MaskVariant::kNoSrl && len_z > 0) {
    throw Error(ErrorCode::kVariantMismatch,
                "NoSrl mask with " + std::to_string(len_z) + " triple tokens");
  }

  VisibilityMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Kind ki = regions[i].kind;
    for (int j = 0; j < n; ++j) {
      const Kind kj = regions[j].kind;
      bool visible = false;
      switch (ki) {
        case Kind::kRewrite:
          visible = kj != Kind::kRewrite || j <= i;
          break;
        case Kind::kContext:
          visible = kj == Kind::kContext ||
                    (kj == Kind::kTriple && options.source_mutual_visibility);
          break;
        case Kind::kTriple:
          if (kj == Kind::kTriple) {
            visible = variant != MaskVariant::kTripleMask ||
                      regions[i].index == regions[j].index;
          } else {
            visible = kj == Kind::kContext && options.source_mutual_visibility;
          }
          break;
      }
      m(i, j) = visible;
    }
  }
  return m;
}

std::string DumpMask(const VisibilityMatrix &mask) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mask.rows() * (mask.cols() + 1)));
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) out += mask(i, j) ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace srlrw
