// Copyright 2026 The rsmb Authors. All Rights Reserved.
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

#include "rsmb/branch_pattern.hpp"

#include <numeric>
#include <string>

#include "rsmb/error.hpp"

namespace rsmb::branch {

BranchPattern pattern(std::size_t l, std::size_t k) {
  if (l < 1 || l > k) {
    throw Error(ErrorCode::index_out_of_range,
                "branch " + std::to_string(l) + " outside 1.." + std::to_string(k));
  }
  BranchPattern out{l, std::vector<std::size_t>(k)};
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  if (l >= 2) {
    // Identity block of size l-2, exchange block over the remaining users.
    const std::size_t fixed = l - 2;
    for (std::size_t i = fixed; i < k; ++i) out.perm[i] = k - 1 - (i - fixed);
  }
  return out;
}

std::vector<BranchPattern> patterns(std::size_t count, std::size_t k) {
  if (count < 1 || count > k) {
    throw Error(ErrorCode::index_out_of_range,
                "branch count " + std::to_string(count) + " outside 1.." + std::to_string(k));
  }
  std::vector<BranchPattern> out;
  out.reserve(count);
  for (std::size_t l = 1; l <= count; ++l) out.push_back(pattern(l, k));
  return out;
}

}  // namespace rsmb::branch
