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

#pragma once

#include <cstddef>
#include <vector>

namespace rsmb::branch {

/// One symbol-ordering branch. index is 1-based (1..K); perm is zero-based
/// with row i of the reordered channel taken from row perm[i]. Branch 1 is the
/// identity; branch l >= 2 keeps the first l-2 users and reverses the rest.
struct BranchPattern {
  std::size_t index = 1;
  std::vector<std::size_t> perm;

  friend bool operator==(const BranchPattern&, const BranchPattern&) = default;
};

/// Throws Error(index_out_of_range) unless 1 <= l <= k.
BranchPattern pattern(std::size_t l, std::size_t k);

/// Patterns 1..count; throws Error(index_out_of_range) unless 1 <= count <= k.
std::vector<BranchPattern> patterns(std::size_t count, std::size_t k);

}  // namespace rsmb::branch
