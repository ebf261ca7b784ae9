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

#include "rsmb/rng.hpp"

#include <array>

namespace rsmb {

Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial, StreamPurpose purpose) {
  const std::array<std::uint32_t, 5> words{
      static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
      static_cast<std::uint32_t>(purpose)};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace rsmb
