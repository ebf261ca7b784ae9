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

#include <cstdint>
#include <random>

namespace rsmb {

using Rng = std::mt19937_64;

// What a derived stream is used for. Values are part of the reproducibility
// contract: changing them changes every result for a given master seed.
enum class StreamPurpose : std::uint32_t {
  estimate = 1,
  error = 2,
  calibration_estimate = 3,
  calibration_error = 4,
  validation = 5,
};

/// Independent stream for (master_seed, trial, purpose); a pure function of
/// its arguments, so any trial can be replayed in isolation.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial, StreamPurpose purpose);

}  // namespace rsmb
