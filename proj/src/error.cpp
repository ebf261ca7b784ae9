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

#include "rsmb/error.hpp"

namespace rsmb {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::rank_deficient: return "RankDeficient";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::invalid_permutation: return "InvalidPermutation";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::no_private_power: return "NoPrivatePower";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace rsmb
