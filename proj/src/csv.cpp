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

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rsmb/error.hpp"
#include "rsmb/experiment.hpp"
#include "rsmb/format.hpp"

namespace rsmb {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace rsmb

namespace rsmb::experiment {

void write_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.criterion << ',' << format_double(r.snr_db) << ','
        << format_double(r.sigma_e2) << ',' << format_double(r.esr) << ','
        << format_double(r.common_part) << ',' << format_double(r.private_part) << ','
        << format_double(r.std_error) << ',' << format_double(r.mean_delta) << ',';
    for (std::size_t l = 0; l < r.branch_histogram.size(); ++l) {
      if (l > 0) out << '|';
      out << l + 1 << ':' << r.branch_histogram[l];
    }
    out << '\n';
  }
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

void write_csv(std::span<const SweepRow> rows, const std::filesystem::path& destination) {
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::io_failure, "cannot open " + destination.string());
  write_csv(rows, file);
  file.flush();
  if (!file) throw Error(ErrorCode::io_failure, "write failed for " + destination.string());
}

}  // namespace rsmb::experiment
