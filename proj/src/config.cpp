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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "rsmb/error.hpp"
#include "rsmb/experiment.hpp"
#include "rsmb/format.hpp"

namespace rsmb::experiment {
namespace {

[[noreturn]] void invalid(std::string_view key, const std::string& why) {
  throw Error(ErrorCode::config_invalid, "key '" + std::string(key) + "': " + why);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    invalid(key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    invalid(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_double(key, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  std::string v(trim(text));
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  invalid(key, "expected a boolean, got '" + v + "'");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void assign(ScenarioConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "K") {
    c.K = parse_unsigned(key, value);
  } else if (key == "Nt") {
    c.Nt = parse_unsigned(key, value);
  } else if (key == "scheme") {
    if (value == "dthp") c.scheme = thp::Scheme::decentralized;
    else if (value == "cthp") c.scheme = thp::Scheme::centralized;
    else invalid(key, "expected dthp or cthp");
  } else if (key == "criterion") {
    if (value == "es") c.criterion = rates::Criterion::es;
    else if (value == "fpa") c.criterion = rates::Criterion::fpa;
    else if (value == "fb") c.criterion = rates::Criterion::fb;
    else if (value == "none") c.criterion = rates::Criterion::none;
    else invalid(key, "expected es, fpa, fb or none");
  } else if (key == "rs") {
    c.rs = parse_bool(key, value);
  } else if (key == "L") {
    c.L = parse_unsigned(key, value);
  } else if (key == "snr_db") {
    c.snr_db = parse_list(key, value);
  } else if (key == "sigma_n2") {
    c.sigma_n2 = parse_double(key, value);
  } else if (key == "error_mode") {
    if (value == "scaling") c.error_model.mode = channel::ErrorMode::scaling;
    else if (value == "fixed") c.error_model.mode = channel::ErrorMode::fixed;
    else invalid(key, "expected scaling or fixed");
  } else if (key == "error_a") {
    c.error_model.a = parse_double(key, value);
  } else if (key == "error_alpha") {
    c.error_model.alpha = parse_double(key, value);
  } else if (key == "sigma_e2") {
    c.error_model.sigma_e2_fixed = parse_double(key, value);
  } else if (key == "delta_grid") {
    c.delta_grid = parse_list(key, value);
  } else if (key == "n_estimates") {
    c.n_estimates = parse_unsigned(key, value);
  } else if (key == "n_err") {
    c.n_err = parse_unsigned(key, value);
  } else if (key == "n_cal") {
    c.n_cal = parse_unsigned(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else {
    invalid(key, "unknown key");
  }
}

void apply_line(ScenarioConfig& c, std::string_view line) {
  const std::size_t eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::config_invalid, "expected key=value, got '" + std::string(line) + "'");
  }
  const std::string_view key = trim(line.substr(0, eq));
  if (key.empty()) throw Error(ErrorCode::config_invalid, "empty key in '" + std::string(line) + "'");
  assign(c, key, line.substr(eq + 1));
}

}  // namespace

std::string_view to_string(thp::Scheme scheme) noexcept {
  return scheme == thp::Scheme::decentralized ? "dthp" : "cthp";
}

std::string_view to_string(rates::Criterion criterion) noexcept {
  switch (criterion) {
    case rates::Criterion::es: return "es";
    case rates::Criterion::fpa: return "fpa";
    case rates::Criterion::fb: return "fb";
    case rates::Criterion::none: return "none";
  }
  return "none";
}

void validate(const ScenarioConfig& c) {
  if (c.K < 2) invalid("K", "must be >= 2");
  if (c.Nt < c.K) invalid("Nt", "must be >= K (" + std::to_string(c.K) + ")");
  if (c.L < 1 || c.L > c.K) invalid("L", "must lie in 1..K");
  if (c.snr_db.empty()) invalid("snr_db", "list must not be empty");
  if (!(c.sigma_n2 > 0.0)) invalid("sigma_n2", "must be > 0");
  if (!(c.error_model.a > 0.0)) invalid("error_a", "must be > 0");
  if (!(c.error_model.alpha >= 0.0)) invalid("error_alpha", "must be >= 0");
  if (!(c.error_model.sigma_e2_fixed >= 0.0)) invalid("sigma_e2", "must be >= 0");
  if (c.delta_grid.empty()) invalid("delta_grid", "list must not be empty");
  for (double d : c.delta_grid) {
    if (!(d >= 0.0 && d < 1.0)) invalid("delta_grid", "entries must lie in [0, 1)");
  }
  if (c.n_estimates < 1) invalid("n_estimates", "must be >= 1");
  if (c.n_err < 1) invalid("n_err", "must be >= 1");
  if (c.n_cal < 1) invalid("n_cal", "must be >= 1");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) apply_line(c, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  validate(c);
  return c;
}

void apply_setting(ScenarioConfig& config, std::string_view assignment) {
  ScenarioConfig next = config;
  apply_line(next, trim(assignment));
  config = std::move(next);
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "K=" << c.K << '\n'
      << "Nt=" << c.Nt << '\n'
      << "scheme=" << to_string(c.scheme) << '\n'
      << "criterion=" << to_string(c.criterion) << '\n'
      << "rs=" << (c.rs ? 1 : 0) << '\n'
      << "L=" << c.L << '\n'
      << "snr_db=" << join(c.snr_db) << '\n'
      << "sigma_n2=" << format_double(c.sigma_n2) << '\n'
      << "error_mode=" << (c.error_model.mode == channel::ErrorMode::scaling ? "scaling" : "fixed")
      << '\n'
      << "error_a=" << format_double(c.error_model.a) << '\n'
      << "error_alpha=" << format_double(c.error_model.alpha) << '\n'
      << "sigma_e2=" << format_double(c.error_model.sigma_e2_fixed) << '\n'
      << "delta_grid=" << join(c.delta_grid) << '\n'
      << "n_estimates=" << c.n_estimates << '\n'
      << "n_err=" << c.n_err << '\n'
      << "n_cal=" << c.n_cal << '\n'
      << "seed=" << c.seed << '\n';
  return out.str();
}

}  // namespace rsmb::experiment
