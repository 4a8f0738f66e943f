// Copyright 2026 The mtsa Authors.
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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "mtsa/errors.h"
#include "mtsa/report.h"
#include "mtsa/training.h"

namespace mtsa {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
  return v;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void TrainConfig::Validate() const {
  if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
  if (patience == 0) throw ConfigError("patience must be positive");
  if (patience >= max_epochs) {
    throw ConfigError("patience must be smaller than max_epochs");
  }
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("dropout must lie in [0, 1)");
  }
  if (!(grad_norm_cap > 0.0)) {
    throw ConfigError("grad_norm_cap must be positive");
  }
  if (!(l2_lambda >= 0.0)) throw ConfigError("l2_lambda must be >= 0");
  bool known = false;
  for (const char* m : kReportedMetrics) known = known || monitored_metric == m;
  if (!known) {
    throw ConfigError("unknown monitored_metric '" + monitored_metric + "'");
  }
}

TrainConfig ParseTrainConfig(std::istream& in) {
  TrainConfig c;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = Trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value");
    }
    const std::string key = Trim(std::string_view(body).substr(0, eq));
    const std::string value = Trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }
    if (key == "max_epochs") {
      c.max_epochs = ParseNumber<std::size_t>(key, value);
    } else if (key == "patience") {
      c.patience = ParseNumber<std::size_t>(key, value);
    } else if (key == "batch_size") {
      c.batch_size = ParseNumber<std::size_t>(key, value);
    } else if (key == "learning_rate") {
      c.learning_rate = ParseNumber<double>(key, value);
    } else if (key == "dropout") {
      c.dropout = ParseNumber<double>(key, value);
    } else if (key == "grad_norm_cap") {
      c.grad_norm_cap = ParseNumber<double>(key, value);
    } else if (key == "l2_lambda") {
      c.l2_lambda = ParseNumber<double>(key, value);
    } else if (key == "seed") {
      c.seed = ParseNumber<std::uint64_t>(key, value);
    } else if (key == "monitored_metric") {
      c.monitored_metric = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

TrainConfig ReadTrainConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return ParseTrainConfig(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string FormatTrainConfig(const TrainConfig& c) {
  std::ostringstream out;
  out << "max_epochs=" << c.max_epochs << "\n"
      << "patience=" << c.patience << "\n"
      << "batch_size=" << c.batch_size << "\n"
      << "learning_rate=" << FormatDouble(c.learning_rate) << "\n"
      << "dropout=" << FormatDouble(c.dropout) << "\n"
      << "grad_norm_cap=" << FormatDouble(c.grad_norm_cap) << "\n"
      << "l2_lambda=" << FormatDouble(c.l2_lambda) << "\n"
      << "seed=" << c.seed << "\n"
      << "monitored_metric=" << c.monitored_metric << "\n";
  return out.str();
}

}  // namespace mtsa
