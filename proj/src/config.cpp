// Copyright 2026 The owaelicit Authors
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

// TOML experiment configuration. All keys live at the top level:
//
//   problem = "selection"          # selection | assignment | knapsack
//   sweep = "S"                    # n | S | K | eps | orness
//   values = [1, 2, 4, 8]
//   n = 10
//   K = 3
//   S = 8
//   eps = 0.0
//   instances = 50
//   methods = ["pref", "altpref", "pairwise:5"]
//   seed = 7

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <toml.hpp>

#include "owaelicit/experiments.hpp"

namespace owaelicit {

namespace {

const std::set<std::string, std::less<>> kKeys = {
    "problem",       "sweep", "values", "n",    "p",
    "K",             "S",     "eps",    "instances", "methods",
    "out_of_sample", "seed",  "jobs",   "record_runtime", "explain_samples",
    "orness_width",  "altpref_time_limit",
};

double as_number(const toml::node& node, std::string_view key) {
  if (auto v = node.value<double>()) return *v;
  throw InputError(fmt::format("config key '{}' must be a number", key));
}

long long as_integer(const toml::node& node, std::string_view key) {
  if (node.is_integer()) return node.value<long long>().value();
  if (node.is_floating_point()) {
    const double d = node.value<double>().value();
    if (d == static_cast<double>(static_cast<long long>(d))) return static_cast<long long>(d);
  }
  throw InputError(fmt::format("config key '{}' must be an integer", key));
}

std::string as_string(const toml::node& node, std::string_view key) {
  if (auto v = node.value<std::string>()) return *v;
  throw InputError(fmt::format("config key '{}' must be a string", key));
}

const toml::array& as_array(const toml::node& node, std::string_view key) {
  if (const auto* a = node.as_array()) return *a;
  throw InputError(fmt::format("config key '{}' must be an array", key));
}

int as_int(const toml::node& node, std::string_view key) {
  const long long v = as_integer(node, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw InputError(fmt::format("config key '{}' is out of range", key));
  }
  return static_cast<int>(v);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_toml(std::string_view text) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw InputError(fmt::format("config: {} (line {}, column {})", e.description(), e.source().begin.line,
                                 e.source().begin.column));
  }
  ExperimentConfig cfg;
  for (const auto& [key_node, node] : table) {
    const std::string_view key = key_node.str();
    if (!kKeys.contains(key)) throw InputError(fmt::format("unknown config key '{}'", key));
    if (key == "problem") {
      cfg.problem = parse_problem(as_string(node, key));
    } else if (key == "sweep") {
      cfg.sweep = parse_sweep(as_string(node, key));
    } else if (key == "values") {
      cfg.values.clear();
      for (const auto& v : as_array(node, key)) cfg.values.push_back(as_number(v, key));
    } else if (key == "n") {
      cfg.n = as_int(node, key);
    } else if (key == "p") {
      cfg.p = as_int(node, key);
    } else if (key == "K") {
      cfg.K = as_int(node, key);
    } else if (key == "S") {
      cfg.S = as_int(node, key);
    } else if (key == "eps") {
      cfg.eps = as_number(node, key);
    } else if (key == "instances") {
      cfg.instances = as_int(node, key);
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& v : as_array(node, key)) cfg.methods.push_back(MethodSpec::parse(as_string(v, key)));
    } else if (key == "out_of_sample") {
      cfg.out_of_sample = as_int(node, key);
    } else if (key == "seed") {
      const long long s = as_integer(node, key);
      if (s < 0) throw InputError("config key 'seed' must not be negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "jobs") {
      cfg.jobs = as_int(node, key);
    } else if (key == "record_runtime") {
      if (auto b = node.value<bool>()) {
        cfg.record_runtime = *b;
      } else {
        throw InputError("config key 'record_runtime' must be true or false");
      }
    } else if (key == "explain_samples") {
      cfg.explain_samples = as_int(node, key);
    } else if (key == "orness_width") {
      cfg.orness_width = as_number(node, key);
    } else if (key == "altpref_time_limit") {
      const double limit = as_number(node, key);
      cfg.altpref_time_limit = limit > 0.0 ? std::optional<double>(limit) : std::nullopt;
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_toml(text.str());
}

}  // namespace owaelicit
