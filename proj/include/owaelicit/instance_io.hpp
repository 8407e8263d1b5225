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

// Instance files: a set of observations plus, for simulated data, the
// generating preference vector.
//
//   {"problem": "selection", "n": 10, "p": 5, "K": 3, "S": 2,
//    "true_w": [0.5, 0.3, 0.2],
//    "observations": [{"costs": [[...], ...], "chosen": [0, 1, ...]}, ...]}
//
// Knapsack observations carry their own "weights" and "capacity"; a
// top-level pair applies to observations without one.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "owaelicit/core.hpp"
#include "owaelicit/experiments.hpp"

namespace owaelicit {

struct Instance {
  ProblemKind problem = ProblemKind::selection;
  int n = 0;
  int p = 0;
  std::size_t K = 0;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<WeightVector> true_w;
  std::vector<Observation> observations;
};

struct GenerateOptions {
  ProblemShape shape;
  int S = 16;
  double eps = 0.0;
  std::uint64_t seed = 1;
  /// Orness of the generating vector; uniform on [0.5, 1] when unset.
  std::optional<double> orness;
};

Instance generate_instance(const GenerateOptions& opts);

std::string instance_to_json(const Instance& instance);
/// Throws InputError on malformed or inconsistent content.
Instance instance_from_json(std::string_view text);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& instance);

/// Reads a weight vector file: a JSON array, or an object with a "w" array.
WeightVector read_weights(const std::filesystem::path& path);

}  // namespace owaelicit
