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

// Solution-based elicitation: choose w in W' so that the solutions it makes
// optimal are as close as possible, in Hamming distance, to the observed
// ones. Each round solves one mixed-binary program over all observations;
// rounds add OWA-optimal solutions as cuts until the chosen solutions are
// optimal under the chosen w.

#pragma once

#include <optional>
#include <vector>

#include "owaelicit/core.hpp"
#include "owaelicit/elicit.hpp"

namespace owaelicit {

struct AltElicitOptions {
  double cut_tolerance = 1e-6;
  int max_iterations = 50;
  /// Wall-clock limit per mixed-binary solve, in seconds.
  std::optional<double> time_limit = 100.0;
  /// Also try the distance model's answer as a starting point.
  bool seed_with_pref = true;
  ProgressHook progress;

  void validate() const;
};

enum class AltStatus { optimal, time_limit_incumbent, iteration_limit };

const char* to_string(AltStatus status);

struct AltElicitationResult {
  WeightVector w;
  /// Solution reproduced for each observation (optimal under w).
  std::vector<SolutionVector> solutions;
  int total_hamming = 0;
  CutPools pools;
  int iterations = 0;
  long long nodes = 0;
  AltStatus status = AltStatus::optimal;
  double wall_seconds = 0.0;
};

AltElicitationResult elicit_altpref(const std::vector<Observation>& observations,
                                    const AltElicitOptions& opts = {});

}  // namespace owaelicit
