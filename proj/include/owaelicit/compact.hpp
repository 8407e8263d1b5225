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

// Compact HEURISTIC for distance-based elicitation. When X has an integral
// LP description {x >= 0 : Ax >= b}, the optimal OWA value of each
// observation is bounded through LP duality inside a single program, with
// the products w_j * pi_jk replaced by McCormick variables. The result is
// not equivalent to the exact cut-generation model.

#pragma once

#include <optional>
#include <vector>

#include "owaelicit/core.hpp"
#include "owaelicit/elicit.hpp"

namespace owaelicit {

/// X_LP = {x >= 0 : A x >= b}; rows of `A` are dense over the items.
struct PolyhedralEncoding {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  bool integral = false;

  std::size_t rows() const { return A.size(); }
};

/// Selection and Assignment only; throws InputError for a knapsack.
PolyhedralEncoding encode_polyhedron(const FeasibleSet& fs);

struct CompactOptions {
  /// Adds the lower envelope tau >= w + pi - 1 to the two upper ones.
  bool tight_mccormick = false;
  std::optional<double> time_limit;
};

/// One LP over all observations. `objective` is the program's summed
/// 1-norm distance; `pools` stay empty and `iterations` is 1. Throws
/// SolverError when the program is infeasible.
ElicitationResult elicit_compact(const std::vector<Observation>& observations,
                                 const CompactOptions& opts = {});

}  // namespace owaelicit
