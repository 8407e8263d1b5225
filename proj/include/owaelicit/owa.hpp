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

// Forward OWA optimization over the supported feasible sets.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "owaelicit/core.hpp"
#include "owaelicit/mp/program.hpp"

namespace owaelicit {

struct OwaSolveReport {
  SolutionVector solution;
  double value = 0.0;  // owa_value of `solution`
  mp::SolveStatus status = mp::SolveStatus::optimal;
};

/// Adds one binary per solution coordinate plus the rows describing `fs`.
std::vector<mp::VarId> add_solution_variables(mp::MathProgram& program, const FeasibleSet& fs);

/// Number of solutions for_each_solution inspects (for knapsack: all 2^n
/// candidates), saturating at UINT64_MAX.
std::uint64_t count_solutions(const FeasibleSet& fs);

/// Calls `visit` for every x in X in a fixed order. Throws InputError when
/// |X| exceeds `limit`.
void for_each_solution(const FeasibleSet& fs, const std::function<void(const SolutionVector&)>& visit,
                       std::uint64_t limit = 1'000'000);

/// Minimizes OWA_w over X through the dual reformulation of the sorting
/// step. w must be non-increasing.
OwaSolveReport solve_owa(const WeightVector& w, const CostMatrix& costs, const FeasibleSet& fs);

/// Brute force over X (|X| <= 10^6); valid for any w in W. The first
/// minimizer in enumeration order is returned.
OwaSolveReport enumerate_owa(const WeightVector& w, const CostMatrix& costs, const FeasibleSet& fs);

/// Minimizer of sum_k lambda_k (c^k . x). Selection ties go to the lowest
/// item indices.
SolutionVector solve_weighted_sum(std::span<const double> lambda, const CostMatrix& costs,
                                  const FeasibleSet& fs);

/// Non-increasing weights with orness `alpha` and minimal largest gap
/// between neighbouring entries. alpha must lie in [0.5, 1].
WeightVector weights_from_orness(std::size_t K, double alpha);

struct ExplainResult {
  bool explained = false;
  /// OWA value of the observed solution minus the optimum, never negative.
  double gap = 0.0;
};

/// Whether the observed solution is OWA-optimal under w (tolerance 1e-6).
ExplainResult explains(const WeightVector& w, const Observation& obs);

}  // namespace owaelicit
