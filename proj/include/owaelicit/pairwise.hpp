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

// Baseline elicitation from pairwise comparisons: the decision maker states
// which of two supported Pareto-optimal solutions it prefers, and weights
// are fitted by minimizing the total violation of those statements.

#pragma once

#include <random>
#include <utility>
#include <vector>

#include "owaelicit/core.hpp"

namespace owaelicit {

using Rng = std::mt19937_64;

struct Comparison {
  SolutionVector preferred;
  SolutionVector other;
  CostMatrix costs;
  FeasibleSet feasible_set;
};

using SolutionPair = std::pair<SolutionVector, SolutionVector>;

/// Uniform draw from the simplex W.
std::vector<double> sample_simplex(std::size_t K, Rng& rng);

/// `count` pairs of weighted-sum optimizers under independent uniform
/// scalarization vectors. Identical pairs are redrawn, at most 20 times.
std::vector<SolutionPair> generate_pairs(const CostMatrix& costs, const FeasibleSet& fs, int count,
                                         Rng& rng);

/// Judges each pair under its own perturbed copy of `true_w`; the lower
/// OWA cost wins and ties go to the first solution.
std::vector<Comparison> judge_pairs(const std::vector<SolutionPair>& pairs, const CostMatrix& costs,
                                    const FeasibleSet& fs, const WeightVector& true_w, double eps,
                                    Rng& rng);

struct AhnFit {
  WeightVector w;
  double violation = 0.0;
};

/// min sum of slacks s.t. OWA_w(other) - OWA_w(preferred) + slack >= margin.
AhnFit fit_ahn(const std::vector<Comparison>& comparisons, double margin = 1e-6);

WeightVector elicit_ahn(const std::vector<Comparison>& comparisons, double margin = 1e-6);

}  // namespace owaelicit
