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

// Distance-based elicitation: find w in W' closest (summed over the
// observations) to the sets of weight vectors under which each observed
// solution is OWA-optimal. Solved by constraint generation: a master LP over
// finite solution pools, separated with OWA minimization.

#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "owaelicit/core.hpp"

namespace owaelicit {

/// How observations that no vector in W' can explain are handled.
enum class InfeasibilityStrategy {
  /// Each observation gets its own minimal violation, computed first and
  /// then fixed in the master.
  lexicographic,
  /// Violations are master variables penalized by a large weight.
  weighted_slack,
};

struct ProgressEvent {
  std::string_view model;
  int iteration = 0;
  double objective = 0.0;
  int cuts_added = 0;
};

using ProgressHook = std::function<void(const ProgressEvent&)>;

struct ElicitOptions {
  Norm norm = Norm::one;  // one or inf
  double cut_tolerance = 1e-6;
  int max_iterations = 200;
  /// Wall-clock limit for each master solve, in seconds.
  std::optional<double> time_limit;
  InfeasibilityStrategy infeasibility = InfeasibilityStrategy::lexicographic;
  double slack_weight = 1e6;
  /// After convergence, pick the least-orness vector among the optimal ones.
  bool minimize_orness = false;
  ProgressHook progress;

  /// Throws InputError on non-positive tolerances or an unsupported norm.
  void validate() const;
};

/// Finite solution pools X'_s, one per observation.
using CutPools = std::vector<std::vector<SolutionVector>>;

struct ElicitationResult {
  WeightVector w;
  /// Closest explaining vector per observation.
  std::vector<WeightVector> per_observation;
  /// OWA-optimal solution of every observation's situation under w.
  std::vector<SolutionVector> solutions;
  /// Sum over observations of the distance between w and its vector.
  double objective = 0.0;
  std::vector<double> infeasibility;
  CutPools pools;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;

  std::vector<std::size_t> pool_sizes() const;
};

struct MasterSolution {
  WeightVector w;
  std::vector<WeightVector> per_observation;
  double objective = 0.0;
};

/// One master solve over fixed pools. `slacks`, when given, relaxes each
/// observation's optimality rows by that amount. Returns nullopt when the
/// restricted problem is infeasible.
std::optional<MasterSolution> solve_master(const std::vector<Observation>& observations,
                                           const CutPools& pools,
                                           const std::optional<std::vector<double>>& slacks,
                                           const ElicitOptions& opts);

/// Smallest amount by which the observed solution must be allowed to lose
/// against the optimum so that some w in W' rationalizes it; zero when the
/// observation is explainable.
double compute_infeas(const Observation& obs, const ElicitOptions& opts);

/// Initial pools: every observed solution that is feasible for an
/// observation's set joins that observation's pool, its own first.
CutPools initial_pools(const std::vector<Observation>& observations);

ElicitationResult elicit_pref(const std::vector<Observation>& observations,
                              const ElicitOptions& opts = {});

/// Objective of the distance model with w held fixed, by the same cut loop
/// seeded with `pools`. `slacks` as in solve_master.
double pref_objective_at(const WeightVector& w, const std::vector<Observation>& observations,
                         const CutPools& pools, const std::optional<std::vector<double>>& slacks,
                         const ElicitOptions& opts = {});

/// Common input checks: nonempty, equal K, valid observations.
void validate_observations(const std::vector<Observation>& observations);

/// Clamps, renormalizes and sorts a raw solver vector into W'.
WeightVector to_risk_averse(std::vector<double> raw);

}  // namespace owaelicit
