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

// Synthetic experiments: random instances, a noisy simulated decision
// maker, evaluation metrics and parameter sweeps written as CSV.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "owaelicit/core.hpp"

namespace owaelicit {

using Rng = std::mt19937_64;

enum class ProblemKind { selection, assignment, knapsack };

ProblemKind parse_problem(std::string_view name);
std::string_view to_string(ProblemKind kind);

/// Size of a generated problem. `n` is the number of items, or the side
/// of the assignment matrix; `p` is used by selection only.
struct ProblemShape {
  ProblemKind kind = ProblemKind::selection;
  int n = 40;
  int p = 20;
  std::size_t K = 5;

  void validate() const;
};

/// One decision situation: costs plus feasible set.
struct Situation {
  CostMatrix costs;
  FeasibleSet feasible_set;
};

/// Integer costs uniform on 1..100, min-max normalized per scenario.
/// Assignment problems get n*n columns.
CostMatrix generate_costs(ProblemKind kind, int n, std::size_t K, Rng& rng);

/// Costs, then (knapsack only) item weights uniform on [0.7, 1.3] with
/// capacity half their sum.
Situation generate_situation(const ProblemShape& shape, Rng& rng);

/// Adds U[max(-w_k, -eps), eps] to every entry, renormalizes and sorts.
/// eps = 0 returns `w` without drawing.
WeightVector perturb_weights(const WeightVector& w, double eps, Rng& rng);

/// S situations, each solved under its own perturbed copy of `true_w`.
std::vector<Observation> simulate_observations(const WeightVector& true_w, const ProblemShape& shape,
                                               int S, double eps, Rng& rng);

/// Uniform draw from W' (a sorted uniform simplex point).
WeightVector sample_risk_averse(std::size_t K, Rng& rng);

struct Evaluation {
  double w_dist_2 = 0.0;
  double in_hamming = 0.0;
  double out_hamming = 0.0;
};

/// Preference distance, in-sample Hamming against the observed solutions
/// and out-of-sample Hamming against the optima under the clean `true_w`.
Evaluation evaluate(const WeightVector& w_hat, const WeightVector& true_w,
                    const std::vector<Observation>& observations,
                    const std::vector<Situation>& out_sample);

/// Fraction of `samples` uniform W' vectors that explain every observation.
double explain_ratio(const std::vector<Observation>& observations, int samples, Rng& rng);

bool is_worst_case(const WeightVector& w);

enum class SweepParam { n, S, K, eps, orness };

SweepParam parse_sweep(std::string_view name);
std::string_view to_string(SweepParam param);

struct MethodSpec {
  enum class Kind { pref, altpref, compact, pairwise };
  Kind kind = Kind::pref;
  /// Comparisons per observation, pairwise only.
  int comparisons = 0;

  /// "pref", "altpref", "compact" or "pairwise:<c>".
  static MethodSpec parse(std::string_view text);
  std::string label() const;
};

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::selection;
  SweepParam sweep = SweepParam::S;
  std::vector<double> values;
  int n = 40;
  /// Selection size; n/2 when unset or when n is swept.
  std::optional<int> p;
  int K = 5;
  int S = 16;
  double eps = 0.0;
  int instances = 50;
  std::vector<MethodSpec> methods;
  int out_of_sample = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
  /// Fill runtime_ms; off by default so that reruns give identical files.
  bool record_runtime = false;
  /// Random W' vectors per instance for the explain-ratio sidecar; 0 = off.
  int explain_samples = 0;
  /// Orness sweep: true orness uniform on [v, min(v + width, 1)].
  double orness_width = 0.0;
  /// Per-solve time limit handed to the Hamming model, seconds.
  std::optional<double> altpref_time_limit = 100.0;

  void validate() const;
  static ExperimentConfig parse_toml(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct MetricsRow {
  std::string problem;
  std::string sweep_param;
  double sweep_value = 0.0;
  int n = 0;
  int p = 0;
  int K = 0;
  int S = 0;
  double eps = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  double w_dist_2 = 0.0;
  double in_hamming = 0.0;
  double out_hamming = 0.0;
  double elicited_orness = 0.0;
  bool is_worstcase_vector = false;
  double runtime_ms = 0.0;
  int iterations = 0;
};

struct ExplainRow {
  double sweep_value = 0.0;
  int instance = 0;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<ExplainRow> explain;
};

/// Called after each finished instance with (done, total).
using ExperimentProgress = std::function<void(int, int)>;

/// Rows are ordered by sweep value, instance and method whatever `jobs` is.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentProgress& progress = {});

/// Seed of instance `instance` at sweep point `point`.
std::uint64_t instance_seed(std::uint64_t master, std::size_t point, std::size_t instance);

struct MethodRun {
  WeightVector w;
  int iterations = 0;
};

/// Fits one method to `observations`. Pairwise methods query the simulated
/// decision maker (`true_w`, `eps`) and draw from `rng`.
MethodRun run_method(const MethodSpec& method, const std::vector<Observation>& observations,
                     const WeightVector& true_w, double eps, Rng& rng,
                     std::optional<double> altpref_time_limit = 100.0);

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_explain_csv(std::ostream& out, const std::vector<ExplainRow>& rows);

}  // namespace owaelicit
