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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "owaelicit/altpref.hpp"
#include "owaelicit/elicit.hpp"
#include "owaelicit/experiments.hpp"
#include "owaelicit/instance_io.hpp"
#include "owaelicit/owa.hpp"

using namespace owaelicit;

namespace {

std::string csv_of(const ExperimentConfig& cfg) {
  std::ostringstream out;
  write_csv(out, run_experiment(cfg).rows);
  return out.str();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.sweep = SweepParam::S;
  cfg.values = {1, 2, 4, 8};
  cfg.n = 8;
  cfg.K = 3;
  cfg.instances = 10;
  cfg.out_of_sample = 10;
  cfg.seed = 7;
  cfg.methods = {MethodSpec::parse("pref"), MethodSpec::parse("pairwise:2")};
  return cfg;
}

}  // namespace

TEST(GenerateCosts, RowsAreNormalized) {
  Rng rng(1);
  for (auto kind : {ProblemKind::selection, ProblemKind::assignment, ProblemKind::knapsack}) {
    const auto c = generate_costs(kind, 4, 3, rng);
    EXPECT_EQ(c.items(), kind == ProblemKind::assignment ? 16u : 4u);
    for (std::size_t k = 0; k < c.scenarios(); ++k) {
      const auto r = c.row(k);
      EXPECT_EQ(*std::min_element(r.begin(), r.end()), 0.0);
      EXPECT_EQ(*std::max_element(r.begin(), r.end()), 1.0);
    }
  }
}

TEST(GenerateCosts, FixedSeedRepeats) {
  Rng a(42);
  Rng b(42);
  const auto x = generate_costs(ProblemKind::selection, 10, 5, a);
  const auto y = generate_costs(ProblemKind::selection, 10, 5, b);
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(x(k, i), y(k, i));
  }
}

TEST(GenerateSituation, KnapsackCapacityIsHalfTheWeight) {
  Rng rng(3);
  const auto sit = generate_situation({ProblemKind::knapsack, 12, 0, 3}, rng);
  const auto& ks = std::get<MinKnapsack>(sit.feasible_set.variant());
  double total = 0.0;
  for (double w : ks.weights) {
    EXPECT_GE(w, 0.7);
    EXPECT_LE(w, 1.3);
    total += w;
  }
  EXPECT_DOUBLE_EQ(ks.capacity, 0.5 * total);
}

TEST(PerturbWeights, ZeroNoiseIsIdentity) {
  Rng rng(1);
  const WeightVector w{0.6, 0.3, 0.1};
  EXPECT_EQ(perturb_weights(w, 0.0, rng), w);
}

TEST(PerturbWeights, OutputIsRiskAverse) {
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const auto w = perturb_weights(WeightVector{0.7, 0.2, 0.1, 0.0}, 0.5, rng);
    EXPECT_TRUE(w.is_risk_averse());
  }
  for (int t = 0; t < 200; ++t) EXPECT_GE(perturb_weights(WeightVector{1.0, 0.0}, 1.0, rng)[0], 0.5);
  EXPECT_THROW(perturb_weights(WeightVector{1.0, 0.0}, 1.5, rng), InputError);
}

// Once eps reaches the smallest entry the lower clamp binds everywhere and
// the perturbed vector is a sorted uniform draw, so the mean levels off.
TEST(PerturbWeights, MeanOrnessGrowsWithNoiseThenLevelsOff) {
  Rng rng(5);
  const auto w = WeightVector::uniform(4);
  auto mean_orness = [&](double eps) {
    double total = 0.0;
    for (int i = 0; i < 10000; ++i) total += orness(perturb_weights(w, eps, rng));
    return total / 10000;
  };
  double previous = orness(w);
  for (double eps : {0.05, 0.1, 0.2, 0.25}) {
    const double mean = mean_orness(eps);
    EXPECT_GT(mean, previous) << eps;
    previous = mean;
  }
  for (double eps : {0.5, 1.0}) EXPECT_NEAR(mean_orness(eps), previous, 0.01) << eps;
}

TEST(SimulateObservations, NoiseFreeObservationsAreExplained) {
  Rng rng(8);
  const auto w = weights_from_orness(4, 0.7);
  for (auto kind : {ProblemKind::selection, ProblemKind::assignment, ProblemKind::knapsack}) {
    const ProblemShape shape{kind, kind == ProblemKind::assignment ? 3 : 8, 4, 4};
    for (const auto& o : simulate_observations(w, shape, 5, 0.0, rng)) {
      EXPECT_EQ(explains(w, o).gap, 0.0);
    }
  }
}

TEST(SimulateObservations, BasicSettingShapes) {
  Rng rng(16);
  const auto obs = simulate_observations(weights_from_orness(5, 0.8), {ProblemKind::selection, 40, 20, 5}, 16,
                                         0.0, rng);
  ASSERT_EQ(obs.size(), 16u);
  for (const auto& o : obs) {
    EXPECT_EQ(o.costs.scenarios(), 5u);
    EXPECT_EQ(o.costs.items(), 40u);
  }
}

TEST(Evaluate, Distances) {
  Rng rng(4);
  const WeightVector truth{0.5, 0.5, 0.0};
  const ProblemShape shape{ProblemKind::selection, 8, 4, 3};
  const auto obs = simulate_observations(truth, shape, 4, 0.0, rng);
  std::vector<Situation> out;
  for (int i = 0; i < 20; ++i) out.push_back(generate_situation(shape, rng));
  const auto same = evaluate(truth, truth, obs, out);
  EXPECT_EQ(same.w_dist_2, 0.0);
  EXPECT_EQ(same.in_hamming, 0.0);
  EXPECT_EQ(same.out_hamming, 0.0);
  EXPECT_DOUBLE_EQ(evaluate(WeightVector{1.0, 0.0, 0.0}, truth, obs, out).w_dist_2, std::sqrt(0.5));
}

TEST(ExplainRatio, WithinUnitInterval) {
  Rng rng(6);
  const auto obs = simulate_observations(weights_from_orness(5, 0.9), {ProblemKind::selection, 12, 6, 5}, 4,
                                         0.0, rng);
  const double r = explain_ratio(obs, 200, rng);
  EXPECT_GE(r, 0.0);
  EXPECT_LE(r, 1.0);
}

TEST(MethodSpec, ParseAndLabel) {
  for (const char* m : {"pref", "altpref", "compact", "pairwise:1", "pairwise:20"}) {
    EXPECT_EQ(MethodSpec::parse(m).label(), m);
  }
  for (const char* bad : {"", "pairwise", "pairwise:0", "pairwise:x", "ahn"}) {
    EXPECT_THROW(MethodSpec::parse(bad), InputError) << bad;
  }
}

TEST(ExperimentConfig, ParsesToml) {
  const auto cfg = ExperimentConfig::parse_toml(R"(
# noise sweep
problem = "assignment"
sweep = "eps"
values = [0, 0.25, 0.5]
n = 4
K = 3
S = 6
instances = 5
methods = ["pref", "compact", "pairwise:5"]
out_of_sample = 20
seed = 11
jobs = 2
record_runtime = true
explain_samples = 100
altpref_time_limit = 30
)");
  EXPECT_EQ(cfg.problem, ProblemKind::assignment);
  EXPECT_EQ(cfg.sweep, SweepParam::eps);
  EXPECT_EQ(cfg.values, (std::vector<double>{0, 0.25, 0.5}));
  EXPECT_EQ(cfg.n, 4);
  EXPECT_EQ(cfg.methods.size(), 3u);
  EXPECT_EQ(cfg.methods[2].comparisons, 5);
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_TRUE(cfg.record_runtime);
  EXPECT_EQ(cfg.altpref_time_limit, 30.0);
}

TEST(ExperimentConfig, RejectsBadFiles) {
  const char* bad[] = {
      "values = [1]\nmethods = [\"pref\"]\ncolour = 3\n",
      "values = [1]\nmethods = [\"pref\"]\nn = \"ten\"\n",
      "values = []\nmethods = [\"pref\"]\n",
      "values = [1]\nmethods = []\n",
      "values = [2]\nmethods = [\"pref\"]\nsweep = \"eps\"\n",
      "values = [1, 2\n",
      "problem = \"knapsack\"\nvalues = [1]\nmethods = [\"compact\"]\n",
      "values = [1]\nmethods = [\"pref\"]\nK = 1\n",
  };
  for (const char* text : bad) EXPECT_THROW(ExperimentConfig::parse_toml(text), InputError) << text;
}

TEST(RunExperiment, RowCountOrderAndHeader) {
  const auto cfg = small_config();
  const auto result = run_experiment(cfg);
  ASSERT_EQ(result.rows.size(), 4u * 10u * 2u);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    EXPECT_EQ(r.sweep_value, cfg.values[i / 20]);
    EXPECT_EQ(r.S, static_cast<int>(cfg.values[i / 20]));
    EXPECT_EQ(r.method, i % 2 == 0 ? "pref" : "pairwise:2");
    EXPECT_EQ(r.runtime_ms, 0.0);
    EXPECT_GE(r.w_dist_2, 0.0);
    EXPECT_GE(r.in_hamming, 0.0);
    EXPECT_GE(r.out_hamming, 0.0);
  }
  const std::string csv = csv_of(cfg);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "problem,sweep_param,sweep_value,n,p,K,S,eps,method,seed,w_dist_2,in_hamming,out_hamming,"
            "elicited_orness,is_worstcase_vector,runtime_ms,iterations");
}

TEST(RunExperiment, DeterministicAcrossRunsAndJobCounts) {
  auto cfg = small_config();
  const std::string first = csv_of(cfg);
  EXPECT_EQ(first, csv_of(cfg));
  cfg.jobs = 3;
  EXPECT_EQ(first, csv_of(cfg));
}

TEST(RunExperiment, ExplainSidecarAndOrnessSweep) {
  ExperimentConfig cfg;
  cfg.sweep = SweepParam::orness;
  cfg.values = {0.5, 0.95};
  cfg.orness_width = 0.05;
  cfg.n = 8;
  cfg.K = 3;
  cfg.S = 2;
  cfg.instances = 3;
  cfg.out_of_sample = 5;
  cfg.explain_samples = 50;
  cfg.methods = {MethodSpec::parse("pref")};
  const auto result = run_experiment(cfg);
  EXPECT_EQ(result.rows.size(), 6u);
  ASSERT_EQ(result.explain.size(), 6u);
  for (const auto& e : result.explain) {
    EXPECT_GE(e.ratio, 0.0);
    EXPECT_LE(e.ratio, 1.0);
  }
}

TEST(RunExperiment, ZeroObjectiveMeansExplainedWithoutNoise) {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto truth = weights_from_orness(3, std::uniform_real_distribution<double>(0.5, 1.0)(rng));
    const auto obs = simulate_observations(truth, {ProblemKind::selection, 8, 4, 3}, 3, 0.0, rng);
    const auto pref = elicit_pref(obs);
    if (pref.objective == 0.0) {
      for (const auto& o : obs) EXPECT_EQ(explains(pref.w, o).gap, 0.0);
    }
    const auto alt = elicit_altpref(obs);
    if (alt.total_hamming == 0) {
      for (const auto& o : obs) EXPECT_TRUE(explains(alt.w, o).explained);
    }
  }
}

TEST(InstanceIo, RoundTrip) {
  for (auto kind : {ProblemKind::selection, ProblemKind::assignment, ProblemKind::knapsack}) {
    GenerateOptions opts;
    opts.shape = {kind, kind == ProblemKind::assignment ? 3 : 6, 3, 3};
    opts.S = 3;
    opts.eps = 0.1;
    opts.seed = 42;
    const Instance a = generate_instance(opts);
    const Instance b = instance_from_json(instance_to_json(a));
    EXPECT_EQ(b.problem, a.problem);
    EXPECT_EQ(b.true_w, a.true_w);
    ASSERT_EQ(b.observations.size(), 3u);
    for (std::size_t s = 0; s < 3; ++s) {
      EXPECT_EQ(b.observations[s].chosen, a.observations[s].chosen);
      EXPECT_EQ(b.observations[s].feasible_set, a.observations[s].feasible_set);
      for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < a.observations[s].costs.items(); ++i) {
          EXPECT_EQ(b.observations[s].costs(k, i), a.observations[s].costs(k, i));
        }
      }
    }
    EXPECT_EQ(instance_to_json(b), instance_to_json(a));
  }
}

TEST(InstanceIo, RejectsMalformedInput) {
  const char* bad[] = {
      "{",
      "[]",
      R"({"problem": "selection", "n": 4, "p": 2, "K": 1})",
      R"({"problem": "tsp", "n": 4, "K": 1, "observations": []})",
      R"({"problem": "selection", "n": 4, "p": 2, "K": 1, "observations": [{"costs": [[1,2,3,4]], "chosen": [1,1,1,0]}]})",
      R"({"problem": "selection", "n": 4, "p": 2, "K": 2, "observations": [{"costs": [[1,2,3,4]], "chosen": [1,1,0,0]}]})",
      R"({"problem": "knapsack", "n": 2, "K": 1, "observations": [{"costs": [[1,2]], "chosen": [1,1]}]})",
  };
  for (const char* text : bad) EXPECT_THROW(instance_from_json(text), InputError) << text;
}
