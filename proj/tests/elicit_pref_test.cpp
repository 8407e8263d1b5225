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

#include <algorithm>
#include <numeric>
#include <random>

#include "owaelicit/elicit.hpp"
#include "owaelicit/owa.hpp"
#include "test_support.hpp"

using namespace owaelicit;
using owaelicit::testing::random_costs;
using owaelicit::testing::random_risk_averse;
using owaelicit::testing::small_selection_observation;
using owaelicit::testing::two_observation_example;

namespace {

std::vector<Observation> consistent_observations(std::mt19937_64& rng, const WeightVector& w, int S,
                                                 int n) {
  std::vector<Observation> obs;
  for (int s = 0; s < S; ++s) {
    auto costs = random_costs(rng, w.size(), static_cast<std::size_t>(n));
    auto r = solve_owa(w, costs, Selection{n, n / 2});
    obs.push_back(Observation{costs, r.solution, Selection{n, n / 2}});
  }
  return obs;
}

std::vector<Observation> random_observations(std::mt19937_64& rng, std::size_t K, int S, int n) {
  std::vector<Observation> obs;
  for (int s = 0; s < S; ++s) {
    SolutionVector x(static_cast<std::size_t>(n), 0);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < n / 2; ++i) x[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
    obs.push_back(Observation{random_costs(rng, K, static_cast<std::size_t>(n)), x, Selection{n, n / 2}});
  }
  return obs;
}

}  // namespace

TEST(SolveMaster, SelfComparisonOnly) {
  const std::vector<Observation> obs{small_selection_observation()};
  auto m = solve_master(obs, {{obs[0].chosen}}, std::nullopt, {});
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(m->objective, 0.0, 1e-12);
  EXPECT_EQ(m->w, m->per_observation[0]);
}

TEST(SolveMaster, FullPoolPinsTheUniqueVector) {
  const std::vector<Observation> obs{small_selection_observation()};
  CutPools pools{{{1, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}}};
  auto m = solve_master(obs, pools, std::nullopt, {});
  ASSERT_TRUE(m.has_value());
  EXPECT_NEAR(m->w[0], 0.5, 1e-9);
  EXPECT_NEAR(m->w[1], 0.5, 1e-9);
  EXPECT_NEAR(m->w[2], 0.0, 1e-9);
  EXPECT_NEAR(m->objective, 0.0, 1e-9);
}

TEST(ComputeInfeas, DominatedChoice) {
  Observation obs{CostMatrix::from_rows({{0, 1, 1}, {0, 1, 1}}), {0, 1, 0}, Selection{3, 1}};
  EXPECT_NEAR(compute_infeas(obs, {}), 1.0, 1e-9);
}

TEST(ComputeInfeas, ZeroForSolverOutputAndNeverNegative) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_risk_averse(rng, 3);
    auto obs = consistent_observations(rng, w, 1, 8);
    EXPECT_EQ(compute_infeas(obs[0], {}), 0.0);
  }
  for (const auto& o : random_observations(rng, 3, 20, 8)) EXPECT_GE(compute_infeas(o, {}), 0.0);
}

TEST(ElicitPref, SingleObservationHasUniqueAnswer) {
  auto r = elicit_pref({small_selection_observation()});
  EXPECT_NEAR(r.w[0], 0.5, 1e-6);
  EXPECT_NEAR(r.w[1], 0.5, 1e-6);
  EXPECT_NEAR(r.w[2], 0.0, 1e-6);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.infeasibility, std::vector<double>{0.0});
}

TEST(ElicitPref, TwoObservationExampleObjective) {
  const auto obs = two_observation_example();
  auto r = elicit_pref(obs);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.objective, 1.0 / 6.0, 1e-6);
  const double reference = pref_objective_at(WeightVector{0.46, 0.29, 0.25}, obs, r.pools, std::nullopt);
  EXPECT_NEAR(r.objective, reference, 1e-4);
  int distance = 0;
  for (std::size_t s = 0; s < obs.size(); ++s) distance += hamming(r.solutions[s], obs[s].chosen);
  EXPECT_EQ(distance, 4);
}

TEST(ElicitPref, RejectsBadInput) {
  EXPECT_THROW(elicit_pref({}), InputError);
  auto a = small_selection_observation();
  Observation b{CostMatrix::from_rows({{1, 2}, {2, 1}}), {1, 0}, Selection{2, 1}};
  EXPECT_THROW(elicit_pref({a, b}), InputError);
  ElicitOptions bad;
  bad.norm = Norm::two;
  EXPECT_THROW(elicit_pref({a}, bad), InputError);
}

TEST(ElicitPref, NoiseFreeObservationsAreExplained) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 15; ++t) {
    const auto truth = random_risk_averse(rng, 3);
    auto obs = consistent_observations(rng, truth, 2 + t % 4, 8);
    auto r = elicit_pref(obs);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.objective, 0.0) << t;
    for (const auto& o : obs) EXPECT_TRUE(explains(r.w, o).explained) << t;
  }
}

TEST(ElicitPref, ConvergedPoolsLeaveNoViolatedConstraint) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    auto obs = random_observations(rng, 3, 3, 8);
    auto r = elicit_pref(obs);
    ASSERT_TRUE(r.converged);
    for (std::size_t s = 0; s < obs.size(); ++s) {
      const auto& ws = r.per_observation[s];
      EXPECT_TRUE(ws.is_risk_averse());
      const double observed = owa_value(ws, obs[s].costs, obs[s].chosen);
      for_each_solution(obs[s].feasible_set, [&](const SolutionVector& x) {
        EXPECT_LE(observed - owa_value(ws, obs[s].costs, x), r.infeasibility[s] + 2e-6);
      });
    }
    double total = 0.0;
    for (const auto& ws : r.per_observation) total += vector_distance(r.w, ws, Norm::one);
    EXPECT_NEAR(r.objective, total, 1e-6);
  }
}

TEST(ElicitPref, MasterObjectiveNeverDecreases) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    auto obs = random_observations(rng, 4, 4, 8);
    std::vector<double> seen;
    ElicitOptions opts;
    opts.progress = [&](const ProgressEvent& e) { seen.push_back(e.objective); };
    opts.infeasibility = InfeasibilityStrategy::weighted_slack;
    elicit_pref(obs, opts);
    for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_GE(seen[i], seen[i - 1] - 1e-7);
  }
}

TEST(ElicitPref, InfeasibilitySlacksMatchTheViolationProgram) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 8; ++t) {
    auto obs = random_observations(rng, 3, 3, 6);
    auto r = elicit_pref(obs);
    for (std::size_t s = 0; s < obs.size(); ++s) {
      EXPECT_NEAR(r.infeasibility[s], compute_infeas(obs[s], {}), 1e-6);
    }
  }
}

TEST(ElicitPref, WeightedSlackAgreesWhenExplainable) {
  std::mt19937_64 rng(77);
  const auto truth = random_risk_averse(rng, 3);
  auto obs = consistent_observations(rng, truth, 4, 8);
  ElicitOptions opts;
  opts.infeasibility = InfeasibilityStrategy::weighted_slack;
  auto r = elicit_pref(obs, opts);
  EXPECT_EQ(r.objective, 0.0);
  for (double v : r.infeasibility) EXPECT_EQ(v, 0.0);
}

TEST(ElicitPref, InfNormVariant) {
  ElicitOptions opts;
  opts.norm = Norm::inf;
  auto r = elicit_pref(two_observation_example(), opts);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.objective, 0.0);
  double total = 0.0;
  for (const auto& ws : r.per_observation) total += vector_distance(r.w, ws, Norm::inf);
  EXPECT_NEAR(r.objective, total, 1e-9);
}

TEST(ElicitPref, OrnessRefinementKeepsTheObjective) {
  const auto obs = two_observation_example();
  auto plain = elicit_pref(obs);
  ElicitOptions opts;
  opts.minimize_orness = true;
  auto refined = elicit_pref(obs, opts);
  EXPECT_NEAR(refined.objective, plain.objective, 1e-6);
  EXPECT_LE(orness(refined.w), orness(plain.w) + 1e-9);
}

TEST(InitialPools, SharesFeasibleObservedSolutions) {
  auto obs = two_observation_example();
  auto pools = initial_pools(obs);
  ASSERT_EQ(pools.size(), 2u);
  EXPECT_EQ(pools[0], (std::vector<SolutionVector>{{0, 0, 1, 1}, {0, 1, 0, 1}}));
  EXPECT_EQ(pools[1], (std::vector<SolutionVector>{{0, 1, 0, 1}, {0, 0, 1, 1}}));
}

TEST(ToRiskAverse, SortsAndRenormalizes) {
  auto w = to_risk_averse({0.2, 0.5, 0.3 + 1e-12});
  EXPECT_TRUE(w.is_risk_averse());
  EXPECT_NEAR(w[0], 0.5, 1e-9);
}
