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

#include <random>

#include "owaelicit/altpref.hpp"
#include "owaelicit/owa.hpp"
#include "test_support.hpp"

using namespace owaelicit;
using owaelicit::testing::random_costs;
using owaelicit::testing::random_risk_averse;
using owaelicit::testing::small_selection_observation;
using owaelicit::testing::two_observation_example;

namespace {

std::vector<Observation> consistent(std::mt19937_64& rng, const WeightVector& w, int S, int n) {
  std::vector<Observation> obs;
  for (int s = 0; s < S; ++s) {
    auto costs = random_costs(rng, w.size(), static_cast<std::size_t>(n));
    obs.push_back(Observation{costs, solve_owa(w, costs, Selection{n, n / 2}).solution, Selection{n, n / 2}});
  }
  return obs;
}

// Smallest total Hamming distance over a grid of W', used as a brute-force
// upper bound; the exact optimum can only be lower.
int grid_best(const std::vector<Observation>& obs, int steps) {
  int best = 1 << 30;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps - a; ++b) {
      const int c = steps - a - b;
      if (!(a >= b && b >= c)) continue;
      const WeightVector w{double(a) / steps, double(b) / steps, double(c) / steps};
      int total = 0;
      for (const auto& o : obs) {
        // Ties: the model may pick any optimal solution, so take the closest.
        const double opt = solve_owa(w, o.costs, o.feasible_set).value;
        int closest = 1 << 30;
        for_each_solution(o.feasible_set, [&](const SolutionVector& x) {
          if (owa_value(w, o.costs, x) <= opt + 1e-9) closest = std::min(closest, hamming(x, o.chosen));
        });
        total += closest;
      }
      best = std::min(best, total);
    }
  }
  return best;
}

}  // namespace

TEST(ElicitAltPref, TwoObservationExample) {
  const auto obs = two_observation_example();
  auto r = elicit_altpref(obs);
  EXPECT_EQ(r.status, AltStatus::optimal);
  EXPECT_EQ(r.total_hamming, 2);
  for (const auto& y : r.solutions) EXPECT_EQ(y, (SolutionVector{0, 1, 0, 1}));
  for (std::size_t s = 0; s < obs.size(); ++s) {
    EXPECT_NEAR(owa_value(r.w, obs[s].costs, r.solutions[s]),
                solve_owa(r.w, obs[s].costs, obs[s].feasible_set).value, 1e-6);
  }
}

TEST(ElicitAltPref, SingleObservationIsReproduced) {
  auto r = elicit_altpref({small_selection_observation()});
  EXPECT_EQ(r.total_hamming, 0);
  EXPECT_TRUE(explains(r.w, small_selection_observation()).explained);
}

TEST(ElicitAltPref, NoiseFreeObservationsGiveZero) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    const auto truth = random_risk_averse(rng, 3);
    auto obs = consistent(rng, truth, 3, 8);
    AltElicitOptions opts;
    opts.seed_with_pref = t % 2 == 0;
    auto r = elicit_altpref(obs, opts);
    EXPECT_EQ(r.status, AltStatus::optimal);
    EXPECT_EQ(r.total_hamming, 0) << t;
  }
}

TEST(ElicitAltPref, ReturnedSolutionsAreOptimalUnderW) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 5; ++t) {
    std::vector<Observation> obs;
    for (int s = 0; s < 3; ++s) {
      auto costs = random_costs(rng, 3, 6);
      auto chosen = solve_owa(random_risk_averse(rng, 3), costs, Selection{6, 3}).solution;
      obs.push_back(Observation{costs, chosen, Selection{6, 3}});
    }
    auto r = elicit_altpref(obs);
    ASSERT_EQ(r.status, AltStatus::optimal);
    EXPECT_TRUE(r.w.is_risk_averse());
    for (std::size_t s = 0; s < obs.size(); ++s) {
      EXPECT_LE(owa_value(r.w, obs[s].costs, r.solutions[s]),
                solve_owa(r.w, obs[s].costs, obs[s].feasible_set).value + 1e-6);
    }
    EXPECT_LE(r.total_hamming, grid_best(obs, 24)) << t;
  }
}

TEST(ElicitAltPref, NeverWorseThanThePrefSeed) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 4; ++t) {
    std::vector<Observation> obs;
    for (int s = 0; s < 3; ++s) {
      auto costs = random_costs(rng, 3, 6);
      SolutionVector x{1, 1, 1, 0, 0, 0};
      std::shuffle(x.begin(), x.end(), rng);
      obs.push_back(Observation{costs, x, Selection{6, 3}});
    }
    auto pref = elicit_pref(obs);
    int pref_total = 0;
    for (std::size_t s = 0; s < obs.size(); ++s) pref_total += hamming(pref.solutions[s], obs[s].chosen);
    auto r = elicit_altpref(obs);
    EXPECT_LE(r.total_hamming, pref_total);
  }
}

TEST(ElicitAltPref, AssignmentAndKnapsackInstances) {
  std::mt19937_64 rng(3);
  const auto truth = random_risk_averse(rng, 3);
  std::vector<Observation> obs;
  for (int s = 0; s < 2; ++s) {
    auto costs = random_costs(rng, 3, 9);
    obs.push_back(Observation{costs, solve_owa(truth, costs, Assignment{3}).solution, Assignment{3}});
  }
  EXPECT_EQ(elicit_altpref(obs).total_hamming, 0);

  obs.clear();
  MinKnapsack ks{{1.0, 0.8, 1.2, 0.9, 1.1, 1.0}, 3.0};
  for (int s = 0; s < 2; ++s) {
    auto costs = random_costs(rng, 3, 6);
    obs.push_back(Observation{costs, solve_owa(truth, costs, ks).solution, ks});
  }
  EXPECT_EQ(elicit_altpref(obs).total_hamming, 0);
}

TEST(ElicitAltPref, RejectsBadOptions) {
  AltElicitOptions opts;
  opts.max_iterations = 0;
  EXPECT_THROW(elicit_altpref({small_selection_observation()}, opts), InputError);
  opts = {};
  opts.time_limit = -1.0;
  EXPECT_THROW(elicit_altpref({small_selection_observation()}, opts), InputError);
}
