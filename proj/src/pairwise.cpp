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

#include "owaelicit/pairwise.hpp"

#include <fmt/format.h>

#include "owaelicit/elicit.hpp"
#include "owaelicit/experiments.hpp"
#include "owaelicit/mp/program.hpp"
#include "owaelicit/owa.hpp"

namespace owaelicit {

namespace {

constexpr int kRedrawAttempts = 20;

}  // namespace

std::vector<double> sample_simplex(std::size_t K, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(K);
  double sum = 0.0;
  do {
    sum = 0.0;
    for (double& x : v) {
      x = e(rng);
      sum += x;
    }
  } while (!(sum > 0.0));
  for (double& x : v) x /= sum;
  return v;
}

std::vector<SolutionPair> generate_pairs(const CostMatrix& costs, const FeasibleSet& fs, int count,
                                         Rng& rng) {
  if (count < 1) throw InputError("comparison count must be at least 1");
  const std::size_t K = costs.scenarios();
  std::vector<SolutionPair> pairs;
  for (int c = 0; c < count; ++c) {
    SolutionPair pair;
    for (int attempt = 0; attempt < kRedrawAttempts; ++attempt) {
      pair.first = solve_weighted_sum(sample_simplex(K, rng), costs, fs);
      pair.second = solve_weighted_sum(sample_simplex(K, rng), costs, fs);
      if (pair.first != pair.second) break;
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<Comparison> judge_pairs(const std::vector<SolutionPair>& pairs, const CostMatrix& costs,
                                    const FeasibleSet& fs, const WeightVector& true_w, double eps,
                                    Rng& rng) {
  true_w.require_risk_averse("judge_pairs");
  std::vector<Comparison> out;
  for (const auto& [a, b] : pairs) {
    const WeightVector w = perturb_weights(true_w, eps, rng);
    const bool second_wins = owa_value(w, costs, b) < owa_value(w, costs, a);
    Comparison c{second_wins ? b : a, second_wins ? a : b, costs, fs};
    out.push_back(std::move(c));
  }
  return out;
}

AhnFit fit_ahn(const std::vector<Comparison>& comparisons, double margin) {
  if (comparisons.empty()) throw InputError("at least one comparison is required");
  if (!(margin > 0.0)) throw InputError("margin must be positive");
  const std::size_t K = comparisons.front().costs.scenarios();
  mp::MathProgram p;
  std::vector<mp::VarId> w;
  std::vector<mp::Term> sum;
  for (std::size_t k = 0; k < K; ++k) {
    w.push_back(p.add_continuous(0.0, 1.0, 0.0, fmt::format("w{}", k)));
    sum.push_back({w.back(), 1.0});
  }
  p.add_constraint(std::move(sum), mp::Comparator::equal, 1.0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    p.add_constraint({{w[k], 1.0}, {w[k + 1], -1.0}}, mp::Comparator::greater_equal, 0.0);
  }
  for (const auto& c : comparisons) {
    if (c.costs.scenarios() != K) throw InputError("comparisons disagree on the number of scenarios");
    const auto ax = sort_objectives(c.costs, c.preferred).values;
    const auto ay = sort_objectives(c.costs, c.other).values;
    const auto slack = p.add_continuous(0.0, mp::kInfinity, 1.0);
    std::vector<mp::Term> terms{{slack, 1.0}};
    for (std::size_t k = 0; k < K; ++k) {
      if (ay[k] != ax[k]) terms.push_back({w[k], ay[k] - ax[k]});
    }
    p.add_constraint(std::move(terms), mp::Comparator::greater_equal, margin);
  }
  const auto out = mp::solve_program(p);
  if (out.status != mp::SolveStatus::optimal) {
    throw SolverError(fmt::format("pairwise fit ended with status {}", mp::to_string(out.status)));
  }
  std::vector<double> raw;
  for (auto v : w) raw.push_back(out.value(v));
  return AhnFit{to_risk_averse(std::move(raw)), out.objective};
}

WeightVector elicit_ahn(const std::vector<Comparison>& comparisons, double margin) {
  return fit_ahn(comparisons, margin).w;
}

}  // namespace owaelicit
