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

#include "owaelicit/altpref.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "owaelicit/mp/program.hpp"
#include "owaelicit/owa.hpp"

namespace owaelicit {

namespace {

using Clock = std::chrono::steady_clock;

struct AltModel {
  mp::MathProgram program;
  std::vector<mp::VarId> w;
  std::vector<std::vector<mp::VarId>> y;
};

bool has_negative_cost(const std::vector<Observation>& observations) {
  for (const auto& o : observations) {
    for (std::size_t k = 0; k < o.costs.scenarios(); ++k) {
      for (double c : o.costs.row(k)) {
        if (c < 0.0) return true;
      }
    }
  }
  return false;
}

// Products tau_ji = w_j * y_i, written out for every constraint defining X,
// are valid on integer points and tighten the relaxation considerably.
void add_product_rows(mp::MathProgram& p, const FeasibleSet& fs, const std::vector<mp::VarId>& w,
                      const std::vector<std::vector<mp::VarId>>& tau) {
  const std::size_t K = w.size();
  std::visit(
      [&](const auto& set) {
        using T = std::decay_t<decltype(set)>;
        for (std::size_t j = 0; j < K; ++j) {
          if constexpr (std::is_same_v<T, Selection>) {
            std::vector<mp::Term> terms{{w[j], -static_cast<double>(set.p)}};
            for (auto t : tau[j]) terms.push_back({t, 1.0});
            p.add_constraint(std::move(terms), mp::Comparator::equal, 0.0);
          } else if constexpr (std::is_same_v<T, Assignment>) {
            const auto n = static_cast<std::size_t>(set.n);
            for (std::size_t r = 0; r < n; ++r) {
              std::vector<mp::Term> row{{w[j], -1.0}};
              std::vector<mp::Term> col{{w[j], -1.0}};
              for (std::size_t c = 0; c < n; ++c) {
                row.push_back({tau[j][r * n + c], 1.0});
                col.push_back({tau[j][c * n + r], 1.0});
              }
              p.add_constraint(std::move(row), mp::Comparator::equal, 0.0);
              p.add_constraint(std::move(col), mp::Comparator::equal, 0.0);
            }
          } else {
            std::vector<mp::Term> terms{{w[j], -set.capacity}};
            for (std::size_t i = 0; i < tau[j].size(); ++i) terms.push_back({tau[j][i], set.weights[i]});
            p.add_constraint(std::move(terms), mp::Comparator::greater_equal, 0.0);
          }
        }
      },
      fs.variant());
}

AltModel build_model(const std::vector<Observation>& observations, const CutPools& pools) {
  AltModel m;
  auto& p = m.program;
  const std::size_t K = observations.front().costs.scenarios();
  const bool upper_envelope = has_negative_cost(observations);

  std::vector<mp::Term> sum;
  for (std::size_t k = 0; k < K; ++k) {
    m.w.push_back(p.add_continuous(0.0, 1.0, 0.0, fmt::format("w{}", k)));
    sum.push_back({m.w.back(), 1.0});
  }
  p.add_constraint(std::move(sum), mp::Comparator::equal, 1.0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    p.add_constraint({{m.w[k], 1.0}, {m.w[k + 1], -1.0}}, mp::Comparator::greater_equal, 0.0);
  }

  double offset = 0.0;
  for (std::size_t s = 0; s < observations.size(); ++s) {
    const auto& obs = observations[s];
    const std::size_t n = obs.costs.items();
    auto y = add_solution_variables(p, obs.feasible_set);
    for (std::size_t i = 0; i < n; ++i) {
      if (obs.chosen[i] == 1) {
        p.set_objective(y[i], -1.0);
        offset += 1.0;
      } else {
        p.set_objective(y[i], 1.0);
      }
    }
    std::vector<mp::VarId> alpha;
    std::vector<mp::VarId> beta;
    for (std::size_t k = 0; k < K; ++k) alpha.push_back(p.add_continuous(-mp::kInfinity, mp::kInfinity));
    for (std::size_t k = 0; k < K; ++k) beta.push_back(p.add_continuous(-mp::kInfinity, mp::kInfinity));
    std::vector<std::vector<mp::VarId>> tau(K);
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto t = p.add_continuous(0.0, 1.0);
        tau[j].push_back(t);
        p.add_constraint({{t, 1.0}, {m.w[j], -1.0}, {y[i], -1.0}}, mp::Comparator::greater_equal, -1.0);
        if (upper_envelope) {
          p.add_constraint({{t, 1.0}, {m.w[j], -1.0}}, mp::Comparator::less_equal, 0.0);
          p.add_constraint({{t, 1.0}, {y[i], -1.0}}, mp::Comparator::less_equal, 0.0);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<mp::Term> terms{{y[i], -1.0}};
      for (std::size_t j = 0; j < K; ++j) terms.push_back({tau[j][i], 1.0});
      p.add_constraint(std::move(terms), mp::Comparator::equal, 0.0);
    }
    add_product_rows(p, obs.feasible_set, m.w, tau);
    // alpha_j + beta_k >= w_j (c^k . y): the sorted OWA value of y.
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<mp::Term> terms{{alpha[j], 1.0}, {beta[k], 1.0}};
        for (std::size_t i = 0; i < n; ++i) {
          if (obs.costs(k, i) != 0.0) terms.push_back({tau[j][i], -obs.costs(k, i)});
        }
        p.add_constraint(std::move(terms), mp::Comparator::greater_equal, 0.0);
      }
    }
    for (const auto& x : pools[s]) {
      const auto a = sort_objectives(obs.costs, x).values;
      std::vector<mp::Term> terms;
      for (std::size_t k = 0; k < K; ++k) {
        terms.push_back({alpha[k], 1.0});
        terms.push_back({beta[k], 1.0});
        if (a[k] != 0.0) terms.push_back({m.w[k], -a[k]});
      }
      p.add_constraint(std::move(terms), mp::Comparator::less_equal, 0.0);
    }
    m.y.push_back(std::move(y));
  }
  p.set_objective_offset(offset);
  // Two solutions of a selection or assignment problem differ in an even
  // number of entries.
  const bool even = std::all_of(observations.begin(), observations.end(), [](const Observation& o) {
    return !std::holds_alternative<MinKnapsack>(o.feasible_set.variant());
  });
  if (even) p.set_objective_step(2.0);
  return m;
}

void add_start(AltModel& m, const std::vector<Observation>& observations, const WeightVector& w,
               std::set<std::vector<SolutionVector>>& tried) {
  std::vector<SolutionVector> ys;
  for (const auto& o : observations) ys.push_back(solve_owa(w, o.costs, o.feasible_set).solution);
  if (!tried.insert(ys).second) return;
  std::vector<double> values(static_cast<std::size_t>(m.program.num_variables()), 0.0);
  for (std::size_t s = 0; s < ys.size(); ++s) {
    for (std::size_t i = 0; i < ys[s].size(); ++i) {
      values[static_cast<std::size_t>(m.y[s][i].index)] = ys[s][i];
    }
  }
  m.program.add_start(std::move(values));
}

struct Incumbent {
  WeightVector w;
  std::vector<SolutionVector> y;
};

}  // namespace

void AltElicitOptions::validate() const {
  if (!(cut_tolerance > 0.0)) throw InputError("cut tolerance must be positive");
  if (max_iterations < 1) throw InputError("max_iterations must be at least 1");
  if (time_limit && !(*time_limit > 0.0)) throw InputError("time limit must be positive");
}

const char* to_string(AltStatus status) {
  switch (status) {
    case AltStatus::optimal: return "optimal";
    case AltStatus::time_limit_incumbent: return "time_limit_incumbent";
    case AltStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

AltElicitationResult elicit_altpref(const std::vector<Observation>& observations,
                                    const AltElicitOptions& opts) {
  validate_observations(observations);
  opts.validate();
  const auto started = Clock::now();
  const std::size_t S = observations.size();
  const std::size_t K = observations.front().costs.scenarios();

  std::optional<WeightVector> pref_w;
  if (opts.seed_with_pref) pref_w = elicit_pref(observations).w;

  CutPools pools = initial_pools(observations);
  std::vector<std::set<SolutionVector>> seen(S);
  for (std::size_t s = 0; s < S; ++s) seen[s].insert(pools[s].begin(), pools[s].end());

  AltElicitationResult result;
  std::optional<Incumbent> previous;
  result.status = AltStatus::iteration_limit;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    AltModel model = build_model(observations, pools);
    model.program.set_time_limit(opts.time_limit);
    std::set<std::vector<SolutionVector>> tried;
    add_start(model, observations, WeightVector::worst_case(K), tried);
    if (previous) add_start(model, observations, previous->w, tried);
    if (pref_w) add_start(model, observations, *pref_w, tried);

    const auto out = mp::solve_program(model.program);
    ++result.iterations;
    result.nodes += out.stats.nodes;
    if (out.status == mp::SolveStatus::infeasible || out.status == mp::SolveStatus::unbounded) {
      throw SolverError(fmt::format("Hamming model ended with status {}", mp::to_string(out.status)));
    }
    if (!out.has_solution()) {
      if (!previous) throw SolverError("time limit reached before any incumbent was found");
      result.status = AltStatus::time_limit_incumbent;
      break;
    }
    Incumbent current;
    std::vector<double> raw;
    for (auto v : model.w) raw.push_back(out.value(v));
    current.w = to_risk_averse(std::move(raw));
    for (std::size_t s = 0; s < S; ++s) {
      SolutionVector y;
      for (auto v : model.y[s]) y.push_back(out.value(v) > 0.5 ? 1 : 0);
      current.y.push_back(std::move(y));
    }
    previous = current;
    if (out.status == mp::SolveStatus::time_limit_with_incumbent) {
      result.status = AltStatus::time_limit_incumbent;
      break;
    }

    int cuts = 0;
    for (std::size_t s = 0; s < S; ++s) {
      const auto& o = observations[s];
      const auto best = solve_owa(current.w, o.costs, o.feasible_set);
      const double violation = owa_value(current.w, o.costs, current.y[s]) - best.value;
      if (violation > opts.cut_tolerance && seen[s].insert(best.solution).second) {
        pools[s].push_back(best.solution);
        ++cuts;
      }
    }
    if (opts.progress) opts.progress(ProgressEvent{"altpref", result.iterations, out.objective, cuts});
    if (cuts == 0) {
      result.status = AltStatus::optimal;
      break;
    }
  }
  if (!previous) throw SolverError("Hamming model produced no solution");

  result.w = previous->w;
  result.solutions = previous->y;
  for (std::size_t s = 0; s < S; ++s) {
    result.total_hamming += hamming(result.solutions[s], observations[s].chosen);
  }
  result.pools = std::move(pools);
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

}  // namespace owaelicit
