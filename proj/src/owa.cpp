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

#include "owaelicit/owa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace owaelicit {

namespace {

constexpr double kExplainTolerance = 1e-6;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

void check_dimensions(const CostMatrix& costs, const FeasibleSet& fs) {
  if (costs.items() != fs.dimension()) {
    throw InputError(fmt::format("cost matrix has {} columns, feasible set needs {}", costs.items(),
                                 fs.dimension()));
  }
  if (costs.scenarios() == 0) throw InputError("cost matrix has no scenarios");
}

SolutionVector rounded_solution(const mp::SolveOutcome& out, const std::vector<mp::VarId>& x) {
  SolutionVector s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = out.value(x[i]) > 0.5 ? 1 : 0;
  return s;
}

}  // namespace

std::vector<mp::VarId> add_solution_variables(mp::MathProgram& program, const FeasibleSet& fs) {
  std::vector<mp::VarId> x;
  const std::size_t dim = fs.dimension();
  for (std::size_t i = 0; i < dim; ++i) x.push_back(program.add_binary(0.0, fmt::format("x{}", i)));
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Selection>) {
          std::vector<mp::Term> terms;
          for (auto v : x) terms.push_back({v, 1.0});
          program.add_constraint(std::move(terms), mp::Comparator::equal, s.p, "select");
        } else if constexpr (std::is_same_v<T, Assignment>) {
          const auto n = static_cast<std::size_t>(s.n);
          for (std::size_t i = 0; i < n; ++i) {
            std::vector<mp::Term> row;
            std::vector<mp::Term> col;
            for (std::size_t j = 0; j < n; ++j) {
              row.push_back({x[i * n + j], 1.0});
              col.push_back({x[j * n + i], 1.0});
            }
            program.add_constraint(std::move(row), mp::Comparator::equal, 1.0, fmt::format("row{}", i));
            program.add_constraint(std::move(col), mp::Comparator::equal, 1.0, fmt::format("col{}", i));
          }
        } else {
          std::vector<mp::Term> terms;
          for (std::size_t i = 0; i < dim; ++i) terms.push_back({x[i], s.weights[i]});
          program.add_constraint(std::move(terms), mp::Comparator::greater_equal, s.capacity, "cover");
        }
      },
      fs.variant());
  return x;
}

std::uint64_t count_solutions(const FeasibleSet& fs) {
  return std::visit(
      [](const auto& s) -> std::uint64_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Selection>) {
          // C(n, p) computed incrementally; each partial product is exact.
          std::uint64_t c = 1;
          const int k = std::min(s.p, s.n - s.p);
          for (int i = 1; i <= k; ++i) {
            const std::uint64_t next = saturating_mul(c, static_cast<std::uint64_t>(s.n - k + i));
            if (next == std::numeric_limits<std::uint64_t>::max()) return next;
            c = next / static_cast<std::uint64_t>(i);
          }
          return c;
        } else if constexpr (std::is_same_v<T, Assignment>) {
          std::uint64_t c = 1;
          for (int i = 2; i <= s.n; ++i) c = saturating_mul(c, static_cast<std::uint64_t>(i));
          return c;
        } else {
          // Candidates enumerated, not feasible points.
          const std::size_t n = s.weights.size();
          return n >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << n);
        }
      },
      fs.variant());
}

void for_each_solution(const FeasibleSet& fs, const std::function<void(const SolutionVector&)>& visit,
                       std::uint64_t limit) {
  const std::uint64_t count = count_solutions(fs);
  if (count > limit) {
    throw InputError(fmt::format("feasible set too large to enumerate ({} candidates, limit {})",
                                 count, limit));
  }
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Selection>) {
          SolutionVector x(static_cast<std::size_t>(s.n), 0);
          std::fill(x.begin(), x.begin() + s.p, 1);
          do {
            visit(x);
          } while (std::prev_permutation(x.begin(), x.end()));
        } else if constexpr (std::is_same_v<T, Assignment>) {
          const auto n = static_cast<std::size_t>(s.n);
          std::vector<std::size_t> perm(n);
          std::iota(perm.begin(), perm.end(), std::size_t{0});
          SolutionVector x(n * n, 0);
          do {
            std::fill(x.begin(), x.end(), 0);
            for (std::size_t i = 0; i < n; ++i) x[i * n + perm[i]] = 1;
            visit(x);
          } while (std::next_permutation(perm.begin(), perm.end()));
        } else {
          const std::size_t n = s.weights.size();
          SolutionVector x(n, 0);
          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
              x[i] = static_cast<int>((mask >> i) & 1U);
              total += s.weights[i] * x[i];
            }
            if (total >= s.capacity - 1e-9) visit(x);
          }
        }
      },
      fs.variant());
}

OwaSolveReport solve_owa(const WeightVector& w, const CostMatrix& costs, const FeasibleSet& fs) {
  check_dimensions(costs, fs);
  if (w.size() != costs.scenarios()) {
    throw InputError(fmt::format("weight vector has {} entries, cost matrix has {} rows", w.size(),
                                 costs.scenarios()));
  }
  w.require_risk_averse("solve_owa");
  const std::size_t K = costs.scenarios();
  const std::size_t n = costs.items();

  mp::MathProgram program;
  const auto x = add_solution_variables(program, fs);
  std::vector<mp::VarId> alpha;
  std::vector<mp::VarId> beta;
  for (std::size_t k = 0; k < K; ++k) {
    alpha.push_back(program.add_continuous(-mp::kInfinity, mp::kInfinity, 1.0, fmt::format("alpha{}", k)));
  }
  for (std::size_t k = 0; k < K; ++k) {
    beta.push_back(program.add_continuous(-mp::kInfinity, mp::kInfinity, 1.0, fmt::format("beta{}", k)));
  }
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<mp::Term> terms{{alpha[j], 1.0}, {beta[k], 1.0}};
      if (w[j] != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
          const double c = w[j] * costs(k, i);
          if (c != 0.0) terms.push_back({x[i], -c});
        }
      }
      program.add_constraint(std::move(terms), mp::Comparator::greater_equal, 0.0);
    }
  }

  // The mean-cost optimizer is a cheap incumbent.
  const std::vector<double> mean(K, 1.0 / static_cast<double>(K));
  const SolutionVector guess = solve_weighted_sum(mean, costs, fs);
  std::vector<double> start(static_cast<std::size_t>(program.num_variables()), 0.0);
  for (std::size_t i = 0; i < n; ++i) start[static_cast<std::size_t>(x[i].index)] = guess[i];
  program.add_start(std::move(start));

  const auto out = mp::solve_program(program);
  if (out.status == mp::SolveStatus::infeasible) throw InputError("feasible set is empty");
  if (!out.has_solution()) {
    throw SolverError(fmt::format("OWA subproblem ended with status {}", mp::to_string(out.status)));
  }
  OwaSolveReport report;
  report.solution = rounded_solution(out, x);
  report.value = owa_value(w, costs, report.solution);
  report.status = out.status;
  return report;
}

OwaSolveReport enumerate_owa(const WeightVector& w, const CostMatrix& costs, const FeasibleSet& fs) {
  check_dimensions(costs, fs);
  OwaSolveReport best;
  bool found = false;
  for_each_solution(fs, [&](const SolutionVector& x) {
    const double v = owa_value(w, costs, x);
    if (!found || v < best.value) {
      best.solution = x;
      best.value = v;
      found = true;
    }
  });
  if (!found) throw InputError("feasible set is empty");
  return best;
}

SolutionVector solve_weighted_sum(std::span<const double> lambda, const CostMatrix& costs,
                                  const FeasibleSet& fs) {
  check_dimensions(costs, fs);
  if (lambda.size() != costs.scenarios()) throw InputError("scalarization weights have the wrong length");
  const std::size_t n = costs.items();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < costs.scenarios(); ++k) {
    for (std::size_t i = 0; i < n; ++i) c[i] += lambda[k] * costs(k, i);
  }
  if (const auto* sel = std::get_if<Selection>(&fs.variant())) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c[a] < c[b]; });
    SolutionVector x(n, 0);
    for (int i = 0; i < sel->p; ++i) x[order[static_cast<std::size_t>(i)]] = 1;
    return x;
  }
  mp::MathProgram program;
  const auto x = add_solution_variables(program, fs);
  for (std::size_t i = 0; i < n; ++i) program.set_objective(x[i], c[i]);
  const auto out = mp::solve_program(program);
  if (out.status == mp::SolveStatus::infeasible) throw InputError("feasible set is empty");
  if (!out.has_solution()) throw SolverError("weighted-sum subproblem failed");
  return rounded_solution(out, x);
}

WeightVector weights_from_orness(std::size_t K, double alpha) {
  if (K < 2) throw InputError("weights_from_orness requires K >= 2");
  if (!(alpha >= 0.5 && alpha <= 1.0)) {
    throw InputError(fmt::format("orness {} outside [0.5, 1]", alpha));
  }
  if (alpha == 0.5) return WeightVector::uniform(K);
  if (alpha == 1.0) return WeightVector::worst_case(K);

  mp::MathProgram program;
  std::vector<mp::VarId> w;
  for (std::size_t k = 0; k < K; ++k) w.push_back(program.add_continuous(0.0, 1.0));
  const auto delta = program.add_continuous(0.0, mp::kInfinity, 1.0);
  std::vector<mp::Term> sum;
  std::vector<mp::Term> orn;
  for (std::size_t k = 0; k < K; ++k) {
    sum.push_back({w[k], 1.0});
    orn.push_back({w[k], static_cast<double>(K - 1 - k) / static_cast<double>(K - 1)});
  }
  program.add_constraint(std::move(sum), mp::Comparator::equal, 1.0);
  program.add_constraint(std::move(orn), mp::Comparator::equal, alpha);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    program.add_constraint({{w[k], 1.0}, {w[k + 1], -1.0}}, mp::Comparator::greater_equal, 0.0);
    program.add_constraint({{w[k], 1.0}, {w[k + 1], -1.0}, {delta, -1.0}}, mp::Comparator::less_equal, 0.0);
  }
  const auto out = mp::solve_program(program);
  if (out.status != mp::SolveStatus::optimal) throw SolverError("orness program did not solve");
  std::vector<double> raw(K);
  for (std::size_t k = 0; k < K; ++k) raw[k] = out.value(w[k]);
  return WeightVector::project(std::move(raw));
}

ExplainResult explains(const WeightVector& w, const Observation& obs) {
  obs.validate();
  const double observed = owa_value(w, obs.costs, obs.chosen);
  const auto best = solve_owa(w, obs.costs, obs.feasible_set);
  ExplainResult r;
  r.gap = std::max(0.0, observed - best.value);
  r.explained = r.gap <= kExplainTolerance;
  return r;
}

}  // namespace owaelicit
