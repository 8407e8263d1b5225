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

#include "owaelicit/compact.hpp"

#include <chrono>

#include <fmt/format.h>

#include "owaelicit/mp/program.hpp"
#include "owaelicit/owa.hpp"

namespace owaelicit {

namespace {

void add_pair(PolyhedralEncoding& enc, std::vector<double> row, double rhs) {
  std::vector<double> neg(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) neg[i] = -row[i];
  enc.A.push_back(std::move(row));
  enc.b.push_back(rhs);
  enc.A.push_back(std::move(neg));
  enc.b.push_back(-rhs);
}

void add_upper_bounds(PolyhedralEncoding& enc, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> row(dim, 0.0);
    row[i] = -1.0;
    enc.A.push_back(std::move(row));
    enc.b.push_back(-1.0);
  }
}

std::vector<mp::VarId> add_weight_block(mp::MathProgram& p, std::size_t K, std::string_view prefix) {
  std::vector<mp::VarId> w;
  std::vector<mp::Term> sum;
  for (std::size_t k = 0; k < K; ++k) {
    w.push_back(p.add_continuous(0.0, 1.0, 0.0, fmt::format("{}{}", prefix, k)));
    sum.push_back({w.back(), 1.0});
  }
  p.add_constraint(std::move(sum), mp::Comparator::equal, 1.0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    p.add_constraint({{w[k], 1.0}, {w[k + 1], -1.0}}, mp::Comparator::greater_equal, 0.0);
  }
  return w;
}

}  // namespace

PolyhedralEncoding encode_polyhedron(const FeasibleSet& fs) {
  PolyhedralEncoding enc;
  const std::size_t dim = fs.dimension();
  std::visit(
      [&](const auto& set) {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, Selection>) {
          add_pair(enc, std::vector<double>(dim, 1.0), set.p);
        } else if constexpr (std::is_same_v<T, Assignment>) {
          const auto n = static_cast<std::size_t>(set.n);
          for (std::size_t r = 0; r < n; ++r) {
            std::vector<double> row(dim, 0.0);
            for (std::size_t c = 0; c < n; ++c) row[r * n + c] = 1.0;
            add_pair(enc, std::move(row), 1.0);
          }
          for (std::size_t c = 0; c < n; ++c) {
            std::vector<double> col(dim, 0.0);
            for (std::size_t r = 0; r < n; ++r) col[r * n + c] = 1.0;
            add_pair(enc, std::move(col), 1.0);
          }
        } else {
          throw InputError("the compact model needs an integral LP description; knapsack has none");
        }
      },
      fs.variant());
  add_upper_bounds(enc, dim);
  enc.integral = true;
  return enc;
}

ElicitationResult elicit_compact(const std::vector<Observation>& observations,
                                 const CompactOptions& opts) {
  validate_observations(observations);
  const auto started = std::chrono::steady_clock::now();
  const std::size_t K = observations.front().costs.scenarios();
  std::vector<PolyhedralEncoding> encodings;
  for (const auto& o : observations) encodings.push_back(encode_polyhedron(o.feasible_set));

  mp::MathProgram p;
  const auto w = add_weight_block(p, K, "w");
  std::vector<std::vector<mp::VarId>> ws;
  for (std::size_t s = 0; s < observations.size(); ++s) {
    const auto& obs = observations[s];
    const auto& enc = encodings[s];
    const std::size_t n = obs.costs.items();
    ws.push_back(add_weight_block(p, K, fmt::format("w{}_", s)));
    const auto& wsv = ws.back();
    for (std::size_t k = 0; k < K; ++k) {
      const auto d = p.add_continuous(0.0, mp::kInfinity, 1.0);
      p.add_constraint({{d, 1.0}, {w[k], -1.0}, {wsv[k], 1.0}}, mp::Comparator::greater_equal, 0.0);
      p.add_constraint({{d, 1.0}, {w[k], 1.0}, {wsv[k], -1.0}}, mp::Comparator::greater_equal, 0.0);
    }

    std::vector<mp::VarId> sigma;
    for (std::size_t r = 0; r < enc.rows(); ++r) sigma.push_back(p.add_continuous(0.0, mp::kInfinity));
    std::vector<std::vector<mp::VarId>> pi(K);
    std::vector<std::vector<mp::VarId>> tau(K);
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t k = 0; k < K; ++k) {
        pi[j].push_back(p.add_continuous(0.0, 1.0));
        tau[j].push_back(p.add_continuous(0.0, 1.0));
        p.add_constraint({{tau[j][k], 1.0}, {wsv[j], -1.0}}, mp::Comparator::less_equal, 0.0);
        p.add_constraint({{tau[j][k], 1.0}, {pi[j][k], -1.0}}, mp::Comparator::less_equal, 0.0);
        if (opts.tight_mccormick) {
          p.add_constraint({{tau[j][k], 1.0}, {wsv[j], -1.0}, {pi[j][k], -1.0}},
                           mp::Comparator::greater_equal, -1.0);
        }
      }
    }
    for (std::size_t j = 0; j < K; ++j) {
      std::vector<mp::Term> row;
      std::vector<mp::Term> col;
      for (std::size_t k = 0; k < K; ++k) {
        row.push_back({pi[j][k], 1.0});
        col.push_back({pi[k][j], 1.0});
      }
      p.add_constraint(std::move(row), mp::Comparator::equal, 1.0);
      p.add_constraint(std::move(col), mp::Comparator::equal, 1.0);
    }
    // Dual feasibility: (A^T sigma)_i <= sum_jk c^k_i tau_jk.
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<mp::Term> terms;
      for (std::size_t r = 0; r < enc.rows(); ++r) {
        if (enc.A[r][i] != 0.0) terms.push_back({sigma[r], enc.A[r][i]});
      }
      for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t k = 0; k < K; ++k) {
          if (obs.costs(k, i) != 0.0) terms.push_back({tau[j][k], -obs.costs(k, i)});
        }
      }
      p.add_constraint(std::move(terms), mp::Comparator::less_equal, 0.0);
    }
    // The observed solution is no worse than the dual bound b^T sigma.
    const auto a = sort_objectives(obs.costs, obs.chosen).values;
    std::vector<mp::Term> terms;
    for (std::size_t k = 0; k < K; ++k) {
      if (a[k] != 0.0) terms.push_back({wsv[k], a[k]});
    }
    for (std::size_t r = 0; r < enc.rows(); ++r) {
      if (enc.b[r] != 0.0) terms.push_back({sigma[r], -enc.b[r]});
    }
    p.add_constraint(std::move(terms), mp::Comparator::less_equal, 0.0);
  }
  p.set_time_limit(opts.time_limit);

  const auto out = mp::solve_program(p);
  if (!out.has_solution()) {
    throw SolverError(fmt::format("compact program ended with status {}", mp::to_string(out.status)));
  }
  auto read = [&](const std::vector<mp::VarId>& vars) {
    std::vector<double> raw;
    for (auto v : vars) raw.push_back(out.value(v));
    return to_risk_averse(std::move(raw));
  };
  ElicitationResult result;
  result.w = read(w);
  for (std::size_t s = 0; s < observations.size(); ++s) {
    result.per_observation.push_back(read(ws[s]));
    const auto& o = observations[s];
    result.solutions.push_back(solve_owa(result.w, o.costs, o.feasible_set).solution);
    result.objective += vector_distance(result.w, result.per_observation.back(), Norm::one);
  }
  if (result.objective < 1e-9) result.objective = 0.0;
  result.infeasibility.assign(observations.size(), 0.0);
  result.pools.assign(observations.size(), {});
  result.iterations = 1;
  result.converged = out.status == mp::SolveStatus::optimal;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace owaelicit
