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

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "owaelicit/mp/program.hpp"

namespace owaelicit::mp {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, time_limit };

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/**
 * Bounded-variable simplex on a dense tableau.
 *
 * Every row r of the program becomes `a_r x - s_r = 0` with a logical
 * variable s_r carrying the row bounds, so all constraints are equalities
 * over bounded columns and the all-logical basis is always available. The
 * tableau stores B^{-1} [A | -I] row by row.
 *
 * solve() warm-starts from the current basis: a primal-feasible basis goes
 * straight to phase 2, a dual-feasible one (the situation after tightening
 * bounds or appending rows) runs the dual simplex, anything else runs a
 * composite phase 1 first. Integrality markers are ignored.
 */
class DenseSimplex {
 public:
  explicit DenseSimplex(const MathProgram& program);

  LpStatus solve(Deadline deadline = std::nullopt);

  /// Changes the bounds of structural variable `var`. A nonbasic variable is
  /// moved to the bound matching the sign of its reduced cost, which keeps
  /// an optimal basis dual feasible.
  void set_bounds(int var, double lower, double upper);
  /// Appends a row; its logical becomes basic, so an optimal basis stays
  /// dual feasible.
  int add_row(std::span<const Term> terms, Comparator comparator, double rhs);

  double objective() const;
  double value(int var) const { return x_[static_cast<std::size_t>(var)]; }
  std::vector<double> primal() const;
  double lower(int var) const { return lower_[static_cast<std::size_t>(var)]; }
  double upper(int var) const { return upper_[static_cast<std::size_t>(var)]; }

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }
  long long iterations() const { return iterations_; }

 private:
  enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, at_zero };
  enum class PhaseResult { done, infeasible, unbounded, iteration_limit, time_limit };

  std::size_t cols() const { return static_cast<std::size_t>(n_ + m_); }
  double* row(int r) { return tableau_[static_cast<std::size_t>(r)].data(); }

  void reset_to_slack_basis();
  void refactor();
  void place_nonbasic(int j);
  void compute_primal();
  void compute_reduced_costs(const std::vector<double>& cost);
  bool primal_feasible() const;
  bool dual_feasible() const;
  double max_residual() const;
  void pivot(int p, int q);
  bool out_of_time(Deadline deadline);

  PhaseResult primal_simplex(bool phase_one, Deadline deadline);
  PhaseResult dual_simplex(Deadline deadline);

  int n_ = 0;
  int m_ = 0;
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::vector<std::pair<int, double>>> rows_;  // original a_r

  std::vector<std::vector<double>> tableau_;
  std::vector<int> basis_;
  std::vector<VarStatus> status_;
  std::vector<double> x_;
  std::vector<double> d_;  // reduced costs for cost_
  std::vector<int> nz_;    // scratch

  long long iterations_ = 0;
  long long pivots_since_refactor_ = 0;
};

}  // namespace owaelicit::mp
