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

// Minimal mathematical-program layer: linear programs and mixed-binary
// linear programs (always minimized), solved by the dense simplex in
// simplex.hpp and, when binaries are present, branch-and-bound.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace owaelicit::mp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Primal feasibility and optimality tolerance of every solve.
inline constexpr double kFeasibilityTolerance = 1e-6;

enum class VarKind { continuous, binary };
enum class Comparator { less_equal, equal, greater_equal };

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
  friend auto operator<=>(VarId, VarId) = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

struct Variable {
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
  double objective = 0.0;
  std::string name;
};

struct Constraint {
  std::vector<Term> terms;
  Comparator comparator = Comparator::less_equal;
  double rhs = 0.0;
  std::string name;
};

/// A linear (mixed-binary) minimization program.
class MathProgram {
 public:
  /// Binary variables get bounds [0,1] regardless of the arguments.
  VarId add_variable(VarKind kind, double lower, double upper, double objective = 0.0,
                     std::string name = {});
  VarId add_continuous(double lower, double upper, double objective = 0.0, std::string name = {}) {
    return add_variable(VarKind::continuous, lower, upper, objective, std::move(name));
  }
  VarId add_binary(double objective = 0.0, std::string name = {}) {
    return add_variable(VarKind::binary, 0.0, 1.0, objective, std::move(name));
  }

  /// Adds sum(terms) <comparator> rhs; returns the row index.
  int add_constraint(std::vector<Term> terms, Comparator comparator, double rhs,
                     std::string name = {});

  void set_objective(VarId var, double coef);
  void set_objective_offset(double offset) { objective_offset_ = offset; }
  /// Declares that every feasible objective value is an integer multiple of
  /// `step`. Branch-and-bound prunes with it; without a declaration a step
  /// of 1 is detected from integral objective coefficients.
  void set_objective_step(double step) { objective_step_ = step; }
  void set_bounds(VarId var, double lower, double upper);

  /// Wall-clock limit for branch-and-bound; none by default.
  void set_time_limit(std::optional<double> seconds) { time_limit_ = seconds; }
  /// Candidate values for the binary variables, tried as incumbents (in
  /// the order given) before branching. Continuous values are completed by
  /// an LP with the binaries fixed.
  void add_start(std::vector<double> values) { starts_.push_back(std::move(values)); }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_binaries() const;
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Variable& variable(VarId v) const { return variables_.at(static_cast<std::size_t>(v.index)); }
  double objective_offset() const { return objective_offset_; }
  double objective_step() const { return objective_step_; }
  std::optional<double> time_limit() const { return time_limit_; }
  const std::vector<std::vector<double>>& starts() const { return starts_; }

  /// Throws InputError on undeclared variables or inconsistent bounds.
  void validate() const;

  /// Objective value of an assignment (including the offset).
  double evaluate(const std::vector<double>& values) const;
  /// Largest constraint or bound violation of an assignment.
  double max_violation(const std::vector<double>& values) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  double objective_offset_ = 0.0;
  double objective_step_ = 0.0;
  std::optional<double> time_limit_;
  std::vector<std::vector<double>> starts_;
};

enum class SolveStatus {
  optimal,
  infeasible,
  unbounded,
  time_limit_with_incumbent,
  time_limit_no_incumbent,
};

const char* to_string(SolveStatus status);

struct SolveStats {
  long long simplex_iterations = 0;
  long long nodes = 0;
  double best_bound = -kInfinity;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;
  /// Indexed by VarId::index; empty unless has_solution().
  std::vector<double> values;
  SolveStats stats;

  bool has_solution() const {
    return status == SolveStatus::optimal || status == SolveStatus::time_limit_with_incumbent;
  }
  double value(VarId v) const { return values.at(static_cast<std::size_t>(v.index)); }
};

/// Solves `program` to optimality (or the time limit). Binaries are handled
/// by branch-and-bound over the LP relaxation. Deterministic unless the time
/// limit interrupts the search.
SolveOutcome solve_program(const MathProgram& program);

/// Human-readable dump in CPLEX LP format.
std::string to_lp_text(const MathProgram& program);

}  // namespace owaelicit::mp
