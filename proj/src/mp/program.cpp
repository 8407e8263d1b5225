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

#include "owaelicit/mp/program.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "owaelicit/errors.hpp"
#include "owaelicit/mp/simplex.hpp"

namespace owaelicit::mp {

VarId MathProgram::add_variable(VarKind kind, double lower, double upper, double objective,
                                std::string name) {
  if (kind == VarKind::binary) {
    lower = 0.0;
    upper = 1.0;
  }
  variables_.push_back(Variable{kind, lower, upper, objective, std::move(name)});
  return VarId{static_cast<int>(variables_.size()) - 1};
}

int MathProgram::add_constraint(std::vector<Term> terms, Comparator comparator, double rhs,
                                std::string name) {
  constraints_.push_back(Constraint{std::move(terms), comparator, rhs, std::move(name)});
  return static_cast<int>(constraints_.size()) - 1;
}

void MathProgram::set_objective(VarId var, double coef) {
  variables_.at(static_cast<std::size_t>(var.index)).objective = coef;
}

void MathProgram::set_bounds(VarId var, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(var.index));
  v.lower = lower;
  v.upper = upper;
}

int MathProgram::num_binaries() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) {
    return v.kind == VarKind::binary;
  }));
}

void MathProgram::validate() const {
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw InputError(fmt::format("variable {} has inconsistent bounds [{}, {}]", j, v.lower,
                                   v.upper));
    }
    if (!std::isfinite(v.objective)) {
      throw InputError(fmt::format("variable {} has a non-finite objective", j));
    }
  }
  for (std::size_t r = 0; r < constraints_.size(); ++r) {
    const auto& c = constraints_[r];
    if (!std::isfinite(c.rhs)) throw InputError(fmt::format("row {} has a non-finite rhs", r));
    for (const Term& t : c.terms) {
      if (t.var.index < 0 || t.var.index >= num_variables()) {
        throw InputError(fmt::format("row {} references an undeclared variable", r));
      }
      if (!std::isfinite(t.coef)) {
        throw InputError(fmt::format("row {} has a non-finite coefficient", r));
      }
    }
  }
}

double MathProgram::evaluate(const std::vector<double>& values) const {
  double v = objective_offset_;
  for (std::size_t j = 0; j < variables_.size(); ++j) v += variables_[j].objective * values.at(j);
  return v;
}

double MathProgram::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const double x = values.at(j);
    worst = std::max({worst, variables_[j].lower - x, x - variables_[j].upper});
    if (variables_[j].kind == VarKind::binary) worst = std::max(worst, std::abs(x - std::round(x)));
  }
  for (const auto& c : constraints_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * values.at(static_cast<std::size_t>(t.var.index));
    switch (c.comparator) {
      case Comparator::less_equal: worst = std::max(worst, lhs - c.rhs); break;
      case Comparator::greater_equal: worst = std::max(worst, c.rhs - lhs); break;
      case Comparator::equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::time_limit_with_incumbent: return "time_limit_with_incumbent";
    case SolveStatus::time_limit_no_incumbent: return "time_limit_no_incumbent";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kIntegralityTol = 1e-6;
constexpr double kImproveTol = 1e-9;

struct Node {
  double bound = 0.0;
  int depth = 0;
  long long seq = 0;
  std::vector<std::pair<int, signed char>> fixings;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

[[noreturn]] void lp_failure(LpStatus status) {
  if (status == LpStatus::iteration_limit) {
    throw SolverError("simplex iteration limit reached");
  }
  throw SolverError("unexpected LP status");
}

bool integral_objective(const MathProgram& program) {
  if (std::abs(program.objective_offset() - std::round(program.objective_offset())) > 1e-12) return false;
  for (const auto& v : program.variables()) {
    if (v.kind == VarKind::binary) {
      if (std::abs(v.objective - std::round(v.objective)) > 1e-12) return false;
    } else if (v.objective != 0.0) {
      return false;
    }
  }
  return true;
}

class BranchAndBound {
 public:
  BranchAndBound(const MathProgram& program, Deadline deadline)
      : program_(program), lp_(program), deadline_(deadline) {
    for (int j = 0; j < program.num_variables(); ++j) {
      if (program.variables()[static_cast<std::size_t>(j)].kind == VarKind::binary) {
        binaries_.push_back(j);
      }
    }
    fixed_.assign(static_cast<std::size_t>(program.num_variables()), -1);
    step_ = program.objective_step();
    if (step_ <= 0.0) step_ = integral_objective(program) ? 1.0 : 0.0;
  }

  SolveOutcome run() {
    SolveOutcome out;
    try_starts();
    if (timed_out_) return finish(out);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    Node current;
    bool have_current = true;
    long long seq = 0;
    double global_bound = kInfinity;
    bool root = true;
    for (;;) {
      if (!have_current) {
        while (!open.empty() && prunable(open.top().bound)) open.pop();
        if (open.empty()) break;
        current = open.top();
        open.pop();
      }
      have_current = false;
      if (deadline_ && Clock::now() > *deadline_) {
        timed_out_ = true;
        break;
      }
      apply(current.fixings);
      ++nodes_;
      const LpStatus st = lp_.solve(deadline_);
      if (st == LpStatus::time_limit) {
        timed_out_ = true;
        break;
      }
      if (st == LpStatus::infeasible) {
        root = false;
        continue;
      }
      if (st == LpStatus::unbounded) {
        if (root) {
          out.status = SolveStatus::unbounded;
          out.stats = stats(-kInfinity);
          return out;
        }
        throw SolverError("unbounded LP relaxation below the root");
      }
      if (st != LpStatus::optimal) lp_failure(st);
      const double bound = lp_.objective() + program_.objective_offset();
      if (root) global_bound = bound;
      root = false;
      if (prunable(bound)) continue;

      int branch = -1;
      double best_frac = kIntegralityTol;
      for (int j : binaries_) {
        const double v = lp_.value(j);
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > best_frac + 1e-12) {
          best_frac = frac;
          branch = j;
        }
      }
      if (branch < 0) {
        offer(lp_.primal(), bound);
        continue;
      }
      const signed char dive = lp_.value(branch) >= 0.5 ? 1 : 0;
      Node other{bound, current.depth + 1, ++seq, current.fixings};
      other.fixings.emplace_back(branch, static_cast<signed char>(1 - dive));
      open.push(std::move(other));
      current.fixings.emplace_back(branch, dive);
      current.bound = bound;
      ++current.depth;
      have_current = true;
    }

    double best_bound = has_incumbent_ ? incumbent_obj_ : global_bound;
    if (timed_out_) {
      double lowest = has_incumbent_ ? incumbent_obj_ : kInfinity;
      if (!open.empty()) lowest = std::min(lowest, open.top().bound);
      if (have_current) lowest = std::min(lowest, current.bound);
      best_bound = lowest;
    }
    out.stats = stats(best_bound);
    return finish(out);
  }

 private:
  SolveStats stats(double bound) const {
    SolveStats s;
    s.simplex_iterations = lp_.iterations() + start_iterations_;
    s.nodes = nodes_;
    s.best_bound = bound;
    return s;
  }

  SolveOutcome& finish(SolveOutcome& out) {
    out.stats.simplex_iterations = lp_.iterations() + start_iterations_;
    out.stats.nodes = nodes_;
    if (has_incumbent_) {
      out.status = timed_out_ ? SolveStatus::time_limit_with_incumbent : SolveStatus::optimal;
      out.objective = incumbent_obj_;
      out.values = incumbent_;
      if (!timed_out_) out.stats.best_bound = incumbent_obj_;
    } else {
      out.status = timed_out_ ? SolveStatus::time_limit_no_incumbent : SolveStatus::infeasible;
    }
    return out;
  }

  bool prunable(double bound) const {
    if (!has_incumbent_) return false;
    if (bound >= incumbent_obj_ - kFeasibilityTolerance) return true;
    if (step_ <= 0.0) return false;
    return step_ * std::ceil((bound - kFeasibilityTolerance) / step_) >= incumbent_obj_ - 0.5 * step_;
  }

  void offer(std::vector<double> values, double objective) {
    if (has_incumbent_ && objective >= incumbent_obj_ - kImproveTol) return;
    for (int j : binaries_) {
      auto& v = values[static_cast<std::size_t>(j)];
      v = std::round(v);
    }
    incumbent_ = std::move(values);
    incumbent_obj_ = objective;
    has_incumbent_ = true;
  }

  void apply(const std::vector<std::pair<int, signed char>>& fixings) {
    std::vector<signed char> want(fixed_.size(), -1);
    for (auto [j, v] : fixings) want[static_cast<std::size_t>(j)] = v;
    for (int j : binaries_) {
      const auto ju = static_cast<std::size_t>(j);
      if (want[ju] == fixed_[ju]) continue;
      fixed_[ju] = want[ju];
      if (want[ju] < 0) {
        lp_.set_bounds(j, 0.0, 1.0);
      } else {
        lp_.set_bounds(j, want[ju], want[ju]);
      }
    }
  }

  void try_starts() {
    for (const auto& start : program_.starts()) {
      if (start.size() != static_cast<std::size_t>(program_.num_variables())) {
        throw InputError("MIP start has the wrong number of entries");
      }
      std::vector<std::pair<int, signed char>> fixings;
      bool usable = true;
      for (int j : binaries_) {
        const double v = start[static_cast<std::size_t>(j)];
        if (std::abs(v - std::round(v)) > kIntegralityTol || v < -0.5 || v > 1.5) {
          usable = false;
          break;
        }
        fixings.emplace_back(j, static_cast<signed char>(std::lround(v)));
      }
      if (!usable) continue;
      DenseSimplex lp(program_);
      for (auto [j, v] : fixings) lp.set_bounds(j, v, v);
      const LpStatus st = lp.solve(deadline_);
      start_iterations_ += lp.iterations();
      if (st == LpStatus::time_limit) {
        timed_out_ = true;
        return;
      }
      if (st != LpStatus::optimal) continue;
      offer(lp.primal(), lp.objective() + program_.objective_offset());
    }
  }

  const MathProgram& program_;
  DenseSimplex lp_;
  Deadline deadline_;
  std::vector<int> binaries_;
  std::vector<signed char> fixed_;
  double step_ = 0.0;

  bool has_incumbent_ = false;
  double incumbent_obj_ = kInfinity;
  std::vector<double> incumbent_;
  bool timed_out_ = false;
  long long nodes_ = 0;
  long long start_iterations_ = 0;
};

}  // namespace

SolveOutcome solve_program(const MathProgram& program) {
  program.validate();
  Deadline deadline;
  if (program.time_limit()) {
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(*program.time_limit()));
  }
  if (program.num_binaries() > 0) return BranchAndBound(program, deadline).run();

  DenseSimplex lp(program);
  const LpStatus st = lp.solve(deadline);
  SolveOutcome out;
  out.stats.simplex_iterations = lp.iterations();
  switch (st) {
    case LpStatus::optimal:
      out.status = SolveStatus::optimal;
      out.values = lp.primal();
      out.objective = lp.objective() + program.objective_offset();
      out.stats.best_bound = out.objective;
      return out;
    case LpStatus::infeasible: out.status = SolveStatus::infeasible; return out;
    case LpStatus::unbounded: out.status = SolveStatus::unbounded; return out;
    case LpStatus::time_limit: out.status = SolveStatus::time_limit_no_incumbent; return out;
    default: lp_failure(st);
  }
}

namespace {

std::string var_name(const MathProgram& program, int j) {
  const auto& name = program.variables()[static_cast<std::size_t>(j)].name;
  return name.empty() ? fmt::format("x{}", j) : name;
}

void write_linear(std::ostringstream& os, const MathProgram& program,
                  const std::vector<std::pair<int, double>>& terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  bool first = true;
  for (auto [j, c] : terms) {
    if (c < 0) {
      os << " - " << fmt::format("{:.12g}", -c);
    } else if (first) {
      os << ' ' << fmt::format("{:.12g}", c);
    } else {
      os << " + " << fmt::format("{:.12g}", c);
    }
    os << ' ' << var_name(program, j);
    first = false;
  }
}

}  // namespace

std::string to_lp_text(const MathProgram& program) {
  std::ostringstream os;
  os << "Minimize\n obj:";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < program.num_variables(); ++j) {
    const double c = program.variables()[static_cast<std::size_t>(j)].objective;
    if (c != 0.0) obj.emplace_back(j, c);
  }
  write_linear(os, program, obj);
  if (program.objective_offset() != 0.0) {
    os << fmt::format(" + {:.12g} constant", program.objective_offset());
  }
  os << "\nSubject To\n";
  for (int r = 0; r < program.num_constraints(); ++r) {
    const auto& c = program.constraints()[static_cast<std::size_t>(r)];
    os << ' ' << (c.name.empty() ? fmt::format("c{}", r) : c.name) << ':';
    std::vector<std::pair<int, double>> terms;
    for (const Term& t : c.terms) terms.emplace_back(t.var.index, t.coef);
    write_linear(os, program, terms);
    const char* op = c.comparator == Comparator::less_equal      ? "<="
                     : c.comparator == Comparator::greater_equal ? ">="
                                                                 : "=";
    os << ' ' << op << ' ' << fmt::format("{:.12g}", c.rhs) << '\n';
  }
  if (program.objective_offset() != 0.0) os << " fix_constant: constant = 1\n";
  os << "Bounds\n";
  for (int j = 0; j < program.num_variables(); ++j) {
    const auto& v = program.variables()[static_cast<std::size_t>(j)];
    if (v.kind == VarKind::binary) continue;
    const std::string name = var_name(program, j);
    const std::string lo = std::isfinite(v.lower) ? fmt::format("{:.12g}", v.lower) : "-inf";
    const std::string hi = std::isfinite(v.upper) ? fmt::format("{:.12g}", v.upper) : "+inf";
    os << ' ' << lo << " <= " << name << " <= " << hi << '\n';
  }
  if (program.num_binaries() > 0) {
    os << "Binaries\n";
    for (int j = 0; j < program.num_variables(); ++j) {
      if (program.variables()[static_cast<std::size_t>(j)].kind == VarKind::binary) {
        os << ' ' << var_name(program, j) << '\n';
      }
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace owaelicit::mp
