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

#include "owaelicit/mp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "owaelicit/errors.hpp"

namespace owaelicit::mp {

namespace {

constexpr double kFeasTol = 1e-8;     // basic variable bound violation
constexpr double kHarrisTol = 1e-9;   // bound relaxation in ratio tests
constexpr double kDualTol = 1e-9;     // reduced-cost sign
constexpr double kPivotTol = 1e-9;    // smallest acceptable pivot element
constexpr double kDropTol = 1e-13;    // entries below this become zero
constexpr long long kRefactorInterval = 2000;
constexpr int kBlandTrigger = 60;     // degenerate iterations before Bland's rule

bool finite(double v) { return std::isfinite(v); }

std::vector<std::pair<int, double>> merge_terms(std::span<const Term> terms, int num_vars) {
  std::map<int, double> merged;
  for (const Term& t : terms) {
    if (t.var.index < 0 || t.var.index >= num_vars) {
      throw InputError("constraint references an undeclared variable");
    }
    merged[t.var.index] += t.coef;
  }
  std::vector<std::pair<int, double>> out;
  for (auto [j, a] : merged) {
    if (a != 0.0) out.emplace_back(j, a);
  }
  return out;
}

std::pair<double, double> row_bounds(Comparator comparator, double rhs) {
  switch (comparator) {
    case Comparator::less_equal: return {-kInfinity, rhs};
    case Comparator::greater_equal: return {rhs, kInfinity};
    case Comparator::equal: return {rhs, rhs};
  }
  return {rhs, rhs};
}

}  // namespace

DenseSimplex::DenseSimplex(const MathProgram& program) : n_(program.num_variables()) {
  const auto& vars = program.variables();
  cost_.reserve(vars.size());
  for (const auto& v : vars) {
    cost_.push_back(v.objective);
    lower_.push_back(v.lower);
    upper_.push_back(v.upper);
  }
  for (const auto& c : program.constraints()) {
    rows_.push_back(merge_terms(c.terms, n_));
    auto [lo, hi] = row_bounds(c.comparator, c.rhs);
    lower_.push_back(lo);
    upper_.push_back(hi);
    cost_.push_back(0.0);
  }
  m_ = static_cast<int>(rows_.size());
  status_.assign(cols(), VarStatus::at_lower);
  x_.assign(cols(), 0.0);
  d_ = cost_;
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  reset_to_slack_basis();
}

void DenseSimplex::reset_to_slack_basis() {
  tableau_.assign(static_cast<std::size_t>(m_), std::vector<double>(cols(), 0.0));
  basis_.resize(static_cast<std::size_t>(m_));
  for (int r = 0; r < m_; ++r) {
    double* t = row(r);
    for (auto [j, a] : rows_[static_cast<std::size_t>(r)]) t[j] = -a;
    t[n_ + r] = 1.0;
    basis_[static_cast<std::size_t>(r)] = n_ + r;
    status_[static_cast<std::size_t>(n_ + r)] = VarStatus::basic;
  }
  pivots_since_refactor_ = 0;
}

void DenseSimplex::place_nonbasic(int j) {
  const auto ju = static_cast<std::size_t>(j);
  const double lo = lower_[ju];
  const double hi = upper_[ju];
  if (finite(lo) && finite(hi)) {
    status_[ju] = (lo < hi && d_[ju] < 0.0) ? VarStatus::at_upper : VarStatus::at_lower;
  } else if (finite(lo)) {
    status_[ju] = VarStatus::at_lower;
  } else if (finite(hi)) {
    status_[ju] = VarStatus::at_upper;
  } else {
    status_[ju] = VarStatus::at_zero;
  }
  switch (status_[ju]) {
    case VarStatus::at_lower: x_[ju] = lo; break;
    case VarStatus::at_upper: x_[ju] = hi; break;
    default: x_[ju] = 0.0; break;
  }
}

void DenseSimplex::compute_primal() {
  nz_.clear();
  for (std::size_t j = 0; j < cols(); ++j) {
    if (status_[j] != VarStatus::basic && x_[j] != 0.0) nz_.push_back(static_cast<int>(j));
  }
  for (int r = 0; r < m_; ++r) {
    const double* t = row(r);
    double v = 0.0;
    for (int j : nz_) v -= t[j] * x_[static_cast<std::size_t>(j)];
    x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = v;
  }
}

void DenseSimplex::compute_reduced_costs(const std::vector<double>& cost) {
  d_ = cost;
  for (int r = 0; r < m_; ++r) {
    const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
    if (cb == 0.0) continue;
    const double* t = row(r);
    for (std::size_t j = 0; j < cols(); ++j) d_[j] -= cb * t[j];
  }
  for (int b : basis_) d_[static_cast<std::size_t>(b)] = 0.0;
}

bool DenseSimplex::primal_feasible() const {
  for (int b : basis_) {
    const auto bu = static_cast<std::size_t>(b);
    if (x_[bu] < lower_[bu] - kFeasTol || x_[bu] > upper_[bu] + kFeasTol) return false;
  }
  return true;
}

bool DenseSimplex::dual_feasible() const {
  for (std::size_t j = 0; j < cols(); ++j) {
    if (lower_[j] == upper_[j]) continue;
    switch (status_[j]) {
      case VarStatus::basic: break;
      case VarStatus::at_lower:
        if (d_[j] < -kDualTol * 10) return false;
        break;
      case VarStatus::at_upper:
        if (d_[j] > kDualTol * 10) return false;
        break;
      case VarStatus::at_zero:
        if (std::abs(d_[j]) > kDualTol * 10) return false;
        break;
    }
  }
  return true;
}

double DenseSimplex::max_residual() const {
  double worst = 0.0;
  for (int r = 0; r < m_; ++r) {
    double v = -x_[static_cast<std::size_t>(n_ + r)];
    for (auto [j, a] : rows_[static_cast<std::size_t>(r)]) v += a * x_[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

void DenseSimplex::pivot(int p, int q) {
  double* rp = row(p);
  const double inv = 1.0 / rp[q];
  nz_.clear();
  for (std::size_t j = 0; j < cols(); ++j) {
    if (rp[j] == 0.0) continue;
    rp[j] *= inv;
    if (std::abs(rp[j]) < kDropTol) {
      rp[j] = 0.0;
    } else {
      nz_.push_back(static_cast<int>(j));
    }
  }
  rp[q] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == p) continue;
    double* ri = row(i);
    const double f = ri[q];
    if (f == 0.0) continue;
    for (int j : nz_) {
      const double v = ri[j] - f * rp[j];
      ri[j] = std::abs(v) < kDropTol ? 0.0 : v;
    }
    ri[q] = 0.0;
  }
  const double fd = d_[static_cast<std::size_t>(q)];
  if (fd != 0.0) {
    for (int j : nz_) d_[static_cast<std::size_t>(j)] -= fd * rp[j];
  }
  d_[static_cast<std::size_t>(q)] = 0.0;
  basis_[static_cast<std::size_t>(p)] = q;
  status_[static_cast<std::size_t>(q)] = VarStatus::basic;
  ++pivots_since_refactor_;
}

void DenseSimplex::refactor() {
  const std::vector<int> target = basis_;
  const std::vector<VarStatus> saved_status = status_;
  const std::vector<double> saved_x = x_;
  std::vector<char> in_target(cols(), 0);
  for (int b : target) in_target[static_cast<std::size_t>(b)] = 1;

  // Nonbasic statuses and values are kept; only the tableau is rebuilt.
  tableau_.assign(static_cast<std::size_t>(m_), std::vector<double>(cols(), 0.0));
  for (int r = 0; r < m_; ++r) {
    double* t = row(r);
    for (auto [j, a] : rows_[static_cast<std::size_t>(r)]) t[j] = -a;
    t[n_ + r] = 1.0;
    basis_[static_cast<std::size_t>(r)] = n_ + r;
  }
  for (int r = 0; r < m_; ++r) {
    if (!in_target[static_cast<std::size_t>(n_ + r)]) {
      // Will be pivoted out below; keep status consistent if it stays.
      status_[static_cast<std::size_t>(n_ + r)] = VarStatus::basic;
    }
  }
  std::vector<int> leaving_status_fix;
  for (int q : target) {
    if (q >= n_) continue;
    int p = -1;
    double best = 1e-9;
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b < n_ || in_target[static_cast<std::size_t>(b)]) continue;
      const double a = std::abs(row(r)[q]);
      if (a > best) {
        best = a;
        p = r;
      }
    }
    if (p < 0) {
      // Singular column: leave it nonbasic, its row keeps the logical.
      place_nonbasic(q);
      continue;
    }
    const int leaving = basis_[static_cast<std::size_t>(p)];
    pivot(p, q);
    leaving_status_fix.push_back(leaving);
  }
  for (int l : leaving_status_fix) {
    const auto lu = static_cast<std::size_t>(l);
    status_[lu] = saved_status[lu];
    x_[lu] = saved_x[lu];
  }
  pivots_since_refactor_ = 0;
  compute_primal();
  compute_reduced_costs(cost_);
}

bool DenseSimplex::out_of_time(Deadline deadline) {
  if (!deadline) return false;
  if ((iterations_ & 31) != 0) return false;
  return std::chrono::steady_clock::now() > *deadline;
}

DenseSimplex::PhaseResult DenseSimplex::primal_simplex(bool phase_one, Deadline deadline) {
  const long long max_iter = iterations_ + 50000 + 50LL * static_cast<long long>(cols());
  std::vector<double> phase_cost;
  std::vector<double> saved_d;
  int degenerate = 0;
  double last_obj = kInfinity;
  for (;;) {
    if (out_of_time(deadline)) return PhaseResult::time_limit;
    if (iterations_ > max_iter) return PhaseResult::iteration_limit;
    if (pivots_since_refactor_ >= kRefactorInterval) refactor();

    const std::vector<double>* dj = &d_;
    double obj = 0.0;
    if (phase_one) {
      phase_cost.assign(cols(), 0.0);
      bool any = false;
      for (int b : basis_) {
        const auto bu = static_cast<std::size_t>(b);
        if (x_[bu] < lower_[bu] - kFeasTol) {
          phase_cost[bu] = -1.0;
          obj += lower_[bu] - x_[bu];
          any = true;
        } else if (x_[bu] > upper_[bu] + kFeasTol) {
          phase_cost[bu] = 1.0;
          obj += x_[bu] - upper_[bu];
          any = true;
        }
      }
      if (!any) return PhaseResult::done;
      saved_d.swap(d_);
      compute_reduced_costs(phase_cost);
      saved_d.swap(d_);
      dj = &saved_d;
    } else {
      obj = objective();
    }
    if (obj < last_obj - 1e-12) {
      degenerate = 0;
    } else {
      ++degenerate;
    }
    last_obj = std::min(last_obj, obj);
    const bool bland = degenerate > kBlandTrigger;

    // Pricing.
    int q = -1;
    double best = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (status_[j] == VarStatus::basic || lower_[j] == upper_[j]) continue;
      const double d = (*dj)[j];
      double score = 0.0;
      switch (status_[j]) {
        case VarStatus::at_lower: score = -d; break;
        case VarStatus::at_upper: score = d; break;
        case VarStatus::at_zero: score = std::abs(d); break;
        default: break;
      }
      if (score <= kDualTol) continue;
      if (bland) {
        q = static_cast<int>(j);
        break;
      }
      if (score > best) {
        best = score;
        q = static_cast<int>(j);
      }
    }
    if (q < 0) return phase_one ? PhaseResult::infeasible : PhaseResult::done;

    const auto qu = static_cast<std::size_t>(q);
    double dir = 1.0;
    if (status_[qu] == VarStatus::at_upper) dir = -1.0;
    if (status_[qu] == VarStatus::at_zero && (*dj)[qu] > 0.0) dir = -1.0;

    // Harris ratio test, pass 1: relaxed step bound.
    const double flip = (finite(lower_[qu]) && finite(upper_[qu])) ? upper_[qu] - lower_[qu]
                                                                    : kInfinity;
    double theta_max = flip;
    auto blocking_bound = [&](int r, double rate, double& bound) -> bool {
      const int b = basis_[static_cast<std::size_t>(r)];
      const auto bu = static_cast<std::size_t>(b);
      const double xv = x_[bu];
      if (phase_one && xv < lower_[bu] - kFeasTol) {
        if (rate <= 0.0) return false;
        bound = lower_[bu];
        return true;
      }
      if (phase_one && xv > upper_[bu] + kFeasTol) {
        if (rate >= 0.0) return false;
        bound = upper_[bu];
        return true;
      }
      bound = rate > 0.0 ? upper_[bu] : lower_[bu];
      return finite(bound);
    };
    for (int r = 0; r < m_; ++r) {
      const double rate = -row(r)[q] * dir;
      if (std::abs(rate) < kPivotTol) continue;
      double bound = 0.0;
      if (!blocking_bound(r, rate, bound)) continue;
      const double xv = x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
      const double relaxed = rate > 0.0 ? (bound + kHarrisTol - xv) / rate
                                        : (bound - kHarrisTol - xv) / rate;
      theta_max = std::min(theta_max, relaxed);
    }
    // A basic variable just outside its bound but within kFeasTol gives a
    // negative relaxed step; pass 2 then has to pick it with a zero step.
    theta_max = std::max(theta_max, 0.0);
    if (!finite(theta_max)) {
      // A ray from drifted tableau entries is common after long pivot runs;
      // trust it only on a fresh factorization.
      if (pivots_since_refactor_ > 0) {
        refactor();
        degenerate = 0;
        last_obj = kInfinity;
        continue;
      }
      if (phase_one) throw SolverError("simplex phase 1 ray: numerical breakdown");
      return PhaseResult::unbounded;
    }

    // Pass 2: largest pivot among rows blocking within theta_max.
    int p = -1;
    double p_rate = 0.0;
    double p_bound = 0.0;
    double theta = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double rate = -row(r)[q] * dir;
      if (std::abs(rate) < kPivotTol) continue;
      double bound = 0.0;
      if (!blocking_bound(r, rate, bound)) continue;
      const double xv = x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
      const double ratio = std::max(0.0, (bound - xv) / rate);
      if (ratio > theta_max) continue;
      if (p < 0 || std::abs(rate) > std::abs(p_rate) ||
          (bland && std::abs(rate) == std::abs(p_rate) &&
           basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(p)])) {
        p = r;
        p_rate = rate;
        p_bound = bound;
        theta = ratio;
      }
    }

    if (p < 0 && !finite(flip)) throw SolverError("simplex: ratio test found no blocking row");
    const bool do_flip = p < 0 || flip <= theta;
    if (do_flip) theta = flip;

    for (int r = 0; r < m_; ++r) {
      const double a = row(r)[q];
      if (a == 0.0) continue;
      x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] -= a * dir * theta;
    }
    x_[qu] += dir * theta;
    ++iterations_;

    if (do_flip) {
      if (status_[qu] == VarStatus::at_lower) {
        status_[qu] = VarStatus::at_upper;
        x_[qu] = upper_[qu];
      } else {
        status_[qu] = VarStatus::at_lower;
        x_[qu] = lower_[qu];
      }
      continue;
    }
    const int leaving = basis_[static_cast<std::size_t>(p)];
    const auto lu = static_cast<std::size_t>(leaving);
    pivot(p, q);
    x_[lu] = p_bound;
    status_[lu] = (p_bound == lower_[lu]) ? VarStatus::at_lower : VarStatus::at_upper;
  }
}

DenseSimplex::PhaseResult DenseSimplex::dual_simplex(Deadline deadline) {
  const long long max_iter = iterations_ + 50000 + 50LL * static_cast<long long>(cols());
  for (;;) {
    if (out_of_time(deadline)) return PhaseResult::time_limit;
    if (iterations_ > max_iter) return PhaseResult::iteration_limit;
    if (pivots_since_refactor_ >= kRefactorInterval) refactor();

    // Leaving row by dual steepest edge: infeasibility squared over the
    // squared norm of the row of B^-1, read off the logical columns.
    int p = -1;
    double worst = 0.0;
    bool raise = false;
    for (int r = 0; r < m_; ++r) {
      const auto bu = static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)]);
      double infeas = 0.0;
      bool up = false;
      if (x_[bu] < lower_[bu] - kFeasTol) {
        infeas = lower_[bu] - x_[bu];
        up = true;
      } else if (x_[bu] > upper_[bu] + kFeasTol) {
        infeas = x_[bu] - upper_[bu];
      } else {
        continue;
      }
      const double* rr = row(r) + n_;
      double norm = 0.0;
      for (int i = 0; i < m_; ++i) norm += rr[i] * rr[i];
      const double score = infeas * infeas / std::max(norm, 1e-12);
      if (score > worst) {
        worst = score;
        p = r;
        raise = up;
      }
    }
    if (p < 0) return PhaseResult::done;

    const double* rp = row(p);
    // x_B(p) = -sum_j rp[j] x_j: raising it needs rp[j] * dx_j < 0.
    auto eligible = [&](std::size_t j, double& slack) -> bool {
      if (status_[j] == VarStatus::basic || lower_[j] == upper_[j]) return false;
      const double a = rp[j];
      if (std::abs(a) < kPivotTol) return false;
      const double s = raise ? -a : a;  // sign of the required dx_j direction
      switch (status_[j]) {
        case VarStatus::at_lower:
          if (s <= 0.0) return false;
          slack = std::max(d_[j], 0.0);
          return true;
        case VarStatus::at_upper:
          if (s >= 0.0) return false;
          slack = std::max(-d_[j], 0.0);
          return true;
        case VarStatus::at_zero:
          slack = std::abs(d_[j]);
          return true;
        default:
          return false;
      }
    };
    double theta_max = kInfinity;
    for (std::size_t j = 0; j < cols(); ++j) {
      double slack = 0.0;
      if (!eligible(j, slack)) continue;
      theta_max = std::min(theta_max, (slack + kDualTol) / std::abs(rp[j]));
    }
    if (!finite(theta_max)) return PhaseResult::infeasible;
    int q = -1;
    double best_a = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) {
      double slack = 0.0;
      if (!eligible(j, slack)) continue;
      const double a = std::abs(rp[j]);
      if (slack / a > theta_max) continue;
      if (a > best_a) {
        best_a = a;
        q = static_cast<int>(j);
      }
    }
    if (q < 0) return PhaseResult::infeasible;

    const int leaving = basis_[static_cast<std::size_t>(p)];
    const auto lu = static_cast<std::size_t>(leaving);
    const double target = raise ? lower_[lu] : upper_[lu];
    const double step = (x_[lu] - target) / rp[q];
    for (int r = 0; r < m_; ++r) {
      const double a = row(r)[q];
      if (a == 0.0) continue;
      x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] -= a * step;
    }
    x_[static_cast<std::size_t>(q)] += step;
    ++iterations_;
    pivot(p, q);
    x_[lu] = target;
    status_[lu] = raise ? VarStatus::at_lower : VarStatus::at_upper;
    if (lower_[lu] == upper_[lu]) status_[lu] = VarStatus::at_lower;
  }
}

LpStatus DenseSimplex::solve(Deadline deadline) {
  auto map_failure = [](PhaseResult r) {
    switch (r) {
      case PhaseResult::unbounded: return LpStatus::unbounded;
      case PhaseResult::iteration_limit: return LpStatus::iteration_limit;
      case PhaseResult::time_limit: return LpStatus::time_limit;
      default: return LpStatus::infeasible;
    }
  };
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (attempt > 0) refactor();
    compute_primal();
    compute_reduced_costs(cost_);
    if (!primal_feasible()) {
      PhaseResult r = PhaseResult::done;
      if (dual_feasible()) {
        r = dual_simplex(deadline);
      } else {
        r = primal_simplex(true, deadline);
      }
      if (r == PhaseResult::infeasible) {
        if (pivots_since_refactor_ > 0 && attempt == 0 && max_residual() > 1e-7) continue;
        return LpStatus::infeasible;
      }
      if (r != PhaseResult::done) return map_failure(r);
      if (!primal_feasible()) {
        const PhaseResult r1 = primal_simplex(true, deadline);
        if (r1 == PhaseResult::infeasible) return LpStatus::infeasible;
        if (r1 != PhaseResult::done) return map_failure(r1);
      }
    }
    const PhaseResult r2 = primal_simplex(false, deadline);
    if (r2 != PhaseResult::done) return map_failure(r2);
    if (max_residual() > 1e-7 || !primal_feasible()) continue;
    return LpStatus::optimal;
  }
  throw SolverError("simplex: numerical trouble, residual stays above tolerance");
}

void DenseSimplex::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= n_) throw InputError("set_bounds: unknown variable");
  const auto vu = static_cast<std::size_t>(var);
  lower_[vu] = lower;
  upper_[vu] = upper;
  if (status_[vu] != VarStatus::basic) place_nonbasic(var);
}

int DenseSimplex::add_row(std::span<const Term> terms, Comparator comparator, double rhs) {
  auto coeffs = merge_terms(terms, n_);
  const int logical = n_ + m_;
  for (auto& t : tableau_) t.push_back(0.0);
  auto [lo, hi] = row_bounds(comparator, rhs);
  cost_.push_back(0.0);
  lower_.push_back(lo);
  upper_.push_back(hi);
  status_.push_back(VarStatus::basic);
  x_.push_back(0.0);
  d_.push_back(0.0);

  const std::size_t width = cols() + 1;
  std::vector<double> v(width, 0.0);
  for (auto [j, a] : coeffs) v[static_cast<std::size_t>(j)] = -a;
  v[static_cast<std::size_t>(logical)] = 1.0;
  for (int r = 0; r < m_; ++r) {
    const int b = basis_[static_cast<std::size_t>(r)];
    const double f = v[static_cast<std::size_t>(b)];
    if (f == 0.0) continue;
    const double* t = row(r);
    for (std::size_t j = 0; j < width; ++j) {
      if (t[j] != 0.0) v[j] -= f * t[j];
    }
    v[static_cast<std::size_t>(b)] = 0.0;
  }
  double val = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    if (status_[j] != VarStatus::basic && v[j] != 0.0) val -= v[j] * x_[j];
  }
  x_[static_cast<std::size_t>(logical)] = val;
  tableau_.push_back(std::move(v));
  basis_.push_back(logical);
  rows_.push_back(std::move(coeffs));
  ++m_;
  return m_ - 1;
}

double DenseSimplex::objective() const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
  return v;
}

std::vector<double> DenseSimplex::primal() const {
  return {x_.begin(), x_.begin() + n_};
}

}  // namespace owaelicit::mp
