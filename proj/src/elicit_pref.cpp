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

#include "owaelicit/elicit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <set>

#include <fmt/format.h>

#include "owaelicit/mp/program.hpp"
#include "owaelicit/mp/simplex.hpp"
#include "owaelicit/owa.hpp"

namespace owaelicit {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kZeroSnap = 1e-9;

mp::Deadline deadline_for(const std::optional<double>& seconds) {
  if (!seconds) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*seconds));
}

/// Adds K variables in [0,1] constrained to the non-increasing simplex.
std::vector<mp::VarId> add_weight_block(mp::MathProgram& p, std::size_t K, double objective_scale = 0.0) {
  std::vector<mp::VarId> w;
  std::vector<mp::Term> sum;
  for (std::size_t k = 0; k < K; ++k) {
    double obj = 0.0;
    if (objective_scale != 0.0 && K > 1) {
      obj = objective_scale * static_cast<double>(K - 1 - k) / static_cast<double>(K - 1);
    }
    w.push_back(p.add_continuous(0.0, 1.0, obj));
    sum.push_back({w.back(), 1.0});
  }
  p.add_constraint(std::move(sum), mp::Comparator::equal, 1.0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    p.add_constraint({{w[k], 1.0}, {w[k + 1], -1.0}}, mp::Comparator::greater_equal, 0.0);
  }
  return w;
}

struct MasterConfig {
  Norm norm = Norm::one;
  bool slack_variables = false;
  double slack_weight = 1e6;
  std::vector<double> fixed_slacks;  // used when !slack_variables
  std::optional<WeightVector> fixed_w;
  /// When set, minimize orness subject to total distance <= bound.
  std::optional<double> distance_bound;
};

class Master {
 public:
  Master(const std::vector<Observation>& obs, MasterConfig cfg) : obs_(&obs), cfg_(std::move(cfg)) {
    K_ = obs.front().costs.scenarios();
    const std::size_t S = obs.size();
    if (!cfg_.slack_variables && cfg_.fixed_slacks.empty()) cfg_.fixed_slacks.assign(S, 0.0);
    for (const auto& o : obs) observed_.push_back(sort_objectives(o.costs, o.chosen).values);

    const bool orness_mode = cfg_.distance_bound.has_value();
    w_ = add_weight_block(program_, K_, orness_mode ? 1.0 : 0.0);
    if (cfg_.fixed_w) {
      for (std::size_t k = 0; k < K_; ++k) program_.set_bounds(w_[k], (*cfg_.fixed_w)[k], (*cfg_.fixed_w)[k]);
    }
    const double dist_obj = orness_mode ? 0.0 : 1.0;
    std::vector<mp::Term> all_d;
    for (std::size_t s = 0; s < S; ++s) {
      ws_.push_back(add_weight_block(program_, K_));
      std::vector<mp::VarId> d;
      if (cfg_.norm == Norm::inf) {
        d.push_back(program_.add_continuous(0.0, mp::kInfinity, dist_obj));
      } else {
        for (std::size_t k = 0; k < K_; ++k) d.push_back(program_.add_continuous(0.0, mp::kInfinity, dist_obj));
      }
      for (std::size_t k = 0; k < K_; ++k) {
        const auto dk = d[cfg_.norm == Norm::inf ? 0 : k];
        program_.add_constraint({{dk, 1.0}, {w_[k], -1.0}, {ws_[s][k], 1.0}}, mp::Comparator::greater_equal, 0.0);
        program_.add_constraint({{dk, 1.0}, {w_[k], 1.0}, {ws_[s][k], -1.0}}, mp::Comparator::greater_equal, 0.0);
      }
      for (auto v : d) all_d.push_back({v, 1.0});
      d_.push_back(std::move(d));
      if (cfg_.slack_variables) {
        slack_.push_back(program_.add_continuous(0.0, mp::kInfinity, cfg_.slack_weight));
      }
    }
    if (orness_mode) program_.add_constraint(std::move(all_d), mp::Comparator::less_equal, *cfg_.distance_bound);
    lp_ = std::make_unique<mp::DenseSimplex>(program_);
  }

  void add_cut(std::size_t s, const SolutionVector& x) {
    const auto a = sort_objectives((*obs_)[s].costs, x).values;
    std::vector<mp::Term> terms;
    for (std::size_t k = 0; k < K_; ++k) {
      const double c = observed_[s][k] - a[k];
      if (c != 0.0) terms.push_back({ws_[s][k], c});
    }
    if (terms.empty()) return;
    double rhs = 0.0;
    if (cfg_.slack_variables) {
      terms.push_back({slack_[s], -1.0});
    } else {
      rhs = cfg_.fixed_slacks[s];
    }
    lp_->add_row(terms, mp::Comparator::less_equal, rhs);
  }

  mp::LpStatus solve(mp::Deadline deadline) { return lp_->solve(deadline); }
  double objective() const { return lp_->objective(); }

  std::vector<double> w_raw() const { return values(w_); }
  std::vector<double> ws_raw(std::size_t s) const { return values(ws_[s]); }
  double slack(std::size_t s) const {
    return cfg_.slack_variables ? std::max(0.0, lp_->value(slack_[s].index)) : cfg_.fixed_slacks[s];
  }
  double distance() const {
    double total = 0.0;
    for (const auto& d : d_) {
      for (auto v : d) total += lp_->value(v.index);
    }
    return total;
  }

 private:
  std::vector<double> values(const std::vector<mp::VarId>& vars) const {
    std::vector<double> out;
    for (auto v : vars) out.push_back(lp_->value(v.index));
    return out;
  }

  const std::vector<Observation>* obs_;
  MasterConfig cfg_;
  std::size_t K_ = 0;
  std::vector<std::vector<double>> observed_;
  mp::MathProgram program_;
  std::vector<mp::VarId> w_;
  std::vector<std::vector<mp::VarId>> ws_;
  std::vector<std::vector<mp::VarId>> d_;
  std::vector<mp::VarId> slack_;
  std::unique_ptr<mp::DenseSimplex> lp_;
};

struct Snapshot {
  std::vector<double> w;
  std::vector<std::vector<double>> ws;
  std::vector<double> slacks;
  double distance = 0.0;
  double master_objective = 0.0;
};

struct LoopOutcome {
  bool infeasible = false;
  bool converged = false;
  bool timed_out = false;
  std::optional<Snapshot> last;
};

class PoolSet {
 public:
  explicit PoolSet(CutPools pools) : pools_(std::move(pools)) {
    for (const auto& pool : pools_) seen_.emplace_back(pool.begin(), pool.end());
  }
  bool insert(std::size_t s, const SolutionVector& x) {
    if (!seen_[s].insert(x).second) return false;
    pools_[s].push_back(x);
    return true;
  }
  const CutPools& pools() const { return pools_; }

 private:
  CutPools pools_;
  std::vector<std::set<SolutionVector>> seen_;
};

Master make_master(const std::vector<Observation>& obs, const MasterConfig& cfg, const PoolSet& pools) {
  Master m(obs, cfg);
  for (std::size_t s = 0; s < obs.size(); ++s) {
    for (const auto& x : pools.pools()[s]) m.add_cut(s, x);
  }
  return m;
}

LoopOutcome cut_loop(Master& master, const std::vector<Observation>& obs, PoolSet& pools,
                     const ElicitOptions& opts, int& iterations, std::string_view model) {
  LoopOutcome out;
  const std::size_t S = obs.size();
  while (iterations < opts.max_iterations) {
    const auto st = master.solve(deadline_for(opts.time_limit));
    ++iterations;
    if (st == mp::LpStatus::infeasible) {
      out.infeasible = true;
      return out;
    }
    if (st == mp::LpStatus::time_limit) {
      out.timed_out = true;
      return out;
    }
    if (st != mp::LpStatus::optimal) throw SolverError("master LP did not solve to optimality");

    Snapshot snap;
    snap.w = master.w_raw();
    snap.distance = master.distance();
    snap.master_objective = master.objective();
    for (std::size_t s = 0; s < S; ++s) {
      snap.ws.push_back(master.ws_raw(s));
      snap.slacks.push_back(master.slack(s));
    }
    int cuts = 0;
    for (std::size_t s = 0; s < S; ++s) {
      const auto ws = to_risk_averse(snap.ws[s]);
      const auto best = solve_owa(ws, obs[s].costs, obs[s].feasible_set);
      const double violation = owa_value(ws, obs[s].costs, obs[s].chosen) - best.value - snap.slacks[s];
      if (violation > opts.cut_tolerance && pools.insert(s, best.solution)) {
        master.add_cut(s, best.solution);
        ++cuts;
      }
    }
    out.last = std::move(snap);
    if (opts.progress) opts.progress(ProgressEvent{model, iterations, out.last->master_objective, cuts});
    if (cuts == 0) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

double snap_zero(double v) { return std::abs(v) < kZeroSnap ? 0.0 : v; }

}  // namespace

void ElicitOptions::validate() const {
  if (!(cut_tolerance > 0.0)) throw InputError("cut tolerance must be positive");
  if (max_iterations < 1) throw InputError("max_iterations must be at least 1");
  if (time_limit && !(*time_limit > 0.0)) throw InputError("time limit must be positive");
  if (!(slack_weight > 0.0)) throw InputError("slack weight must be positive");
  if (norm == Norm::two) throw InputError("the master distance must be the 1-norm or the inf-norm");
}

std::vector<std::size_t> ElicitationResult::pool_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& p : pools) out.push_back(p.size());
  return out;
}

void validate_observations(const std::vector<Observation>& observations) {
  if (observations.empty()) throw InputError("at least one observation is required");
  const std::size_t K = observations.front().costs.scenarios();
  for (std::size_t s = 0; s < observations.size(); ++s) {
    if (observations[s].costs.scenarios() != K) {
      throw InputError(fmt::format("observation {} has {} scenarios, expected {}", s,
                                   observations[s].costs.scenarios(), K));
    }
    observations[s].validate();
  }
}

WeightVector to_risk_averse(std::vector<double> raw) {
  std::sort(raw.rbegin(), raw.rend());
  return WeightVector::project(std::move(raw));
}

CutPools initial_pools(const std::vector<Observation>& observations) {
  CutPools pools(observations.size());
  for (std::size_t s = 0; s < observations.size(); ++s) {
    pools[s].push_back(observations[s].chosen);
    for (std::size_t t = 0; t < observations.size(); ++t) {
      const auto& x = observations[t].chosen;
      if (t == s || x.size() != observations[s].feasible_set.dimension()) continue;
      if (!observations[s].feasible_set.contains(x)) continue;
      if (std::find(pools[s].begin(), pools[s].end(), x) == pools[s].end()) pools[s].push_back(x);
    }
  }
  return pools;
}

std::optional<MasterSolution> solve_master(const std::vector<Observation>& observations,
                                           const CutPools& pools,
                                           const std::optional<std::vector<double>>& slacks,
                                           const ElicitOptions& opts) {
  validate_observations(observations);
  opts.validate();
  if (pools.size() != observations.size()) throw InputError("one cut pool per observation is required");
  MasterConfig cfg;
  cfg.norm = opts.norm;
  if (slacks) {
    if (slacks->size() != observations.size()) throw InputError("one slack per observation is required");
    cfg.fixed_slacks = *slacks;
  }
  Master master(observations, cfg);
  for (std::size_t s = 0; s < observations.size(); ++s) {
    for (const auto& x : pools[s]) {
      if (!observations[s].feasible_set.contains(x)) throw InputError("cut pool holds an infeasible solution");
      master.add_cut(s, x);
    }
  }
  const auto st = master.solve(deadline_for(opts.time_limit));
  if (st == mp::LpStatus::infeasible) return std::nullopt;
  if (st != mp::LpStatus::optimal) throw SolverError("master LP did not solve to optimality");
  MasterSolution out;
  out.w = to_risk_averse(master.w_raw());
  for (std::size_t s = 0; s < observations.size(); ++s) {
    out.per_observation.push_back(to_risk_averse(master.ws_raw(s)));
    out.objective += vector_distance(out.w, out.per_observation.back(), opts.norm);
  }
  out.objective = snap_zero(out.objective);
  return out;
}

namespace {

double compute_infeas_seeded(const Observation& obs, const ElicitOptions& opts,
                             const std::vector<SolutionVector>& seed) {
  const std::size_t K = obs.costs.scenarios();
  const auto observed = sort_objectives(obs.costs, obs.chosen).values;
  mp::MathProgram program;
  const auto w = add_weight_block(program, K);
  const auto t = program.add_continuous(-mp::kInfinity, mp::kInfinity, 1.0);
  mp::DenseSimplex lp(program);
  std::set<SolutionVector> seen;
  auto add = [&](const SolutionVector& x) {
    if (!seen.insert(x).second) return false;
    const auto a = sort_objectives(obs.costs, x).values;
    std::vector<mp::Term> terms{{t, -1.0}};
    for (std::size_t k = 0; k < K; ++k) {
      if (observed[k] != a[k]) terms.push_back({w[k], observed[k] - a[k]});
    }
    lp.add_row(terms, mp::Comparator::less_equal, 0.0);
    return true;
  };
  add(obs.chosen);
  for (const auto& x : seed) add(x);
  double value = 0.0;
  for (int it = 0;; ++it) {
    if (it >= opts.max_iterations) {
      warn("violation computation hit the iteration cap; returning a lower bound");
      break;
    }
    const auto st = lp.solve(deadline_for(opts.time_limit));
    if (st != mp::LpStatus::optimal) {
      throw SolverError(fmt::format("violation LP ended with status {}", static_cast<int>(st)));
    }
    value = lp.value(t.index);
    std::vector<double> raw;
    for (auto v : w) raw.push_back(lp.value(v.index));
    const auto wv = to_risk_averse(std::move(raw));
    const auto best = solve_owa(wv, obs.costs, obs.feasible_set);
    const double gap = owa_value(wv, obs.costs, obs.chosen) - best.value;
    if (gap - value <= opts.cut_tolerance || !add(best.solution)) break;
  }
  return value <= opts.cut_tolerance ? 0.0 : value;
}

}  // namespace

double compute_infeas(const Observation& obs, const ElicitOptions& opts) {
  obs.validate();
  opts.validate();
  return compute_infeas_seeded(obs, opts, {});
}

ElicitationResult elicit_pref(const std::vector<Observation>& observations, const ElicitOptions& opts) {
  validate_observations(observations);
  opts.validate();
  const auto started = Clock::now();
  const std::size_t S = observations.size();
  PoolSet pools(initial_pools(observations));

  MasterConfig cfg;
  cfg.norm = opts.norm;
  cfg.slack_variables = opts.infeasibility == InfeasibilityStrategy::weighted_slack;
  cfg.slack_weight = opts.slack_weight;

  int iterations = 0;
  Master master = make_master(observations, cfg, pools);
  LoopOutcome loop = cut_loop(master, observations, pools, opts, iterations, "pref");
  if (loop.infeasible && cfg.slack_variables) throw SolverError("slack master reported infeasibility");
  int total_iterations = 0;
  for (int attempt = 0; loop.infeasible && attempt < 2; ++attempt) {
    total_iterations += iterations;
    iterations = 0;
    // Relax all observations at once by their individually minimal violation.
    if (attempt == 0) {
      cfg.fixed_slacks.assign(S, 0.0);
      for (std::size_t s = 0; s < S; ++s) {
        cfg.fixed_slacks[s] = compute_infeas_seeded(observations[s], opts, pools.pools()[s]);
      }
    } else {
      for (double& v : cfg.fixed_slacks) {
        if (v > 0.0) v += opts.cut_tolerance;
      }
    }
    master = make_master(observations, cfg, pools);
    loop = cut_loop(master, observations, pools, opts, iterations, "pref");
  }
  total_iterations += iterations;
  if (loop.infeasible) throw SolverError("master stays infeasible after relaxing the observations");
  if (!loop.last) throw SolverError("no master solution before the time limit");

  Snapshot final = *loop.last;
  if (opts.minimize_orness && loop.converged && final.w.size() > 1) {
    MasterConfig post;
    post.norm = opts.norm;
    post.fixed_slacks = final.slacks;
    post.distance_bound = final.distance + 1e-7;
    Master refine = make_master(observations, post, pools);
    int refine_iterations = 0;
    auto refined = cut_loop(refine, observations, pools, opts, refine_iterations, "pref-orness");
    total_iterations += refine_iterations;
    if (refined.converged && refined.last) final = *refined.last;
  }

  ElicitationResult result;
  result.w = to_risk_averse(final.w);
  for (std::size_t s = 0; s < S; ++s) {
    result.per_observation.push_back(to_risk_averse(final.ws[s]));
    result.objective += vector_distance(result.w, result.per_observation.back(), opts.norm);
    result.infeasibility.push_back(final.slacks[s] <= opts.cut_tolerance ? 0.0 : final.slacks[s]);
    result.solutions.push_back(
        solve_owa(result.w, observations[s].costs, observations[s].feasible_set).solution);
  }
  result.objective = snap_zero(result.objective);
  result.pools = pools.pools();
  result.iterations = total_iterations;
  result.converged = loop.converged;
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

double pref_objective_at(const WeightVector& w, const std::vector<Observation>& observations,
                         const CutPools& pools, const std::optional<std::vector<double>>& slacks,
                         const ElicitOptions& opts) {
  validate_observations(observations);
  opts.validate();
  if (w.size() != observations.front().costs.scenarios()) throw InputError("weight vector has the wrong length");
  w.require_risk_averse("pref_objective_at");
  if (pools.size() != observations.size()) throw InputError("one cut pool per observation is required");
  MasterConfig cfg;
  cfg.norm = opts.norm;
  cfg.fixed_w = w;
  if (slacks) cfg.fixed_slacks = *slacks;
  PoolSet pool_set(pools);
  Master master = make_master(observations, cfg, pool_set);
  int iterations = 0;
  const auto loop = cut_loop(master, observations, pool_set, opts, iterations, "pref-fixed");
  if (loop.infeasible) return mp::kInfinity;
  if (!loop.last) throw SolverError("no master solution before the time limit");
  double total = 0.0;
  for (const auto& ws : loop.last->ws) total += vector_distance(w, to_risk_averse(ws), opts.norm);
  return snap_zero(total);
}

}  // namespace owaelicit
