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

#include "owaelicit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "owaelicit/altpref.hpp"
#include "owaelicit/compact.hpp"
#include "owaelicit/elicit.hpp"
#include "owaelicit/owa.hpp"
#include "owaelicit/pairwise.hpp"

namespace owaelicit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ProblemShape shape_at(const ExperimentConfig& cfg, double value) {
  ProblemShape shape;
  shape.kind = cfg.problem;
  shape.n = cfg.sweep == SweepParam::n ? static_cast<int>(value) : cfg.n;
  shape.K = static_cast<std::size_t>(cfg.sweep == SweepParam::K ? static_cast<int>(value) : cfg.K);
  shape.p = (cfg.p && cfg.sweep != SweepParam::n) ? *cfg.p : shape.n / 2;
  return shape;
}

struct Task {
  std::size_t point = 0;
  std::size_t instance = 0;
};

struct TaskOutput {
  std::vector<MetricsRow> rows;
  std::optional<ExplainRow> explain;
};

TaskOutput run_task(const ExperimentConfig& cfg, const Task& task) {
  const double value = cfg.values[task.point];
  const ProblemShape shape = shape_at(cfg, value);
  const int S = cfg.sweep == SweepParam::S ? static_cast<int>(value) : cfg.S;
  const double eps = cfg.sweep == SweepParam::eps ? value : cfg.eps;
  const std::uint64_t seed = instance_seed(cfg.seed, task.point, task.instance);
  Rng rng(seed);

  double alpha = 0.0;
  if (cfg.sweep == SweepParam::orness) {
    const double hi = std::min(value + cfg.orness_width, 1.0);
    alpha = hi > value ? std::uniform_real_distribution<double>(value, hi)(rng) : value;
  } else {
    alpha = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
  }
  const WeightVector true_w = weights_from_orness(shape.K, alpha);
  const auto observations = simulate_observations(true_w, shape, S, eps, rng);
  std::vector<Situation> out_sample;
  for (int i = 0; i < cfg.out_of_sample; ++i) out_sample.push_back(generate_situation(shape, rng));

  TaskOutput out;
  if (cfg.explain_samples > 0) {
    out.explain = ExplainRow{value, static_cast<int>(task.instance), seed,
                             explain_ratio(observations, cfg.explain_samples, rng)};
  }
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    const auto& method = cfg.methods[m];
    Rng method_rng(splitmix64(seed ^ splitmix64(m + 1)));
    const auto started = std::chrono::steady_clock::now();
    const MethodRun run = run_method(method, observations, true_w, eps, method_rng, cfg.altpref_time_limit);
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    const Evaluation eval = evaluate(run.w, true_w, observations, out_sample);

    MetricsRow row;
    row.problem = std::string(to_string(cfg.problem));
    row.sweep_param = std::string(to_string(cfg.sweep));
    row.sweep_value = value;
    row.n = shape.n;
    row.p = shape.kind == ProblemKind::selection ? shape.p : 0;
    row.K = static_cast<int>(shape.K);
    row.S = S;
    row.eps = eps;
    row.method = method.label();
    row.seed = seed;
    row.w_dist_2 = eval.w_dist_2;
    row.in_hamming = eval.in_hamming;
    row.out_hamming = eval.out_hamming;
    row.elicited_orness = orness(run.w);
    row.is_worstcase_vector = is_worst_case(run.w);
    row.runtime_ms = cfg.record_runtime ? elapsed : 0.0;
    row.iterations = run.iterations;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ProblemKind parse_problem(std::string_view name) {
  if (name == "selection") return ProblemKind::selection;
  if (name == "assignment") return ProblemKind::assignment;
  if (name == "knapsack") return ProblemKind::knapsack;
  throw InputError(fmt::format("unknown problem '{}' (selection, assignment or knapsack)", name));
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::selection: return "selection";
    case ProblemKind::assignment: return "assignment";
    case ProblemKind::knapsack: return "knapsack";
  }
  return "selection";
}

void ProblemShape::validate() const {
  if (n < 2) throw InputError("n must be at least 2");
  if (K < 1) throw InputError("K must be at least 1");
  if (kind == ProblemKind::selection && (p < 1 || p > n)) {
    throw InputError(fmt::format("selection size p={} must lie in [1, n={}]", p, n));
  }
}

CostMatrix generate_costs(ProblemKind kind, int n, std::size_t K, Rng& rng) {
  if (n < 2) throw InputError("n must be at least 2");
  const auto items = static_cast<std::size_t>(kind == ProblemKind::assignment ? n * n : n);
  std::uniform_int_distribution<int> draw(1, 100);
  CostMatrix raw(K, items);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < items; ++i) raw(k, i) = draw(rng);
  }
  return min_max_normalize(raw);
}

Situation generate_situation(const ProblemShape& shape, Rng& rng) {
  shape.validate();
  CostMatrix costs = generate_costs(shape.kind, shape.n, shape.K, rng);
  switch (shape.kind) {
    case ProblemKind::selection: return {std::move(costs), FeasibleSet{Selection{shape.n, shape.p}}};
    case ProblemKind::assignment: return {std::move(costs), FeasibleSet{Assignment{shape.n}}};
    case ProblemKind::knapsack: {
      std::uniform_real_distribution<double> draw(0.7, 1.3);
      MinKnapsack ks;
      double total = 0.0;
      for (int i = 0; i < shape.n; ++i) {
        ks.weights.push_back(draw(rng));
        total += ks.weights.back();
      }
      ks.capacity = 0.5 * total;
      return {std::move(costs), FeasibleSet{std::move(ks)}};
    }
  }
  throw InputError("unknown problem kind");
}

WeightVector perturb_weights(const WeightVector& w, double eps, Rng& rng) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw InputError("noise level must lie in [0, 1]");
  if (eps == 0.0) return w;
  for (;;) {
    std::vector<double> v(w.values());
    double sum = 0.0;
    for (double& x : v) {
      x += std::uniform_real_distribution<double>(std::max(-x, -eps), eps)(rng);
      x = std::max(x, 0.0);
      sum += x;
    }
    if (!(sum > 0.0)) continue;
    for (double& x : v) x /= sum;
    std::sort(v.begin(), v.end(), std::greater<>());
    return WeightVector::project(std::move(v));
  }
}

std::vector<Observation> simulate_observations(const WeightVector& true_w, const ProblemShape& shape,
                                               int S, double eps, Rng& rng) {
  true_w.require_risk_averse("simulate_observations");
  if (S < 1) throw InputError("S must be at least 1");
  std::vector<Observation> obs;
  for (int s = 0; s < S; ++s) {
    Situation sit = generate_situation(shape, rng);
    const WeightVector w = perturb_weights(true_w, eps, rng);
    SolutionVector chosen = solve_owa(w, sit.costs, sit.feasible_set).solution;
    obs.push_back(Observation{std::move(sit.costs), std::move(chosen), std::move(sit.feasible_set)});
  }
  return obs;
}

WeightVector sample_risk_averse(std::size_t K, Rng& rng) {
  auto v = sample_simplex(K, rng);
  std::sort(v.begin(), v.end(), std::greater<>());
  return WeightVector::project(std::move(v));
}

Evaluation evaluate(const WeightVector& w_hat, const WeightVector& true_w,
                    const std::vector<Observation>& observations,
                    const std::vector<Situation>& out_sample) {
  Evaluation e;
  e.w_dist_2 = vector_distance(w_hat, true_w, Norm::two);
  if (!observations.empty()) {
    double total = 0.0;
    for (const auto& o : observations) {
      total += hamming(solve_owa(w_hat, o.costs, o.feasible_set).solution, o.chosen);
    }
    e.in_hamming = total / static_cast<double>(observations.size());
  }
  if (!out_sample.empty()) {
    double total = 0.0;
    for (const auto& sit : out_sample) {
      const auto predicted = solve_owa(w_hat, sit.costs, sit.feasible_set).solution;
      const auto reference = solve_owa(true_w, sit.costs, sit.feasible_set).solution;
      total += hamming(predicted, reference);
    }
    e.out_hamming = total / static_cast<double>(out_sample.size());
  }
  return e;
}

double explain_ratio(const std::vector<Observation>& observations, int samples, Rng& rng) {
  if (samples < 1) throw InputError("explain_ratio needs at least one sample");
  const std::size_t K = observations.front().costs.scenarios();
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const WeightVector w = sample_risk_averse(K, rng);
    const bool all = std::all_of(observations.begin(), observations.end(),
                                 [&](const Observation& o) { return explains(w, o).explained; });
    if (all) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

bool is_worst_case(const WeightVector& w) {
  return w.size() > 0 && std::abs(w[0] - 1.0) <= 1e-6;
}

SweepParam parse_sweep(std::string_view name) {
  if (name == "n") return SweepParam::n;
  if (name == "S") return SweepParam::S;
  if (name == "K") return SweepParam::K;
  if (name == "eps") return SweepParam::eps;
  if (name == "orness") return SweepParam::orness;
  throw InputError(fmt::format("unknown sweep parameter '{}' (n, S, K, eps or orness)", name));
}

std::string_view to_string(SweepParam param) {
  switch (param) {
    case SweepParam::n: return "n";
    case SweepParam::S: return "S";
    case SweepParam::K: return "K";
    case SweepParam::eps: return "eps";
    case SweepParam::orness: return "orness";
  }
  return "S";
}

MethodSpec MethodSpec::parse(std::string_view text) {
  MethodSpec m;
  if (text == "pref") return m;
  if (text == "altpref") {
    m.kind = Kind::altpref;
    return m;
  }
  if (text == "compact") {
    m.kind = Kind::compact;
    return m;
  }
  constexpr std::string_view prefix = "pairwise:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto digits = text.substr(prefix.size());
    int c = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && c >= 1) {
      m.kind = Kind::pairwise;
      m.comparisons = c;
      return m;
    }
  }
  throw InputError(fmt::format("unknown method '{}' (pref, altpref, compact or pairwise:<count>)", text));
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::pref: return "pref";
    case Kind::altpref: return "altpref";
    case Kind::compact: return "compact";
    case Kind::pairwise: return fmt::format("pairwise:{}", comparisons);
  }
  return "pref";
}

void ExperimentConfig::validate() const {
  if (values.empty()) throw InputError("sweep values must not be empty");
  if (instances < 1) throw InputError("instances per point must be at least 1");
  if (methods.empty()) throw InputError("at least one method is required");
  if (out_of_sample < 0) throw InputError("out_of_sample must not be negative");
  if (jobs < 1) throw InputError("jobs must be at least 1");
  if (explain_samples < 0) throw InputError("explain_samples must not be negative");
  if (!(orness_width >= 0.0)) throw InputError("orness_width must not be negative");
  if (altpref_time_limit && !(*altpref_time_limit > 0.0)) throw InputError("altpref_time_limit must be positive");
  for (const auto& m : methods) {
    if (m.kind == MethodSpec::Kind::compact && problem == ProblemKind::knapsack) {
      throw InputError("the compact method does not support knapsack problems");
    }
  }
  for (double v : values) {
    const bool integral = std::floor(v) == v;
    switch (sweep) {
      case SweepParam::n:
        if (!integral || v < 2) throw InputError(fmt::format("n sweep value {} must be an integer >= 2", v));
        break;
      case SweepParam::S:
        if (!integral || v < 1) throw InputError(fmt::format("S sweep value {} must be an integer >= 1", v));
        break;
      case SweepParam::K:
        if (!integral || v < 2) throw InputError(fmt::format("K sweep value {} must be an integer >= 2", v));
        break;
      case SweepParam::eps:
        if (!(v >= 0.0 && v <= 1.0)) throw InputError(fmt::format("eps sweep value {} must lie in [0, 1]", v));
        break;
      case SweepParam::orness:
        if (!(v >= 0.5 && v <= 1.0)) throw InputError(fmt::format("orness sweep value {} must lie in [0.5, 1]", v));
        break;
    }
  }
  if (sweep != SweepParam::K && K < 2) throw InputError("K must be at least 2");
  if (sweep != SweepParam::S && S < 1) throw InputError("S must be at least 1");
  if (sweep != SweepParam::eps && !(eps >= 0.0 && eps <= 1.0)) throw InputError("eps must lie in [0, 1]");
  for (double v : values) shape_at(*this, v).validate();
}

std::uint64_t instance_seed(std::uint64_t master, std::size_t point, std::size_t instance) {
  return splitmix64(splitmix64(master) ^ splitmix64((static_cast<std::uint64_t>(point) << 32) ^ instance));
}

MethodRun run_method(const MethodSpec& method, const std::vector<Observation>& observations,
                     const WeightVector& true_w, double eps, Rng& rng,
                     std::optional<double> altpref_time_limit) {
  switch (method.kind) {
    case MethodSpec::Kind::pref: {
      auto r = elicit_pref(observations);
      return {std::move(r.w), r.iterations};
    }
    case MethodSpec::Kind::altpref: {
      AltElicitOptions opts;
      opts.time_limit = altpref_time_limit;
      auto r = elicit_altpref(observations, opts);
      return {std::move(r.w), r.iterations};
    }
    case MethodSpec::Kind::compact: {
      auto r = elicit_compact(observations);
      return {std::move(r.w), r.iterations};
    }
    case MethodSpec::Kind::pairwise: {
      std::vector<Comparison> comparisons;
      for (const auto& o : observations) {
        const auto pairs = generate_pairs(o.costs, o.feasible_set, method.comparisons, rng);
        auto judged = judge_pairs(pairs, o.costs, o.feasible_set, true_w, eps, rng);
        comparisons.insert(comparisons.end(), std::make_move_iterator(judged.begin()),
                           std::make_move_iterator(judged.end()));
      }
      return {elicit_ahn(comparisons), 1};
    }
  }
  throw InputError("unknown method");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ExperimentProgress& progress) {
  cfg.validate();
  std::vector<Task> tasks;
  for (std::size_t pt = 0; pt < cfg.values.size(); ++pt) {
    for (int i = 0; i < cfg.instances; ++i) tasks.push_back({pt, static_cast<std::size_t>(i)});
  }
  std::vector<TaskOutput> outputs(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        outputs[t] = run_task(cfg, tasks[t]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      const int finished = ++done;
      if (progress) {
        std::lock_guard lock(failure_mutex);
        progress(finished, static_cast<int>(tasks.size()));
      }
    }
  };
  const int threads = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& o : outputs) {
    result.rows.insert(result.rows.end(), std::make_move_iterator(o.rows.begin()),
                       std::make_move_iterator(o.rows.end()));
    if (o.explain) result.explain.push_back(*o.explain);
  }
  return result;
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "problem,sweep_param,sweep_value,n,p,K,S,eps,method,seed,w_dist_2,in_hamming,out_hamming,"
         "elicited_orness,is_worstcase_vector,runtime_ms,iterations\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.10g},{},{},{},{},{:.10g},{},{},{:.10g},{:.10g},{:.10g},{:.10g},{},{:.10g},{}\n",
               r.problem, r.sweep_param, r.sweep_value, r.n, r.p, r.K, r.S, r.eps, r.method, r.seed,
               r.w_dist_2, r.in_hamming, r.out_hamming, r.elicited_orness, r.is_worstcase_vector ? 1 : 0,
               r.runtime_ms, r.iterations);
  }
}

void write_explain_csv(std::ostream& out, const std::vector<ExplainRow>& rows) {
  out << "sweep_value,instance,seed,explain_ratio\n";
  for (const auto& r : rows) {
    fmt::print(out, "{:.10g},{},{},{:.10g}\n", r.sweep_value, r.instance, r.seed, r.ratio);
  }
}

}  // namespace owaelicit
