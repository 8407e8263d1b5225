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

// owaelicit command-line tool. Exit codes: 0 success, 1 input error,
// 2 solver failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "owaelicit/altpref.hpp"
#include "owaelicit/compact.hpp"
#include "owaelicit/elicit.hpp"
#include "owaelicit/experiments.hpp"
#include "owaelicit/instance_io.hpp"
#include "owaelicit/owa.hpp"
#include "owaelicit/pairwise.hpp"

namespace {

using namespace owaelicit;
using nlohmann::json;

constexpr int kInputError = 1;
constexpr int kSolverError = 2;

struct GenerateArgs {
  std::string problem = "selection";
  int n = 40;
  std::optional<int> p;
  int K = 5;
  int S = 16;
  double eps = 0.0;
  std::uint64_t seed = 1;
  std::optional<double> orness;
  std::string out;
};

struct ElicitArgs {
  std::string model = "pref";
  int comparisons = 5;
  std::string in;
  std::string out;
  std::string norm = "one";
  bool minimize_orness = false;
  std::optional<double> time_limit;
  bool tight_mccormick = false;
  std::uint64_t seed = 1;
};

struct SolveArgs {
  std::string weights;
  std::string in;
  int index = 0;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<int> jobs;
  bool timing = false;
  bool quiet = false;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path));
  out << text;
}

int run_generate(const GenerateArgs& a) {
  GenerateOptions opts;
  opts.shape.kind = parse_problem(a.problem);
  opts.shape.n = a.n;
  opts.shape.p = a.p.value_or(a.n / 2);
  opts.shape.K = static_cast<std::size_t>(a.K);
  if (a.K < 2) throw InputError("--K must be at least 2");
  opts.S = a.S;
  opts.eps = a.eps;
  opts.seed = a.seed;
  if (a.orness && !(*a.orness >= 0.5 && *a.orness <= 1.0)) throw InputError("--orness must lie in [0.5, 1]");
  opts.orness = a.orness;
  write_text(a.out, instance_to_json(generate_instance(opts)));
  return 0;
}

double mean_in_sample(const WeightVector& w, const std::vector<Observation>& obs) {
  double total = 0.0;
  for (const auto& o : obs) total += hamming(solve_owa(w, o.costs, o.feasible_set).solution, o.chosen);
  return total / static_cast<double>(obs.size());
}

int run_elicit(const ElicitArgs& a) {
  const Instance inst = read_instance(a.in);
  const auto& obs = inst.observations;
  json result;
  const auto started = std::chrono::steady_clock::now();
  WeightVector w;
  if (a.model == "pref") {
    ElicitOptions opts;
    opts.norm = a.norm == "inf" ? Norm::inf : Norm::one;
    opts.minimize_orness = a.minimize_orness;
    opts.time_limit = a.time_limit;
    const auto r = elicit_pref(obs, opts);
    w = r.w;
    result["method"] = "pref";
    result["objective"] = r.objective;
    result["infeasibility"] = r.infeasibility;
    result["iterations"] = r.iterations;
    result["converged"] = r.converged;
  } else if (a.model == "altpref") {
    AltElicitOptions opts;
    if (a.time_limit) opts.time_limit = a.time_limit;
    const auto r = elicit_altpref(obs, opts);
    w = r.w;
    result["method"] = "altpref";
    result["total_hamming"] = r.total_hamming;
    result["iterations"] = r.iterations;
    result["status"] = to_string(r.status);
  } else if (a.model == "compact") {
    CompactOptions opts;
    opts.tight_mccormick = a.tight_mccormick;
    opts.time_limit = a.time_limit;
    const auto r = elicit_compact(obs, opts);
    w = r.w;
    result["method"] = "compact";
    result["heuristic"] = true;
    result["objective"] = r.objective;
  } else if (a.model == "pairwise") {
    if (!inst.true_w) throw InputError("the pairwise model needs an instance with true_w to answer comparisons");
    Rng rng(a.seed);
    const MethodSpec spec{MethodSpec::Kind::pairwise, a.comparisons};
    w = run_method(spec, obs, *inst.true_w, inst.eps.value_or(0.0), rng).w;
    result["method"] = spec.label();
  }
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  result["w"] = w.values();
  result["orness"] = orness(w);
  result["is_worstcase_vector"] = is_worst_case(w);
  result["in_hamming"] = mean_in_sample(w, obs);
  int explained = 0;
  for (const auto& o : obs) explained += explains(w, o).explained ? 1 : 0;
  result["explained"] = explained;
  if (inst.true_w) result["w_dist_2"] = vector_distance(w, *inst.true_w, Norm::two);
  result["runtime_ms"] = elapsed;
  write_text(a.out, result.dump(1) + "\n");
  return 0;
}

int run_solve(const SolveArgs& a) {
  const WeightVector w = read_weights(a.weights);
  const Instance inst = read_instance(a.in);
  if (a.index < 0 || static_cast<std::size_t>(a.index) >= inst.observations.size()) {
    throw InputError(fmt::format("--index {} is out of range (instance has {} observations)", a.index,
                                 inst.observations.size()));
  }
  const auto& o = inst.observations[static_cast<std::size_t>(a.index)];
  if (w.size() != o.costs.scenarios()) {
    throw InputError(fmt::format("weight vector has {} entries, the instance has K={}", w.size(),
                                 o.costs.scenarios()));
  }
  const auto r = solve_owa(w, o.costs, o.feasible_set);
  json out;
  out["index"] = a.index;
  out["value"] = r.value;
  out["solution"] = r.solution;
  std::cout << out.dump() << "\n";
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = ExperimentConfig::load(a.config);
  if (a.jobs) cfg.jobs = *a.jobs;
  if (a.timing) cfg.record_runtime = true;
  cfg.validate();
  ExperimentProgress progress;
  if (!a.quiet) {
    progress = [](int done, int total) { fmt::print(std::cerr, "\r{}/{} instances", done, total); };
  }
  const auto result = run_experiment(cfg, progress);
  if (!a.quiet) std::cerr << "\n";
  std::ofstream out(a.out);
  if (!out) throw InputError(fmt::format("cannot write '{}'", a.out));
  write_csv(out, result.rows);
  if (!result.explain.empty()) {
    std::filesystem::path sidecar(a.out);
    sidecar.replace_extension(".explain.csv");
    std::ofstream side(sidecar);
    if (!side) throw InputError(fmt::format("cannot write '{}'", sidecar.string()));
    write_explain_csv(side, result.explain);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elicit OWA preference weights from observed decisions."};
  app.name("owaelicit");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a random instance with simulated observations.");
  g->add_option("--problem", gen.problem, "selection, assignment or knapsack")
      ->check(CLI::IsMember({"selection", "assignment", "knapsack"}))
      ->capture_default_str();
  g->add_option("--n", gen.n, "Items (assignment: matrix side)")->capture_default_str();
  g->add_option("--p", gen.p, "Items to select (default n/2)");
  g->add_option("--K", gen.K, "Scenarios")->capture_default_str();
  g->add_option("--S", gen.S, "Observations")->capture_default_str();
  g->add_option("--eps", gen.eps, "Decision noise in [0, 1]")->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--orness", gen.orness, "Orness of the true vector (default uniform on [0.5, 1])");
  g->add_option("--out", gen.out, "Output instance JSON ('-' for stdout)")->required();

  ElicitArgs eli;
  auto* e = app.add_subcommand("elicit", "Fit a weight vector to an instance's observations.");
  e->add_option("--model", eli.model, "pref, altpref, compact (heuristic) or pairwise")
      ->check(CLI::IsMember({"pref", "altpref", "compact", "pairwise"}))
      ->capture_default_str();
  e->add_option("--comparisons", eli.comparisons, "Pairwise comparisons per observation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  e->add_option("--in", eli.in, "Instance JSON")->required();
  e->add_option("--out", eli.out, "Result JSON (default stdout)");
  e->add_option("--norm", eli.norm, "pref distance: one or inf")
      ->check(CLI::IsMember({"one", "inf"}))
      ->capture_default_str();
  e->add_flag("--minimize-orness", eli.minimize_orness, "pref: least-orness vector among the optima");
  e->add_option("--time-limit", eli.time_limit, "Seconds per solver call")->check(CLI::PositiveNumber);
  e->add_flag("--tight-mccormick", eli.tight_mccormick, "compact: add the lower product envelope");
  e->add_option("--seed", eli.seed, "pairwise: random seed for queries")->capture_default_str();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Minimize OWA for one observation's situation.");
  s->add_option("--weights", sol.weights, "Weight JSON: array or {\"w\": [...]}")->required();
  s->add_option("--in", sol.in, "Instance JSON")->required();
  s->add_option("--index", sol.index, "Observation index (0-based)")->capture_default_str();

  ExperimentArgs exp;
  auto* x = app.add_subcommand("experiment", "Run a parameter sweep and write CSV.");
  x->add_option("--config", exp.config, "TOML experiment configuration")->required();
  x->add_option("--out", exp.out, "Results CSV")->required();
  x->add_option("--jobs", exp.jobs, "Parallel instances (overrides the config)")->check(CLI::PositiveNumber);
  x->add_flag("--timing", exp.timing, "Record runtime_ms (output no longer reproducible)");
  x->add_flag("--quiet", exp.quiet, "No progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (g->parsed()) return run_generate(gen);
    if (e->parsed()) return run_elicit(eli);
    if (s->parsed()) return run_solve(sol);
    if (x->parsed()) return run_experiment_cmd(exp);
  } catch (const InputError& err) {
    fmt::print(std::cerr, "error: {}\n", err.what());
    return kInputError;
  } catch (const SolverError& err) {
    fmt::print(std::cerr, "solver error: {}\n", err.what());
    return kSolverError;
  } catch (const std::exception& err) {
    fmt::print(std::cerr, "error: {}\n", err.what());
    return kSolverError;
  }
  return kInputError;
}
