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

#include "owaelicit/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "owaelicit/owa.hpp"

namespace owaelicit {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("malformed JSON: {}", e.what()));
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(fmt::format("missing field '{}'", key));
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(fmt::format("field '{}' has the wrong type", key));
  }
}

MinKnapsack knapsack_from(const json& j) {
  MinKnapsack ks;
  ks.weights = field<std::vector<double>>(j, "weights");
  ks.capacity = field<double>(j, "capacity");
  return ks;
}

}  // namespace

Instance generate_instance(const GenerateOptions& opts) {
  opts.shape.validate();
  if (opts.shape.K < 2) throw InputError("K must be at least 2");
  Rng rng(opts.seed);
  const double alpha = opts.orness ? *opts.orness : std::uniform_real_distribution<double>(0.5, 1.0)(rng);
  Instance inst;
  inst.problem = opts.shape.kind;
  inst.n = opts.shape.n;
  inst.p = opts.shape.kind == ProblemKind::selection ? opts.shape.p : 0;
  inst.K = opts.shape.K;
  inst.eps = opts.eps;
  inst.seed = opts.seed;
  inst.true_w = weights_from_orness(opts.shape.K, alpha);
  inst.observations = simulate_observations(*inst.true_w, opts.shape, opts.S, opts.eps, rng);
  return inst;
}

std::string instance_to_json(const Instance& instance) {
  json j;
  j["problem"] = std::string(to_string(instance.problem));
  j["n"] = instance.n;
  if (instance.problem == ProblemKind::selection) j["p"] = instance.p;
  j["K"] = instance.K;
  j["S"] = instance.observations.size();
  if (instance.eps) j["eps"] = *instance.eps;
  if (instance.seed) j["seed"] = *instance.seed;
  if (instance.true_w) j["true_w"] = instance.true_w->values();
  json obs = json::array();
  for (const auto& o : instance.observations) {
    json row;
    json costs = json::array();
    for (std::size_t k = 0; k < o.costs.scenarios(); ++k) {
      const auto r = o.costs.row(k);
      costs.push_back(std::vector<double>(r.begin(), r.end()));
    }
    row["costs"] = std::move(costs);
    row["chosen"] = o.chosen;
    if (const auto* ks = std::get_if<MinKnapsack>(&o.feasible_set.variant())) {
      row["weights"] = ks->weights;
      row["capacity"] = ks->capacity;
    }
    obs.push_back(std::move(row));
  }
  j["observations"] = std::move(obs);
  return j.dump(1) + "\n";
}

Instance instance_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) throw InputError("instance file must contain a JSON object");
  Instance inst;
  inst.problem = parse_problem(field<std::string>(j, "problem"));
  inst.n = field<int>(j, "n");
  inst.K = field<std::size_t>(j, "K");
  if (inst.problem == ProblemKind::selection) inst.p = field<int>(j, "p");
  if (j.contains("eps")) inst.eps = field<double>(j, "eps");
  if (j.contains("seed")) inst.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("true_w")) inst.true_w = WeightVector(field<std::vector<double>>(j, "true_w"));
  std::optional<MinKnapsack> shared;
  if (j.contains("weights")) shared = knapsack_from(j);

  const auto& obs = j.contains("observations") ? j.at("observations") : json();
  if (!obs.is_array() || obs.empty()) throw InputError("field 'observations' must be a non-empty array");
  for (const auto& o : obs) {
    const auto rows = field<std::vector<std::vector<double>>>(o, "costs");
    CostMatrix costs = CostMatrix::from_rows(rows);
    SolutionVector chosen = field<SolutionVector>(o, "chosen");
    FeasibleSet fs = [&]() -> FeasibleSet {
      switch (inst.problem) {
        case ProblemKind::selection: return Selection{inst.n, inst.p};
        case ProblemKind::assignment: return Assignment{inst.n};
        case ProblemKind::knapsack:
          if (o.contains("weights")) return knapsack_from(o);
          if (shared) return *shared;
          throw InputError("knapsack observation without item weights");
      }
      throw InputError("unknown problem");
    }();
    Observation ob{std::move(costs), std::move(chosen), std::move(fs)};
    if (ob.costs.scenarios() != inst.K) {
      throw InputError(fmt::format("observation has {} cost rows, expected K={}", ob.costs.scenarios(), inst.K));
    }
    ob.validate();
    inst.observations.push_back(std::move(ob));
  }
  if (j.contains("S") && field<std::size_t>(j, "S") != inst.observations.size()) {
    throw InputError("field 'S' disagrees with the number of observations");
  }
  return inst;
}

Instance read_instance(const std::filesystem::path& path) { return instance_from_json(slurp(path)); }

void write_instance(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << instance_to_json(instance);
}

WeightVector read_weights(const std::filesystem::path& path) {
  const json j = parse(slurp(path));
  try {
    if (j.is_array()) return WeightVector(j.get<std::vector<double>>());
    if (j.is_object() && j.contains("w")) return WeightVector(j.at("w").get<std::vector<double>>());
  } catch (const json::exception&) {
  }
  throw InputError(fmt::format("'{}' holds neither a weight array nor an object with \"w\"", path.string()));
}

}  // namespace owaelicit
