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

#include "owaelicit/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>

#include <fmt/format.h>

namespace owaelicit {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  warning_handler() = std::move(handler);
}

void warn(std::string_view message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

// ---------------------------------------------------------------- weights

WeightVector::WeightVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InputError("weight vector must not be empty");
  double sum = 0.0;
  for (double v : entries_) {
    if (!std::isfinite(v) || v < -kWeightTolerance || v > 1.0 + kWeightTolerance) {
      throw InputError(fmt::format("weight entry {} outside [0,1]", v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    throw InputError(fmt::format("weight entries sum to {}, expected 1", sum));
  }
}

WeightVector WeightVector::project(std::vector<double> raw) {
  if (raw.empty()) throw InputError("weight vector must not be empty");
  for (double& v : raw) {
    if (!std::isfinite(v)) throw InputError("non-finite weight entry");
    v = std::max(v, 0.0);
  }
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (sum <= 0.0) throw InputError("cannot project an all-zero weight vector");
  for (double& v : raw) v = std::min(v / sum, 1.0);
  return WeightVector(std::move(raw));
}

WeightVector WeightVector::uniform(std::size_t size) {
  if (size == 0) throw InputError("weight vector must not be empty");
  return WeightVector(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

WeightVector WeightVector::worst_case(std::size_t size) {
  if (size == 0) throw InputError("weight vector must not be empty");
  std::vector<double> e(size, 0.0);
  e[0] = 1.0;
  return WeightVector(std::move(e));
}

bool WeightVector::is_risk_averse() const {
  for (std::size_t k = 0; k + 1 < entries_.size(); ++k) {
    if (entries_[k] + kWeightTolerance < entries_[k + 1]) return false;
  }
  return true;
}

void WeightVector::require_risk_averse(std::string_view context) const {
  if (!is_risk_averse()) {
    throw InputError(fmt::format("{}: weight vector must be non-increasing", context));
  }
}

// ------------------------------------------------------------ cost matrix

CostMatrix::CostMatrix(std::size_t scenarios, std::size_t items)
    : scenarios_(scenarios), items_(items), data_(scenarios * items, 0.0) {}

CostMatrix::CostMatrix(std::size_t scenarios, std::size_t items, std::vector<double> data)
    : scenarios_(scenarios), items_(items), data_(std::move(data)) {
  if (data_.size() != scenarios_ * items_) {
    throw InputError(fmt::format("cost matrix data has {} entries, expected {}x{}",
                                 data_.size(), scenarios_, items_));
  }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t n = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InputError("cost matrix rows have different lengths");
    data.insert(data.end(), r.begin(), r.end());
  }
  return CostMatrix(rows.size(), n, std::move(data));
}

std::vector<std::vector<double>> CostMatrix::rows() const {
  std::vector<std::vector<double>> out(scenarios_);
  for (std::size_t k = 0; k < scenarios_; ++k) {
    auto r = row(k);
    out[k].assign(r.begin(), r.end());
  }
  return out;
}

CostMatrix CostMatrix::scaled(double factor) const {
  CostMatrix out = *this;
  for (double& v : out.data_) v *= factor;
  return out;
}

// ------------------------------------------------------------ feasible set

namespace {

void validate_set(const Selection& s) {
  if (s.n < 1 || s.p < 1 || s.p > s.n) {
    throw InputError(fmt::format("selection requires 1 <= p <= n (n={}, p={})", s.n, s.p));
  }
}

void validate_set(const Assignment& a) {
  if (a.n < 1) throw InputError("assignment requires n >= 1");
}

void validate_set(const MinKnapsack& k) {
  if (k.weights.empty()) throw InputError("knapsack requires at least one item");
  double total = 0.0;
  for (double w : k.weights) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("knapsack weights must be non-negative");
    total += w;
  }
  if (!std::isfinite(k.capacity) || k.capacity > total + 1e-12) {
    throw InputError(fmt::format("knapsack capacity {} exceeds total weight {}", k.capacity, total));
  }
}

}  // namespace

FeasibleSet::FeasibleSet(Selection s) : set_(s) { validate_set(s); }
FeasibleSet::FeasibleSet(Assignment a) : set_(a) { validate_set(a); }
FeasibleSet::FeasibleSet(MinKnapsack k) : set_(std::move(k)) {
  validate_set(std::get<MinKnapsack>(set_));
}

std::size_t FeasibleSet::dimension() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Selection>) {
          return static_cast<std::size_t>(s.n);
        } else if constexpr (std::is_same_v<T, Assignment>) {
          return static_cast<std::size_t>(s.n) * static_cast<std::size_t>(s.n);
        } else {
          return s.weights.size();
        }
      },
      set_);
}

bool FeasibleSet::contains(std::span<const int> x) const {
  if (x.size() != dimension()) return false;
  if (std::any_of(x.begin(), x.end(), [](int v) { return v != 0 && v != 1; })) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Selection>) {
          return std::accumulate(x.begin(), x.end(), 0) == s.p;
        } else if constexpr (std::is_same_v<T, Assignment>) {
          for (int i = 0; i < s.n; ++i) {
            int row = 0;
            int col = 0;
            for (int j = 0; j < s.n; ++j) {
              row += x[i * s.n + j];
              col += x[j * s.n + i];
            }
            if (row != 1 || col != 1) return false;
          }
          return true;
        } else {
          double total = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) total += s.weights[i] * x[i];
          return total >= s.capacity - 1e-9;
        }
      },
      set_);
}

std::string FeasibleSet::kind() const {
  switch (set_.index()) {
    case 0: return "selection";
    case 1: return "assignment";
    default: return "knapsack";
  }
}

void Observation::validate() const {
  if (costs.items() != feasible_set.dimension()) {
    throw InputError(fmt::format("observation costs have {} columns, feasible set needs {}",
                                 costs.items(), feasible_set.dimension()));
  }
  if (costs.scenarios() == 0) throw InputError("observation needs at least one scenario");
  if (!feasible_set.contains(chosen)) {
    throw InputError("observed solution is not feasible for its feasible set");
  }
}

// ------------------------------------------------------------- primitives

SortedObjectives sort_objectives(const CostMatrix& costs, std::span<const int> x) {
  if (x.size() != costs.items()) {
    throw InputError(fmt::format("solution has {} entries, cost matrix has {} columns",
                                 x.size(), costs.items()));
  }
  const std::size_t K = costs.scenarios();
  std::vector<double> objective(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    auto row = costs.row(k);
    double v = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (x[i] != 0) v += row[i] * x[i];
    }
    objective[k] = v;
  }
  SortedObjectives out;
  out.order.resize(K);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return objective[a] > objective[b]; });
  out.values.resize(K);
  for (std::size_t k = 0; k < K; ++k) out.values[k] = objective[out.order[k]];
  return out;
}

double owa_value(const WeightVector& w, const CostMatrix& costs, std::span<const int> x) {
  if (w.size() != costs.scenarios()) {
    throw InputError(fmt::format("weight vector has {} entries, cost matrix has {} rows",
                                 w.size(), costs.scenarios()));
  }
  const auto sorted = sort_objectives(costs, x);
  double v = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) v += w[k] * sorted.values[k];
  return v;
}

double orness(const WeightVector& w) {
  const std::size_t K = w.size();
  if (K < 2) throw InputError("orness is undefined for K = 1");
  double v = 0.0;
  for (std::size_t k = 0; k < K; ++k) v += static_cast<double>(K - 1 - k) * w[k];
  return v / static_cast<double>(K - 1);
}

int hamming(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) {
    throw InputError(fmt::format("hamming: lengths {} and {} differ", x.size(), y.size()));
  }
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] != y[i]) ? 1 : 0;
  return d;
}

double vector_distance(std::span<const double> w, std::span<const double> v, Norm norm) {
  if (w.size() != v.size()) {
    throw InputError(fmt::format("distance: lengths {} and {} differ", w.size(), v.size()));
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double diff = std::abs(w[k] - v[k]);
    switch (norm) {
      case Norm::one: acc += diff; break;
      case Norm::two: acc += diff * diff; break;
      case Norm::inf: acc = std::max(acc, diff); break;
    }
  }
  return norm == Norm::two ? std::sqrt(acc) : acc;
}

double vector_distance(const WeightVector& w, const WeightVector& v, Norm norm) {
  return vector_distance(w.entries(), v.entries(), norm);
}

CostMatrix min_max_normalize(const CostMatrix& raw) {
  CostMatrix out(raw.scenarios(), raw.items());
  for (std::size_t k = 0; k < raw.scenarios(); ++k) {
    auto row = raw.row(k);
    if (row.empty()) continue;
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    const double range = *hi - *lo;
    if (range <= 0.0) {
      warn(fmt::format("cost row {} is constant; normalized to zeros", k));
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) out(k, i) = (row[i] - *lo) / range;
  }
  return out;
}

}  // namespace owaelicit
