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

// Domain types shared by every module: weight vectors, cost matrices,
// feasible-set descriptors and observations, plus the pure numeric
// primitives (sorting objective values, OWA evaluation, orness, distances).

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "owaelicit/errors.hpp"

namespace owaelicit {

/// Absolute tolerance of every simplex / monotonicity check on weights.
inline constexpr double kWeightTolerance = 1e-9;

/// A preference vector w in the simplex W. Construction validates that
/// entries lie in [0,1] and sum to one; risk aversion (non-increasing
/// entries, the set W') is a queryable property.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> entries);
  WeightVector(std::initializer_list<double> entries)
      : WeightVector(std::vector<double>(entries)) {}

  /// Clamps negatives to zero and renormalizes. Used on solver output,
  /// which is only feasible up to the LP tolerance.
  static WeightVector project(std::vector<double> raw);

  /// Uniform vector (1/K, ..., 1/K).
  static WeightVector uniform(std::size_t size);
  /// Worst-case vector (1, 0, ..., 0).
  static WeightVector worst_case(std::size_t size);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t k) const { return entries_[k]; }
  std::span<const double> entries() const { return entries_; }
  const std::vector<double>& values() const { return entries_; }

  /// True when w_1 >= w_2 >= ... >= w_K (within kWeightTolerance).
  bool is_risk_averse() const;
  /// Throws InputError unless is_risk_averse().
  void require_risk_averse(std::string_view context) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> entries_;
};

/// K x n matrix of scenario (or objective) costs, row-major.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t scenarios, std::size_t items);
  CostMatrix(std::size_t scenarios, std::size_t items, std::vector<double> data);
  /// Builds from nested rows; all rows must have the same length.
  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t scenarios() const { return scenarios_; }
  std::size_t items() const { return items_; }

  double operator()(std::size_t k, std::size_t i) const { return data_[k * items_ + i]; }
  double& operator()(std::size_t k, std::size_t i) { return data_[k * items_ + i]; }
  std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * items_, items_};
  }
  std::vector<std::vector<double>> rows() const;
  /// Multiplies every entry by `factor`.
  CostMatrix scaled(double factor) const;

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

 private:
  std::size_t scenarios_ = 0;
  std::size_t items_ = 0;
  std::vector<double> data_;
};

/// Binary solution vector. Assignment solutions are stored flattened
/// row-major (x_{ij} at index i * n + j).
using SolutionVector = std::vector<int>;

/// Choose exactly p of n items.
struct Selection {
  int n = 0;
  int p = 0;
  friend bool operator==(const Selection&, const Selection&) = default;
};

/// n x n assignment (permutation matrices).
struct Assignment {
  int n = 0;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Covering knapsack: sum_i weights_i x_i >= capacity.
struct MinKnapsack {
  std::vector<double> weights;
  double capacity = 0.0;
  friend bool operator==(const MinKnapsack&, const MinKnapsack&) = default;
};

/// Descriptor of the feasible set X of one decision situation.
class FeasibleSet {
 public:
  using Variant = std::variant<Selection, Assignment, MinKnapsack>;

  FeasibleSet(Selection s);     // NOLINT(google-explicit-constructor)
  FeasibleSet(Assignment a);    // NOLINT(google-explicit-constructor)
  FeasibleSet(MinKnapsack k);   // NOLINT(google-explicit-constructor)

  const Variant& variant() const { return set_; }
  /// Length of a solution vector (n, or n^2 for assignment).
  std::size_t dimension() const;
  bool contains(std::span<const int> x) const;
  /// "selection", "assignment" or "knapsack".
  std::string kind() const;

  friend bool operator==(const FeasibleSet&, const FeasibleSet&) = default;

 private:
  Variant set_;
};

/// One past decision: the costs the decision maker faced and the solution
/// they chose.
struct Observation {
  CostMatrix costs;
  SolutionVector chosen;
  FeasibleSet feasible_set;

  /// Throws InputError on dimension mismatch or infeasible `chosen`.
  void validate() const;
};

/// Objective values C x sorted from largest to smallest, with the sorting
/// permutation: values[k] = (row order[k] of C) . x.
struct SortedObjectives {
  std::vector<double> values;
  std::vector<std::size_t> order;
};

enum class Norm { one, two, inf };

/// Ties are broken by the lowest original index (stable).
SortedObjectives sort_objectives(const CostMatrix& costs, std::span<const int> x);

/// OWA_w(x, C) = sum_k w_k a_k(x).
double owa_value(const WeightVector& w, const CostMatrix& costs, std::span<const int> x);

/// Yager's orness (1/(K-1)) sum_k (K-k) w_k. Undefined for K = 1.
double orness(const WeightVector& w);

int hamming(std::span<const int> x, std::span<const int> y);

double vector_distance(std::span<const double> w, std::span<const double> v, Norm norm);
double vector_distance(const WeightVector& w, const WeightVector& v, Norm norm);

/// Maps each row through (v - min) / (max - min). Constant rows become all
/// zeros and trigger a warning.
CostMatrix min_max_normalize(const CostMatrix& raw);

/// Receives library warnings (constant rows and the like). The default
/// handler writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace owaelicit
