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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "owaelicit/errors.hpp"
#include "owaelicit/mp/program.hpp"
#include "owaelicit/mp/simplex.hpp"

using namespace owaelicit::mp;

TEST(MathProgram, LowerBoundedMinimum) {
  MathProgram p;
  auto x = p.add_continuous(-kInfinity, kInfinity, 1.0);
  p.add_constraint({{x, 1.0}}, Comparator::greater_equal, 3.0);
  auto out = solve_program(p);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  EXPECT_NEAR(out.objective, 3.0, 1e-9);
  EXPECT_NEAR(out.value(x), 3.0, 1e-9);
}

TEST(MathProgram, InfeasibleLp) {
  MathProgram p;
  auto x = p.add_continuous(0.0, 1.0);
  auto y = p.add_continuous(0.0, 1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Comparator::greater_equal, 3.0);
  EXPECT_EQ(solve_program(p).status, SolveStatus::infeasible);
}

TEST(MathProgram, UnboundedLp) {
  MathProgram p;
  auto x = p.add_continuous(0.0, kInfinity, -1.0);
  auto y = p.add_continuous(0.0, kInfinity);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Comparator::less_equal, 1.0);
  EXPECT_EQ(solve_program(p).status, SolveStatus::unbounded);
}

TEST(MathProgram, BinaryPacking) {
  MathProgram p;
  auto x1 = p.add_binary(-1.0);
  auto x2 = p.add_binary(-1.0);
  p.add_constraint({{x1, 1.0}, {x2, 1.0}}, Comparator::less_equal, 1.0);
  auto out = solve_program(p);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  EXPECT_NEAR(out.objective, -1.0, 1e-9);
  EXPECT_NEAR(out.value(x1) + out.value(x2), 1.0, 1e-9);
}

TEST(MathProgram, ClassicLp) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  MathProgram p;
  auto x = p.add_continuous(0.0, kInfinity, -3.0);
  auto y = p.add_continuous(0.0, kInfinity, -5.0);
  p.add_constraint({{x, 1.0}}, Comparator::less_equal, 4.0);
  p.add_constraint({{y, 2.0}}, Comparator::less_equal, 12.0);
  p.add_constraint({{x, 3.0}, {y, 2.0}}, Comparator::less_equal, 18.0);
  auto out = solve_program(p);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  EXPECT_NEAR(out.objective, -36.0, 1e-9);
  EXPECT_NEAR(out.value(x), 2.0, 1e-9);
  EXPECT_NEAR(out.value(y), 6.0, 1e-9);
}

TEST(MathProgram, EqualityAndOffset) {
  MathProgram p;
  auto x = p.add_continuous(0.0, kInfinity, 2.0);
  auto y = p.add_continuous(0.0, kInfinity, 1.0);
  p.add_constraint({{x, 1.0}, {y, 1.0}}, Comparator::equal, 5.0);
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Comparator::greater_equal, 1.0);
  p.set_objective_offset(10.0);
  auto out = solve_program(p);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  EXPECT_NEAR(out.objective, 10.0 + 2 * 3 + 2, 1e-9);
}

TEST(MathProgram, StartIsUsedAsIncumbentAndKeptOnTies) {
  MathProgram p;
  auto a = p.add_binary(1.0);
  auto b = p.add_binary(1.0);
  p.add_constraint({{a, 1.0}, {b, 1.0}}, Comparator::greater_equal, 1.0);
  p.add_start({0.0, 1.0});
  auto out = solve_program(p);
  ASSERT_EQ(out.status, SolveStatus::optimal);
  EXPECT_NEAR(out.objective, 1.0, 1e-9);
  EXPECT_NEAR(out.value(b), 1.0, 1e-9);
}

TEST(MathProgram, DumpsLpFormat) {
  MathProgram p;
  auto x = p.add_binary(-1.0, "x");
  auto y = p.add_continuous(0.0, 2.0, 1.0, "y");
  p.add_constraint({{x, 1.0}, {y, -1.0}}, Comparator::less_equal, 1.0, "link");
  const auto text = to_lp_text(p);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("link: 1 x - 1 y <= 1"), std::string::npos);
  EXPECT_NE(text.find("Binaries\n x\n"), std::string::npos);
}

TEST(MathProgram, RejectsBadBounds) {
  MathProgram p;
  p.add_continuous(2.0, 1.0);
  EXPECT_THROW(solve_program(p), owaelicit::InputError);
}

TEST(DenseSimplex, WarmStartAfterAddedRowAndBoundChange) {
  MathProgram p;
  auto x = p.add_continuous(0.0, 10.0, -1.0);
  auto y = p.add_continuous(0.0, 10.0, -1.0);
  p.add_constraint({{x, 1.0}, {y, 2.0}}, Comparator::less_equal, 14.0);
  DenseSimplex lp(p);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -12.0, 1e-9);
  std::vector<Term> cut{{x, 1.0}, {y, 1.0}};
  lp.add_row(cut, Comparator::less_equal, 8.0);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -8.0, 1e-9);
  lp.set_bounds(x.index, 0.0, 1.0);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective(), -7.5, 1e-9);
}

namespace {

// Random small 0-1 programs, solved by enumeration and by branch-and-bound.
struct RandomMip {
  MathProgram program;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> cost;
};

RandomMip random_mip(std::mt19937_64& rng, int n, int m) {
  std::uniform_int_distribution<int> coef(-5, 9);
  RandomMip out;
  std::vector<VarId> vars;
  for (int j = 0; j < n; ++j) {
    out.cost.push_back(coef(rng));
    vars.push_back(out.program.add_binary(out.cost.back()));
  }
  for (int r = 0; r < m; ++r) {
    std::vector<double> row;
    std::vector<Term> terms;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      row.push_back(coef(rng));
      terms.push_back({vars[static_cast<std::size_t>(j)], row.back()});
      total += std::max(row.back(), 0.0);
    }
    out.rhs.push_back(std::floor(total * 0.4));
    out.rows.push_back(row);
    out.program.add_constraint(std::move(terms), Comparator::greater_equal, out.rhs.back());
  }
  return out;
}

}  // namespace

TEST(BranchAndBound, MatchesEnumerationOnRandomPrograms) {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 10;
    const int m = 1 + trial % 4;
    auto mip = random_mip(rng, n, m);
    double best = kInfinity;
    for (long mask = 0; mask < (1L << n); ++mask) {
      bool ok = true;
      for (int r = 0; r < m && ok; ++r) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) {
          if (mask >> j & 1) lhs += mip.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        }
        ok = lhs >= mip.rhs[static_cast<std::size_t>(r)];
      }
      if (!ok) continue;
      double v = 0.0;
      for (int j = 0; j < n; ++j) {
        if (mask >> j & 1) v += mip.cost[static_cast<std::size_t>(j)];
      }
      best = std::min(best, v);
    }
    auto out = solve_program(mip.program);
    if (!std::isfinite(best)) {
      EXPECT_EQ(out.status, SolveStatus::infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(out.status, SolveStatus::optimal) << "trial " << trial;
    EXPECT_NEAR(out.objective, best, 1e-6) << "trial " << trial;
    EXPECT_LE(mip.program.max_violation(out.values), 1e-6) << "trial " << trial;
  }
}

TEST(DenseSimplex, RandomLpsSatisfyConstraintsAndAgreeAcrossWarmStarts) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    MathProgram p;
    const int n = 4 + trial % 7;
    std::vector<VarId> vars;
    for (int j = 0; j < n; ++j) vars.push_back(p.add_continuous(0.0, 5.0, u(rng)));
    for (int r = 0; r < n; ++r) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j) terms.push_back({vars[static_cast<std::size_t>(j)], u(rng)});
      p.add_constraint(std::move(terms), Comparator::less_equal, 1.0 + std::abs(u(rng)));
    }
    auto cold = solve_program(p);
    ASSERT_EQ(cold.status, SolveStatus::optimal);
    EXPECT_LE(p.max_violation(cold.values), 1e-7);

    // Same program built incrementally: rows appended after a first solve.
    MathProgram head;
    for (const auto& v : p.variables()) head.add_continuous(v.lower, v.upper, v.objective);
    DenseSimplex lp(head);
    ASSERT_EQ(lp.solve(), LpStatus::optimal);
    for (const auto& c : p.constraints()) {
      lp.add_row(c.terms, c.comparator, c.rhs);
      ASSERT_EQ(lp.solve(), LpStatus::optimal);
    }
    EXPECT_NEAR(lp.objective(), cold.objective, 1e-7);
  }
}

TEST(BranchAndBound, ObjectiveStepKeepsTheOptimum) {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 8;
    auto plain = random_mip(rng, n, 1 + trial % 3);
    // Same program with every cost doubled, so all objective values are even.
    MathProgram even;
    std::vector<VarId> vars;
    for (double c : plain.cost) vars.push_back(even.add_binary(2.0 * c));
    for (std::size_t r = 0; r < plain.rows.size(); ++r) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < vars.size(); ++j) terms.push_back({vars[j], plain.rows[r][j]});
      even.add_constraint(std::move(terms), Comparator::greater_equal, plain.rhs[r]);
    }
    even.set_objective_step(2.0);
    const auto a = solve_program(plain.program);
    const auto b = solve_program(even);
    ASSERT_EQ(a.status, b.status) << "trial " << trial;
    if (a.status == SolveStatus::optimal) EXPECT_NEAR(b.objective, 2.0 * a.objective, 1e-6) << "trial " << trial;
  }
}
