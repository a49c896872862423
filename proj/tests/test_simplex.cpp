#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "dracula/error.hpp"
#include "dracula/simplex.hpp"

using namespace dracula;

namespace {

// Every constraint as a' x <= b, bounds included.
struct Halfspace {
  Eigen::VectorXd a;
  double b;
};

std::vector<Halfspace> halfspaces(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  std::vector<Halfspace> out;
  for (const auto& row : lp.rows) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& t : row.terms) a[t.var] += t.coef;
    if (row.sense != RowSense::GreaterEqual) out.push_back({a, row.rhs});
    if (row.sense != RowSense::LessEqual) out.push_back({-a, -row.rhs});
  }
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    out.push_back({-e, 0.0});
    out.push_back({e, lp.upper[j]});
  }
  return out;
}

// Minimum over all vertices; the LPs here are bounded boxes so a minimizer is
// a vertex. Returns +inf when no vertex is feasible.
double vertex_minimum(const LinearProgram& lp) {
  const auto hs = halfspaces(lp);
  const int n = static_cast<int>(lp.num_vars());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int depth, int from) {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) { a.row(i) = hs[pick[i]].a.transpose(); b[i] = hs[pick[i]].b; }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      for (const auto& h : hs) {
        if (h.a.dot(x) > h.b + 1e-9) return;
      }
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += lp.cost[j] * x[j];
      best = std::min(best, obj);
      return;
    }
    for (int i = from; i < static_cast<int>(hs.size()); ++i) {
      pick[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return best;
}

LinearProgram random_lp(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_int_distribution<int> coef(-3, 3);
  LinearProgram lp;
  for (std::size_t j = 0; j < n; ++j) lp.add_variable(coef(rng), 1.0 + rng() % 3);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<LinearProgram::Term> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (const int c = coef(rng)) terms.push_back({static_cast<std::uint32_t>(j), static_cast<double>(c)});
    }
    const RowSense sense = static_cast<RowSense>(rng() % 3);
    lp.add_row(terms, sense, static_cast<double>(coef(rng)));
  }
  return lp;
}

}  // namespace

TEST(Simplex, TextbookExample) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y in [0, 10].
  LinearProgram lp;
  lp.add_variable(-1.0, 10.0, "x");
  lp.add_variable(-1.0, 10.0, "y");
  lp.add_row({{0, 1.0}, {1, 2.0}}, RowSense::LessEqual, 4.0);
  lp.add_row({{0, 3.0}, {1, 1.0}}, RowSense::LessEqual, 6.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, -2.8, 1e-9);
  EXPECT_NEAR(r.x[0], 1.6, 1e-9);
  EXPECT_NEAR(r.x[1], 1.2, 1e-9);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  LinearProgram inf;
  inf.add_variable(1.0, 1.0);
  inf.add_row({{0, 1.0}}, RowSense::GreaterEqual, 2.0);
  EXPECT_EQ(solve_lp(inf).status, LpStatus::Infeasible);

  LinearProgram unb;
  unb.add_variable(-1.0, std::numeric_limits<double>::infinity());
  unb.add_row({{0, 1.0}}, RowSense::GreaterEqual, 1.0);
  EXPECT_EQ(solve_lp(unb).status, LpStatus::Unbounded);
}

TEST(Simplex, UpperBoundsFlipWithoutRows) {
  LinearProgram lp;
  for (int j = 0; j < 4; ++j) lp.add_variable(j % 2 ? -1.0 : 1.0, 2.0);
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, -4.0, 1e-12);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 rng(21);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto lp = random_lp(rng, 2 + rng() % 2, 1 + rng() % 3);
    const double expect = vertex_minimum(lp);
    for (bool bland : {false, true}) {
      SimplexOptions opt;
      opt.bland_only = bland;
      const auto r = solve_lp(lp, opt);
      if (std::isinf(expect)) {
        EXPECT_EQ(r.status, LpStatus::Infeasible);
      } else {
        ASSERT_EQ(r.status, LpStatus::Optimal);
        EXPECT_NEAR(r.objective, expect, 1e-7);
        EXPECT_LE(max_violation(lp, r.x), 1e-7);
        optimal += !bland;
      }
    }
  }
  EXPECT_GT(optimal, 100);
}

TEST(Simplex, ReoptimizeMatchesFreshSolve) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto lp = random_lp(rng, 3, 3);
    SimplexSolver warm(lp);
    if (warm.solve().status != LpStatus::Optimal) continue;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> cost(lp.num_vars());
      for (double& v : cost) v = c(rng);
      const auto a = warm.reoptimize(cost);
      LinearProgram fresh = lp;
      fresh.cost = cost;
      const auto b = solve_lp(fresh);
      ASSERT_EQ(a.status, b.status);
      if (a.status == LpStatus::Optimal) EXPECT_NEAR(a.objective, b.objective, 1e-7);
    }
  }
}

TEST(Simplex, LpFormatNamesEverything) {
  LinearProgram lp;
  lp.add_variable(1.0, 1.0, "t0");
  lp.add_row({{0, 1.0}}, RowSense::GreaterEqual, 0.5, "r0");
  const auto text = to_lp_format(lp);
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("r0"), std::string::npos);
  EXPECT_NE(text.find("t0"), std::string::npos);
}
