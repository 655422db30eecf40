#include <cmath>
#include <random>

#include "copower/lp/milp.hpp"
#include "copower/lp/model.hpp"
#include "copower/lp/simplex.hpp"
#include "doctest.h"

using namespace copower::lp;

namespace {

void check_optimal_certificates(const LpModel& m, const LpSolution& sol) {
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.primal_residual(m) <= 1e-8);
  CHECK(sol.complementarity_residual(m) <= 1e-8 * (1.0 + std::fabs(sol.objective)));
  CHECK(std::fabs(sol.objective - sol.dual_objective(m)) <=
        1e-8 * (1.0 + std::fabs(sol.objective)));
}

}  // namespace

TEST_CASE("one variable lp with dual") {
  LpModel m;
  int x = m.add_var("x", -kInf, kInf, 1.0);
  int r = m.add_row("c", {{x, 1.0}}, RowSense::GreaterEqual, 1.0);
  auto sol = solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[x] == doctest::Approx(1.0));
  CHECK(sol.row_dual[r] == doctest::Approx(1.0));
  check_optimal_certificates(m, sol);
}

TEST_CASE("two variable max") {
  LpModel m;
  m.set_obj_sense(ObjSense::Maximize);
  int x = m.add_var("x", 0, kInf, 1.0);
  int y = m.add_var("y", 0, kInf, 1.0);
  m.add_row("cap", {{x, 1.0}, {y, 1.0}}, RowSense::LessEqual, 1.0);
  auto sol = solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  check_optimal_certificates(m, sol);
}

TEST_CASE("infeasible pair") {
  LpModel m;
  int x = m.add_var("x", -kInf, kInf, 1.0);
  m.add_row("ge", {{x, 1.0}}, RowSense::GreaterEqual, 1.0);
  m.add_row("le", {{x, 1.0}}, RowSense::LessEqual, 0.0);
  auto sol = solve_lp(m);
  CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded detection") {
  LpModel m;
  int x = m.add_var("x", 0, kInf, -1.0);
  m.add_row("r", {{x, -1.0}}, RowSense::LessEqual, 0.0);
  auto sol = solve_lp(m);
  CHECK(sol.status == SolveStatus::Unbounded);
}

TEST_CASE("degenerate transportation lp") {
  // supplies 2x2 with equal costs along one row; exercises degenerate pivots
  LpModel m;
  int x11 = m.add_var("x11", 0, kInf, 1.0);
  int x12 = m.add_var("x12", 0, kInf, 2.0);
  int x21 = m.add_var("x21", 0, kInf, 2.0);
  int x22 = m.add_var("x22", 0, kInf, 1.0);
  m.add_row("s1", {{x11, 1.0}, {x12, 1.0}}, RowSense::Equal, 1.0);
  m.add_row("s2", {{x21, 1.0}, {x22, 1.0}}, RowSense::Equal, 1.0);
  m.add_row("d1", {{x11, 1.0}, {x21, 1.0}}, RowSense::Equal, 1.0);
  m.add_row("d2", {{x12, 1.0}, {x22, 1.0}}, RowSense::Equal, 1.0);
  auto sol = solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0));
  check_optimal_certificates(m, sol);
}

TEST_CASE("strong duality and complementarity on random feasible lps") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    int rows = 2 + static_cast<int>(rng() % 5);
    LpModel m;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      x0[j] = u(rng);
      m.add_var("x" + std::to_string(j), -2.0, 2.0, u(rng));
    }
    for (int i = 0; i < rows; ++i) {
      std::vector<std::pair<int, double>> coeffs;
      double act = 0.0;
      for (int j = 0; j < n; ++j) {
        if (rng() % 3 == 0) continue;
        double a = u(rng);
        coeffs.push_back({j, a});
        act += a * x0[j];
      }
      if (coeffs.empty()) coeffs.push_back({0, 1.0});
      int kind = static_cast<int>(rng() % 3);
      if (kind == 0) m.add_row("r" + std::to_string(i), coeffs, RowSense::LessEqual, act + 0.5);
      else if (kind == 1) m.add_row("r" + std::to_string(i), coeffs, RowSense::GreaterEqual, act - 0.5);
      else m.add_row("r" + std::to_string(i), coeffs, RowSense::Equal, act);
    }
    auto sol = solve_lp(m);
    REQUIRE(sol.status == SolveStatus::Optimal);  // x0 is feasible by construction
    check_optimal_certificates(m, sol);
  }
}

TEST_CASE("determinism: identical model gives identical solution") {
  LpModel m;
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int j = 0; j < 8; ++j) m.add_var("x" + std::to_string(j), 0.0, 3.0, u(rng));
  for (int i = 0; i < 5; ++i) {
    std::vector<std::pair<int, double>> c;
    for (int j = 0; j < 8; ++j) c.push_back({j, u(rng)});
    m.add_row("r" + std::to_string(i), c, RowSense::LessEqual, 1.0);
  }
  auto a = solve_lp(m);
  auto b = solve_lp(m);
  REQUIRE(a.status == SolveStatus::Optimal);
  for (int j = 0; j < 8; ++j) CHECK(a.x[j] == b.x[j]);
  CHECK(a.objective == b.objective);
}

TEST_CASE("knapsack milp") {
  LpModel m;
  m.set_obj_sense(ObjSense::Maximize);
  int a = m.add_binary("a", 3.0);
  int b = m.add_binary("b", 2.0);
  m.add_row("cap", {{a, 1.0}, {b, 1.0}}, RowSense::LessEqual, 1.0);
  auto sol = solve_milp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.x[a] == doctest::Approx(1.0));
  CHECK(sol.gap <= 1e-6);
}

TEST_CASE("sos2 adjacency makes non-adjacent support infeasible") {
  LpModel m;
  int w0 = m.add_var("w0", 0, 1);
  int w1 = m.add_var("w1", 0, 1);
  int w2 = m.add_var("w2", 0, 1);
  m.add_row("sum", {{w0, 1.0}, {w1, 1.0}, {w2, 1.0}}, RowSense::Equal, 1.0);
  m.add_row("w0pos", {{w0, 1.0}}, RowSense::GreaterEqual, 0.3);
  m.add_row("w2pos", {{w2, 1.0}}, RowSense::GreaterEqual, 0.3);
  m.add_sos2("s", {w0, w1, w2});
  auto sol = solve_milp(m);
  CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("integral relaxation solves at the root") {
  LpModel m;
  int a = m.add_binary("a", 1.0);
  m.add_row("fix", {{a, 1.0}}, RowSense::GreaterEqual, 1.0);
  auto sol = solve_milp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.nodes == 1);
  CHECK(sol.objective == doctest::Approx(1.0));
}

TEST_CASE("sos2 interpolation of a nonconvex profile") {
  // values 0,5,1,4 at breakpoints 0..3; pin x=1.5: adjacency forces value 3
  LpModel m;
  std::vector<int> w;
  std::vector<double> val = {0.0, 5.0, 1.0, 4.0};
  for (int k = 0; k < 4; ++k) w.push_back(m.add_var("w" + std::to_string(k), 0, 1, val[k]));
  m.add_row("conv", {{w[0], 1.0}, {w[1], 1.0}, {w[2], 1.0}, {w[3], 1.0}}, RowSense::Equal, 1.0);
  m.add_row("x", {{w[1], 1.0}, {w[2], 2.0}, {w[3], 3.0}}, RowSense::Equal, 1.5);
  m.add_sos2("s", w);
  auto sol = solve_milp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
}

TEST_CASE("big-m complementarity") {
  SUBCASE("x zero y positive feasible") {
    LpModel m;
    int x = m.add_var("x", 0, kInf);
    int y = m.add_var("y", 0, kInf);
    m.add_row("fy", {{y, 1.0}}, RowSense::Equal, 4.0);
    m.add_row("fx", {{x, 1.0}}, RowSense::Equal, 0.0);
    big_m_complementarity(m, x, y, 10.0);
    auto sol = solve_milp(m);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x[x] == doctest::Approx(0.0));
    CHECK(sol.x[y] == doctest::Approx(4.0));
  }
  SUBCASE("both positive infeasible") {
    LpModel m;
    int x = m.add_var("x", 0, kInf);
    int y = m.add_var("y", 0, kInf);
    m.add_row("fy", {{y, 1.0}}, RowSense::Equal, 3.0);
    m.add_row("fx", {{x, 1.0}}, RowSense::Equal, 2.0);
    big_m_complementarity(m, x, y, 10.0);
    auto sol = solve_milp(m);
    CHECK(sol.status == SolveStatus::Infeasible);
  }
  SUBCASE("both zero feasible") {
    LpModel m;
    int x = m.add_var("x", 0, kInf);
    int y = m.add_var("y", 0, kInf);
    m.add_row("fy", {{y, 1.0}}, RowSense::Equal, 0.0);
    m.add_row("fx", {{x, 1.0}}, RowSense::Equal, 0.0);
    big_m_complementarity(m, x, y, 10.0);
    auto sol = solve_milp(m);
    CHECK(sol.status == SolveStatus::Optimal);
  }
  SUBCASE("nonpositive big-m rejected") {
    LpModel m;
    int x = m.add_var("x", 0, kInf);
    int y = m.add_var("y", 0, kInf);
    CHECK_THROWS(big_m_complementarity(m, x, y, 0.0));
  }
}

TEST_CASE("branch and bound matches exhaustive enumeration") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    int nb = 4 + static_cast<int>(rng() % 7);  // up to 10 binaries
    int nc = 2;
    LpModel m;
    std::vector<int> bins, cont;
    for (int j = 0; j < nb; ++j) bins.push_back(m.add_binary("b" + std::to_string(j), u(rng)));
    for (int j = 0; j < nc; ++j) cont.push_back(m.add_var("c" + std::to_string(j), 0.0, 2.0, u(rng)));
    for (int i = 0; i < 4; ++i) {
      std::vector<std::pair<int, double>> coeffs;
      for (int j : bins)
        if (rng() % 2) coeffs.push_back({j, u(rng)});
      for (int j : cont) coeffs.push_back({j, u(rng)});
      if (coeffs.empty()) coeffs.push_back({bins[0], 1.0});
      m.add_row("r" + std::to_string(i), coeffs, RowSense::LessEqual, 1.0 + 0.5 * u(rng));
    }
    auto milp = solve_milp(m);

    // oracle: enumerate all binary patterns with LP subsolves
    double best = kInf;
    LpModel probe = m;
    for (long mask = 0; mask < (1L << nb); ++mask) {
      for (int j = 0; j < nb; ++j) {
        double v = (mask >> j) & 1 ? 1.0 : 0.0;
        probe.set_bounds(bins[j], v, v);
      }
      auto lp = solve_lp(probe);
      if (lp.status == SolveStatus::Optimal) best = std::min(best, lp.objective);
    }

    if (best == kInf) {
      CHECK(milp.status == SolveStatus::Infeasible);
    } else {
      REQUIRE(milp.status == SolveStatus::Optimal);
      CHECK(milp.objective == doctest::Approx(best).epsilon(1e-7));
    }
  }
}

TEST_CASE("lp format dump mentions structure") {
  LpModel m;
  int x = m.add_var("x", 0, 5, 2.0);
  int z = m.add_binary("z");
  m.add_row("r0", {{x, 1.0}, {z, -3.0}}, RowSense::LessEqual, 1.5);
  m.add_sos2("s0", {x, z, x});
  auto text = m.dump_lp_format();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("r0") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("S2") != std::string::npos);
}
