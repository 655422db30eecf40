#pragma once

#include <functional>
#include <vector>

#include "copower/lp/model.hpp"
#include "copower/lp/simplex.hpp"

namespace copower::lp {

struct MilpOptions {
  double gap_tol = 1e-6;
  long node_limit = 200000;
  double int_tol = 1e-6;
  SimplexOptions lp;
  // invoked on every improved incumbent (objective, node count)
  std::function<void(double, long)> on_incumbent;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  double bound = 0.0;          // best proven bound on the optimum
  double gap = 0.0;            // |objective - bound| / max(1, |objective|)
  long nodes = 0;
  std::vector<double> x;
  // LP solution of the incumbent node with integers fixed (duals etc.)
  LpSolution incumbent_lp;
};

// Best-first branch and bound over binaries and SOS2 sets.
// Branching: most-fractional binary first; SOS2 sets are branched by
// splitting at the weight centroid.
MilpSolution solve_milp(const LpModel& model, MilpOptions opts = {});

// Adds the big-M linearization of the complementarity 0 <= x_var ⟂ y_var >= 0:
// a binary z with x <= M z and y <= M (1 - z). Returns {row_x, row_y, z}.
struct BigMHandles {
  int row_x;
  int row_y;
  int z;
};
BigMHandles big_m_complementarity(LpModel& model, int x_var, int y_var, double big_m);

}  // namespace copower::lp
