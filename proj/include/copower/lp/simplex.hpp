#pragma once

#include <optional>
#include <vector>

#include "copower/lp/model.hpp"

namespace copower::lp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterLimit, NodeLimit };

const char* to_string(SolveStatus s);

// Basis snapshot for warm starts (branch-and-bound re-solves).
struct Basis {
  std::vector<int> basic;      // column index per row
  std::vector<char> state;     // per column: 'B' basic, 'L' at lower, 'U' at upper, 'F' free at zero
};

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;             // structural variable values
  std::vector<double> row_dual;      // shadow price per row (d obj / d rhs)
  std::vector<double> reduced_cost;  // per structural variable
  std::vector<double> row_activity;
  int iterations = 0;
  Basis basis;

  double dual_objective(const LpModel& m) const;
  // max over rows/bounds of constraint violation
  double primal_residual(const LpModel& m) const;
  // max over variables of complementary-slackness violation
  double complementarity_residual(const LpModel& m) const;
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_iters = 200000;
  int refactor_every = 100;
  int stall_limit = 400;       // degenerate pivots before Bland's rule kicks in
  bool perturb_on_stall = false;
};

// Bounded-variable revised primal simplex with a dense basis inverse.
// Inequality rows get an internal slack column; binaries are treated as
// continuous within their bounds (the MILP layer fixes them).
class SimplexSolver {
 public:
  explicit SimplexSolver(const LpModel& model, SimplexOptions opts = {});

  LpSolution solve();
  LpSolution solve_from(const Basis& warm);

 private:
  struct Col {  // sparse column of the standardized problem
    std::vector<std::pair<int, double>> entries;
  };

  const LpModel& model_;
  SimplexOptions opts_;
  int m_ = 0;                  // rows
  int n_total_ = 0;            // structural + slack columns
  int n_struct_ = 0;
  double obj_sign_ = 1.0;      // +1 minimize, -1 maximize internally
  std::vector<Col> cols_;
  std::vector<double> lower_, upper_, cost_;
  std::vector<double> rhs_;

  // solver state
  std::vector<int> basic_;         // column per row
  std::vector<int> pos_in_basis_;  // row per column, -1 if nonbasic
  std::vector<char> state_;        // 'L','U','F' for nonbasic; 'B' basic
  std::vector<double> xval_;       // current value per column
  std::vector<double> binv_;       // dense m*m row-major
  int degenerate_run_ = 0;
  bool bland_ = false;
  int iters_ = 0;

  void build_standard_form();
  void set_default_basis();
  void install_basis(const Basis& warm);
  bool refactorize();              // recompute binv_ from basic_; false if singular
  void compute_basic_values();
  void ftran(const std::vector<std::pair<int, double>>& col, std::vector<double>& out) const;
  void btran(const std::vector<double>& row_in, std::vector<double>& out) const;
  double infeasibility() const;
  bool phase(bool phase_one, SolveStatus& status_out);
  void pivot(int entering, int leaving_row, double step, int entering_dir,
             char entering_bound_hit, const std::vector<double>& w);
  LpSolution extract(SolveStatus status);

  double col_value(int j) const { return xval_[j]; }
  double lo(int j) const { return lower_[j]; }
  double hi(int j) const { return upper_[j]; }
};

LpSolution solve_lp(const LpModel& model, SimplexOptions opts = {});

}  // namespace copower::lp
