#include "copower/lp/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace copower::lp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterLimit: return "iter-limit";
    case SolveStatus::NodeLimit: return "node-limit";
  }
  return "?";
}

double LpSolution::dual_objective(const LpModel& m) const {
  double v = 0.0;
  for (int i = 0; i < m.num_rows(); ++i) v += row_dual[i] * m.row(i).rhs;
  // nonbasic variables at a bound contribute their reduced cost there
  for (int j = 0; j < m.num_vars(); ++j) v += reduced_cost[j] * x[j];
  return v;
}

double LpSolution::primal_residual(const LpModel& m) const {
  double r = 0.0;
  for (int i = 0; i < m.num_rows(); ++i) {
    double act = row_activity[i];
    const Row& row = m.row(i);
    switch (row.sense) {
      case RowSense::LessEqual: r = std::max(r, act - row.rhs); break;
      case RowSense::GreaterEqual: r = std::max(r, row.rhs - act); break;
      case RowSense::Equal: r = std::max(r, std::fabs(act - row.rhs)); break;
    }
  }
  for (int j = 0; j < m.num_vars(); ++j) {
    r = std::max(r, m.var(j).lower - x[j]);
    r = std::max(r, x[j] - m.var(j).upper);
  }
  return r;
}

double LpSolution::complementarity_residual(const LpModel& m) const {
  double r = 0.0;
  for (int i = 0; i < m.num_rows(); ++i) {
    const Row& row = m.row(i);
    if (row.sense == RowSense::Equal) continue;
    r = std::max(r, std::fabs(row_dual[i] * (row.rhs - row_activity[i])));
  }
  for (int j = 0; j < m.num_vars(); ++j) {
    const Variable& v = m.var(j);
    double gap = kInf;
    if (std::isfinite(v.lower)) gap = std::min(gap, x[j] - v.lower);
    if (std::isfinite(v.upper)) gap = std::min(gap, v.upper - x[j]);
    if (std::isfinite(gap)) r = std::max(r, std::fabs(reduced_cost[j]) * std::fabs(gap));
  }
  return r;
}

SimplexSolver::SimplexSolver(const LpModel& model, SimplexOptions opts)
    : model_(model), opts_(opts) {
  build_standard_form();
}

void SimplexSolver::build_standard_form() {
  m_ = model_.num_rows();
  n_struct_ = model_.num_vars();
  n_total_ = n_struct_ + m_;
  obj_sign_ = model_.obj_sense() == ObjSense::Minimize ? 1.0 : -1.0;

  cols_.assign(n_total_, {});
  lower_.assign(n_total_, 0.0);
  upper_.assign(n_total_, 0.0);
  cost_.assign(n_total_, 0.0);
  rhs_.assign(m_, 0.0);

  for (int j = 0; j < n_struct_; ++j) {
    const Variable& v = model_.var(j);
    lower_[j] = v.lower;
    upper_[j] = v.upper;
    cost_[j] = obj_sign_ * v.obj;
  }
  for (int i = 0; i < m_; ++i) {
    const Row& row = model_.row(i);
    for (auto& [j, a] : row.coeffs)
      if (a != 0.0) cols_[j].entries.push_back({i, a});
    rhs_[i] = row.rhs;
    int s = n_struct_ + i;
    cols_[s].entries.push_back({i, 1.0});
    switch (row.sense) {
      case RowSense::LessEqual: lower_[s] = 0.0; upper_[s] = kInf; break;
      case RowSense::GreaterEqual: lower_[s] = -kInf; upper_[s] = 0.0; break;
      case RowSense::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
    }
  }
}

void SimplexSolver::set_default_basis() {
  basic_.resize(m_);
  pos_in_basis_.assign(n_total_, -1);
  state_.assign(n_total_, 'L');
  for (int j = 0; j < n_total_; ++j) {
    if (std::isfinite(lower_[j])) state_[j] = 'L';
    else if (std::isfinite(upper_[j])) state_[j] = 'U';
    else state_[j] = 'F';
  }
  for (int i = 0; i < m_; ++i) {
    int s = n_struct_ + i;
    basic_[i] = s;
    pos_in_basis_[s] = i;
    state_[s] = 'B';
  }
  binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<size_t>(i) * m_ + i] = 1.0;
  compute_basic_values();
}

void SimplexSolver::install_basis(const Basis& warm) {
  if (static_cast<int>(warm.basic.size()) != m_ ||
      static_cast<int>(warm.state.size()) != n_total_) {
    set_default_basis();
    return;
  }
  basic_ = warm.basic;
  state_ = warm.state;
  pos_in_basis_.assign(n_total_, -1);
  for (int i = 0; i < m_; ++i) pos_in_basis_[basic_[i]] = i;
  // nonbasic states may reference bounds that are no longer finite
  for (int j = 0; j < n_total_; ++j) {
    if (pos_in_basis_[j] >= 0) { state_[j] = 'B'; continue; }
    if (state_[j] == 'L' && !std::isfinite(lower_[j]))
      state_[j] = std::isfinite(upper_[j]) ? 'U' : 'F';
    if (state_[j] == 'U' && !std::isfinite(upper_[j]))
      state_[j] = std::isfinite(lower_[j]) ? 'L' : 'F';
  }
  if (!refactorize()) {
    set_default_basis();
    return;
  }
  compute_basic_values();
}

bool SimplexSolver::refactorize() {
  // Gauss-Jordan inversion of the basis matrix with partial pivoting.
  std::vector<double> mat(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i)
    for (auto& [r, a] : cols_[basic_[i]].entries)
      mat[static_cast<size_t>(r) * m_ + i] = a;
  binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[static_cast<size_t>(i) * m_ + i] = 1.0;

  for (int c = 0; c < m_; ++c) {
    int piv = -1;
    double best = 1e-11;
    for (int r = c; r < m_; ++r) {
      double v = std::fabs(mat[static_cast<size_t>(r) * m_ + c]);
      if (v > best) { best = v; piv = r; }
    }
    if (piv < 0) return false;
    if (piv != c) {
      for (int k = 0; k < m_; ++k) {
        std::swap(mat[static_cast<size_t>(piv) * m_ + k], mat[static_cast<size_t>(c) * m_ + k]);
        std::swap(binv_[static_cast<size_t>(piv) * m_ + k], binv_[static_cast<size_t>(c) * m_ + k]);
      }
    }
    double d = mat[static_cast<size_t>(c) * m_ + c];
    double inv = 1.0 / d;
    double* mrow = &mat[static_cast<size_t>(c) * m_];
    double* brow = &binv_[static_cast<size_t>(c) * m_];
    for (int k = 0; k < m_; ++k) { mrow[k] *= inv; brow[k] *= inv; }
    for (int r = 0; r < m_; ++r) {
      if (r == c) continue;
      double f = mat[static_cast<size_t>(r) * m_ + c];
      if (f == 0.0) continue;
      double* mr = &mat[static_cast<size_t>(r) * m_];
      double* br = &binv_[static_cast<size_t>(r) * m_];
      for (int k = 0; k < m_; ++k) { mr[k] -= f * mrow[k]; br[k] -= f * brow[k]; }
    }
  }
  return true;
}

void SimplexSolver::compute_basic_values() {
  xval_.assign(n_total_, 0.0);
  for (int j = 0; j < n_total_; ++j) {
    if (pos_in_basis_[j] >= 0) continue;
    switch (state_[j]) {
      case 'L': xval_[j] = lower_[j]; break;
      case 'U': xval_[j] = upper_[j]; break;
      default: xval_[j] = 0.0; break;
    }
  }
  std::vector<double> r = rhs_;
  for (int j = 0; j < n_total_; ++j) {
    if (pos_in_basis_[j] >= 0 || xval_[j] == 0.0) continue;
    for (auto& [i, a] : cols_[j].entries) r[i] -= a * xval_[j];
  }
  for (int i = 0; i < m_; ++i) {
    double v = 0.0;
    const double* row = &binv_[static_cast<size_t>(i) * m_];
    for (int k = 0; k < m_; ++k) v += row[k] * r[k];
    xval_[basic_[i]] = v;
  }
}

void SimplexSolver::ftran(const std::vector<std::pair<int, double>>& col,
                          std::vector<double>& out) const {
  out.assign(m_, 0.0);
  for (auto& [i, a] : col) {
    if (a == 0.0) continue;
    for (int r = 0; r < m_; ++r) out[r] += binv_[static_cast<size_t>(r) * m_ + i] * a;
  }
}

void SimplexSolver::btran(const std::vector<double>& row_in, std::vector<double>& out) const {
  out.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double c = row_in[i];
    if (c == 0.0) continue;
    const double* row = &binv_[static_cast<size_t>(i) * m_];
    for (int k = 0; k < m_; ++k) out[k] += c * row[k];
  }
}

double SimplexSolver::infeasibility() const {
  double phi = 0.0;
  for (int i = 0; i < m_; ++i) {
    int j = basic_[i];
    if (xval_[j] < lower_[j]) phi += lower_[j] - xval_[j];
    if (xval_[j] > upper_[j]) phi += xval_[j] - upper_[j];
  }
  return phi;
}

// One simplex phase. Phase one drives bound violations of basic variables to
// zero with composite +/-1 costs; phase two prices the true objective.
bool SimplexSolver::phase(bool phase_one, SolveStatus& status_out) {
  const double ftol = opts_.feas_tol;
  std::vector<double> cb(m_), y(m_), w(m_);

  while (true) {
    if (iters_ >= opts_.max_iters) { status_out = SolveStatus::IterLimit; return false; }

    bool any_infeas = false;
    for (int i = 0; i < m_; ++i) {
      int j = basic_[i];
      if (xval_[j] < lower_[j] - ftol || xval_[j] > upper_[j] + ftol) { any_infeas = true; break; }
    }
    if (phase_one && !any_infeas) return true;  // feasible, go to phase two
    if (!phase_one && any_infeas) {
      // numerical drift; repair via refactor + revaluation once
      refactorize();
      compute_basic_values();
      any_infeas = false;
      for (int i = 0; i < m_; ++i) {
        int j = basic_[i];
        if (xval_[j] < lower_[j] - ftol * 10 || xval_[j] > upper_[j] + ftol * 10) { any_infeas = true; break; }
      }
      if (any_infeas) { status_out = SolveStatus::Infeasible; return false; }
    }

    // pricing
    for (int i = 0; i < m_; ++i) {
      int j = basic_[i];
      if (phase_one) {
        if (xval_[j] < lower_[j] - ftol) cb[i] = -1.0;
        else if (xval_[j] > upper_[j] + ftol) cb[i] = 1.0;
        else cb[i] = 0.0;
      } else {
        cb[i] = cost_[j];
      }
    }
    btran(cb, y);

    int entering = -1;
    int edir = 0;
    double best_score = opts_.opt_tol;
    for (int j = 0; j < n_total_; ++j) {
      if (pos_in_basis_[j] >= 0) continue;
      double cj = phase_one ? 0.0 : cost_[j];
      double d = cj;
      for (auto& [i, a] : cols_[j].entries) d -= y[i] * a;
      int dir = 0;
      if (state_[j] == 'L' && d < -best_score) dir = 1;
      else if (state_[j] == 'U' && d > best_score) dir = -1;
      else if (state_[j] == 'F' && std::fabs(d) > best_score) dir = d < 0 ? 1 : -1;
      if (dir != 0) {
        if (bland_) { entering = j; edir = dir; break; }
        best_score = std::fabs(d);
        entering = j;
        edir = dir;
      }
    }

    if (entering < 0) {
      if (phase_one) {
        status_out = infeasibility() > 1e-7 ? SolveStatus::Infeasible : SolveStatus::Optimal;
        return status_out == SolveStatus::Optimal;
      }
      status_out = SolveStatus::Optimal;
      return true;
    }

    ftran(cols_[entering].entries, w);

    // ratio test: first blocking breakpoint
    double tmax = kInf;
    int leave_row = -1;
    char hit = 0;  // 'l' leaving var hits lower, 'u' hits upper, 'f' entering bound flip
    double tie = 0.0;
    if (std::isfinite(upper_[entering]) && std::isfinite(lower_[entering])) {
      tmax = upper_[entering] - lower_[entering];
      hit = 'f';
    }
    for (int i = 0; i < m_; ++i) {
      double delta = -static_cast<double>(edir) * w[i];
      if (std::fabs(delta) < 1e-11) continue;
      int j = basic_[i];
      double xb = xval_[j];
      bool below = xb < lower_[j] - ftol;
      bool above = xb > upper_[j] + ftol;
      double limit = kInf;
      char h = 0;
      if (below) {
        if (delta > 0) { limit = (lower_[j] - xb) / delta; h = 'l'; }
      } else if (above) {
        if (delta < 0) { limit = (upper_[j] - xb) / delta; h = 'u'; }
      } else {
        if (delta > 0 && std::isfinite(upper_[j])) { limit = (upper_[j] - xb) / delta; h = 'u'; }
        else if (delta < 0 && std::isfinite(lower_[j])) { limit = (lower_[j] - xb) / delta; h = 'l'; }
      }
      if (limit == kInf) continue;
      if (limit < 0) limit = 0;
      bool better = limit < tmax - 1e-12;
      bool tied = std::fabs(limit - tmax) <= 1e-12;
      if (better || (tied && !bland_ && std::fabs(delta) > tie) ||
          (tied && bland_ && leave_row >= 0 && basic_[i] < basic_[leave_row])) {
        tmax = limit;
        leave_row = i;
        hit = h;
        tie = std::fabs(delta);
      }
    }

    if (tmax == kInf) {
      // phase one always blocks eventually; unbounded only in phase two
      status_out = phase_one ? SolveStatus::Infeasible : SolveStatus::Unbounded;
      return false;
    }

    if (tmax <= 1e-10) {
      if (++degenerate_run_ > opts_.stall_limit) bland_ = true;
    } else {
      degenerate_run_ = 0;
    }

    pivot(entering, hit == 'f' ? -1 : leave_row, tmax, edir, hit, w);
    ++iters_;
    if (iters_ % opts_.refactor_every == 0) {
      refactorize();
      compute_basic_values();
    }
  }
}

void SimplexSolver::pivot(int entering, int leaving_row, double step, int edir, char hit,
                          const std::vector<double>& w) {
  double move = static_cast<double>(edir) * step;
  for (int i = 0; i < m_; ++i) xval_[basic_[i]] -= move * w[i];
  xval_[entering] += move;

  if (hit == 'f') {  // bound flip, basis unchanged
    state_[entering] = edir > 0 ? 'U' : 'L';
    xval_[entering] = edir > 0 ? upper_[entering] : lower_[entering];
    return;
  }

  int leaving = basic_[leaving_row];
  state_[leaving] = hit == 'l' ? 'L' : 'U';
  xval_[leaving] = hit == 'l' ? lower_[leaving] : upper_[leaving];
  pos_in_basis_[leaving] = -1;
  basic_[leaving_row] = entering;
  pos_in_basis_[entering] = leaving_row;
  state_[entering] = 'B';

  // binv update: eliminate entering column from all other rows
  double piv = w[leaving_row];
  double* prow = &binv_[static_cast<size_t>(leaving_row) * m_];
  double inv = 1.0 / piv;
  for (int k = 0; k < m_; ++k) prow[k] *= inv;
  for (int r = 0; r < m_; ++r) {
    if (r == leaving_row) continue;
    double f = w[r];
    if (f == 0.0) continue;
    double* row = &binv_[static_cast<size_t>(r) * m_];
    for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
  }
}

LpSolution SimplexSolver::extract(SolveStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iters_;
  sol.x.assign(n_struct_, 0.0);
  sol.row_dual.assign(m_, 0.0);
  sol.reduced_cost.assign(n_struct_, 0.0);
  sol.row_activity.assign(m_, 0.0);
  if (status != SolveStatus::Optimal && status != SolveStatus::IterLimit) return sol;

  for (int j = 0; j < n_struct_; ++j) sol.x[j] = xval_[j];
  double obj = 0.0;
  for (int j = 0; j < n_struct_; ++j) obj += model_.var(j).obj * sol.x[j];
  sol.objective = obj;

  std::vector<double> cb(m_), y(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[basic_[i]];
  btran(cb, y);
  for (int i = 0; i < m_; ++i) sol.row_dual[i] = obj_sign_ * y[i];
  for (int j = 0; j < n_struct_; ++j) {
    double d = cost_[j];
    for (auto& [i, a] : cols_[j].entries) d -= y[i] * a;
    sol.reduced_cost[j] = pos_in_basis_[j] >= 0 ? 0.0 : obj_sign_ * d;
  }
  for (int i = 0; i < m_; ++i) {
    const Row& row = model_.row(i);
    double act = 0.0;
    for (auto& [j, a] : row.coeffs) act += a * sol.x[j];
    sol.row_activity[i] = act;
  }
  sol.basis.basic = basic_;
  sol.basis.state = state_;
  return sol;
}

LpSolution SimplexSolver::solve() {
  set_default_basis();
  iters_ = 0;
  degenerate_run_ = 0;
  bland_ = false;
  SolveStatus status = SolveStatus::Optimal;
  if (!phase(true, status)) return extract(status);
  if (!phase(false, status)) return extract(status);
  return extract(SolveStatus::Optimal);
}

LpSolution SimplexSolver::solve_from(const Basis& warm) {
  install_basis(warm);
  iters_ = 0;
  degenerate_run_ = 0;
  bland_ = false;
  SolveStatus status = SolveStatus::Optimal;
  if (!phase(true, status)) return extract(status);
  if (!phase(false, status)) return extract(status);
  return extract(SolveStatus::Optimal);
}

LpSolution solve_lp(const LpModel& model, SimplexOptions opts) {
  SimplexSolver s(model, opts);
  return s.solve();
}

}  // namespace copower::lp
