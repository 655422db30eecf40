#include "copower/lp/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace copower::lp {

namespace {

struct BoundFix {
  int var;
  double lower, upper;
};

struct Node {
  double bound;  // minimize-oriented parent LP value
  int depth;
  long id;
  std::vector<BoundFix> fixes;
  Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;  // prefer deeper on ties
    return a.id > b.id;
  }
};

constexpr double kSosTol = 1e-7;

// Returns -1 if all SOS2 sets satisfy the at-most-two-adjacent rule.
int violated_sos2(const LpModel& model, const std::vector<double>& x) {
  for (size_t s = 0; s < model.sos2_sets().size(); ++s) {
    const auto& set = model.sos2_sets()[s];
    int first = -1, last = -1, count = 0;
    for (size_t k = 0; k < set.vars.size(); ++k) {
      if (std::fabs(x[set.vars[k]]) > kSosTol) {
        if (first < 0) first = static_cast<int>(k);
        last = static_cast<int>(k);
        ++count;
      }
    }
    if (count > 2 || (count == 2 && last - first > 1)) return static_cast<int>(s);
  }
  return -1;
}

}  // namespace

BigMHandles big_m_complementarity(LpModel& model, int x_var, int y_var, double big_m) {
  if (big_m <= 0.0) throw std::invalid_argument("big-M value must be positive");
  std::string base = model.var(x_var).name + "_perp_" + model.var(y_var).name;
  int z = model.add_binary("z_" + base);
  int row_x = model.add_row("bm_x_" + base, {{x_var, 1.0}, {z, -big_m}},
                            RowSense::LessEqual, 0.0);
  int row_y = model.add_row("bm_y_" + base, {{y_var, 1.0}, {z, big_m}},
                            RowSense::LessEqual, big_m);
  return {row_x, row_y, z};
}

MilpSolution solve_milp(const LpModel& model_in, MilpOptions opts) {
  LpModel model = model_in;  // working copy; node bounds are applied in place
  const double sgn = model.obj_sense() == ObjSense::Minimize ? 1.0 : -1.0;

  MilpSolution out;
  out.bound = -kInf;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  long nodes = 0;
  double incumbent_v = kInf;
  double dual_bound = -kInf;  // best-first: non-decreasing over pops
  bool have_incumbent = false;
  bool exhausted = false;

  std::vector<BoundFix> saved;
  auto apply = [&](const std::vector<BoundFix>& fixes) {
    saved.clear();
    for (const auto& f : fixes) {
      saved.push_back({f.var, model.var(f.var).lower, model.var(f.var).upper});
      model.set_bounds(f.var, f.lower, f.upper);
    }
  };
  auto revert = [&]() {
    for (auto it = saved.rbegin(); it != saved.rend(); ++it)
      model.set_bounds(it->var, it->lower, it->upper);
  };

  open.push({-kInf, 0, next_id++, {}, {}});

  while (true) {
    if (open.empty()) {
      exhausted = true;
      break;
    }
    Node node = open.top();
    open.pop();
    dual_bound = std::max(dual_bound, node.bound);

    if (have_incumbent) {
      double gap = (incumbent_v - dual_bound) / std::max(1.0, std::fabs(incumbent_v));
      if (dual_bound > -kInf && gap <= opts.gap_tol) break;
      if (dual_bound >= incumbent_v - 1e-12) {
        exhausted = true;  // nothing better remains
        break;
      }
    }
    if (nodes >= opts.node_limit) {
      out.status = SolveStatus::NodeLimit;
      break;
    }

    apply(node.fixes);
    SimplexSolver solver(model, opts.lp);
    LpSolution lp = node.basis.basic.empty() ? solver.solve() : solver.solve_from(node.basis);
    revert();
    ++nodes;

    if (lp.status == SolveStatus::Unbounded && node.depth == 0) {
      out.status = SolveStatus::Unbounded;
      out.nodes = nodes;
      return out;
    }
    if (lp.status != SolveStatus::Optimal) continue;  // infeasible subtree

    double v = sgn * lp.objective;
    if (have_incumbent && v >= incumbent_v - 1e-12) continue;

    // branching variable: most fractional binary
    int branch_var = -1;
    double best_frac = opts.int_tol;
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.var(j).kind != VarKind::Binary) continue;
      double xj = lp.x[j];
      double dist = std::min(std::fabs(xj), std::fabs(1.0 - xj));
      if (dist > best_frac) {
        best_frac = dist;
        branch_var = j;
      }
    }

    if (branch_var >= 0) {
      // the nearer bound gets the smaller id and is explored first on ties
      double near = lp.x[branch_var] >= 0.5 ? 1.0 : 0.0;
      Node a{v, node.depth + 1, next_id++, node.fixes, lp.basis};
      a.fixes.push_back({branch_var, near, near});
      Node b{v, node.depth + 1, next_id++, node.fixes, lp.basis};
      b.fixes.push_back({branch_var, 1.0 - near, 1.0 - near});
      open.push(std::move(a));
      open.push(std::move(b));
      continue;
    }

    int sos_idx = violated_sos2(model, lp.x);
    if (sos_idx >= 0) {
      const auto& set = model.sos2_sets()[sos_idx];
      int n = static_cast<int>(set.vars.size());
      double wsum = 0.0, centroid = 0.0;
      for (int k = 0; k < n; ++k) {
        double w = std::fabs(lp.x[set.vars[k]]);
        wsum += w;
        centroid += w * k;
      }
      int split = wsum > 0 ? static_cast<int>(centroid / wsum) : n / 2;
      split = std::clamp(split, 1, n - 2);
      Node left{v, node.depth + 1, next_id++, node.fixes, lp.basis};
      for (int k = split + 1; k < n; ++k) left.fixes.push_back({set.vars[k], 0.0, 0.0});
      Node right{v, node.depth + 1, next_id++, node.fixes, lp.basis};
      for (int k = 0; k < split; ++k) right.fixes.push_back({set.vars[k], 0.0, 0.0});
      open.push(std::move(left));
      open.push(std::move(right));
      continue;
    }

    // integral and SOS2-feasible
    if (!have_incumbent || v < incumbent_v) {
      have_incumbent = true;
      incumbent_v = v;
      out.x = lp.x;
      out.objective = lp.objective;
      out.incumbent_lp = std::move(lp);
      if (opts.on_incumbent) opts.on_incumbent(out.objective, nodes);
    }
  }

  out.nodes = nodes;
  if (!have_incumbent) {
    if (out.status != SolveStatus::NodeLimit) out.status = SolveStatus::Infeasible;
    return out;
  }
  double proven = exhausted ? incumbent_v : std::min(dual_bound, incumbent_v);
  out.bound = sgn * proven;
  out.gap = std::fabs(incumbent_v - proven) / std::max(1.0, std::fabs(incumbent_v));
  if (out.status != SolveStatus::NodeLimit) out.status = SolveStatus::Optimal;
  return out;
}

}  // namespace copower::lp
