#include "copower/power/sharing.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include "copower/model/errors.hpp"

namespace copower::power {

using lp::kInf;
using lp::LpModel;
using lp::RowSense;

double cone_epsilon(int depth) {
  if (depth < 1) throw ValidationError("cone depth must be >= 1");
  double c = std::cos(std::numbers::pi / std::pow(2.0, depth + 1));
  return 1.0 / (c * c) - 1.0;
}

namespace {

std::vector<std::pair<int, double>> negate(std::vector<std::pair<int, double>> e) {
  for (auto& [j, a] : e) a = -a;
  return e;
}

void append(std::vector<std::pair<int, double>>& row,
            const std::vector<std::pair<int, double>>& expr, double scale) {
  for (auto& [j, a] : expr) row.push_back({j, a * scale});
}

}  // namespace

ConeHandles approximate_soc(LpModel& model, const ConeTriple& cone, int depth) {
  if (depth < 1) throw ValidationError("cone depth must be >= 1");
  ConeHandles h;
  std::vector<int> xi(depth + 1), eta(depth + 1);
  for (int z = 0; z <= depth; ++z) {
    xi[z] = model.add_var(cone.name + "_xi" + std::to_string(z), -kInf, kInf);
    eta[z] = model.add_var(cone.name + "_eta" + std::to_string(z), -kInf, kInf);
  }
  auto abs_pair = [&](int var, const std::vector<std::pair<int, double>>& expr,
                      const std::string& tag) {
    std::vector<std::pair<int, double>> r1 = {{var, 1.0}};
    append(r1, negate(expr), 1.0);
    h.rows.push_back(model.add_row(cone.name + tag + "p", r1, RowSense::GreaterEqual, 0.0));
    std::vector<std::pair<int, double>> r2 = {{var, 1.0}};
    append(r2, expr, 1.0);
    h.rows.push_back(model.add_row(cone.name + tag + "m", r2, RowSense::GreaterEqual, 0.0));
  };
  abs_pair(xi[0], cone.x1, "_x1");
  abs_pair(eta[0], cone.x2, "_x2");

  for (int z = 1; z <= depth; ++z) {
    double ang = std::numbers::pi / std::pow(2.0, z + 1);
    double c = std::cos(ang), s = std::sin(ang);
    h.rows.push_back(model.add_row(
        cone.name + "_rot" + std::to_string(z),
        {{xi[z], 1.0}, {xi[z - 1], -c}, {eta[z - 1], -s}}, RowSense::Equal, 0.0));
    h.rows.push_back(model.add_row(
        cone.name + "_absp" + std::to_string(z),
        {{eta[z], 1.0}, {xi[z - 1], s}, {eta[z - 1], -c}}, RowSense::GreaterEqual, 0.0));
    h.rows.push_back(model.add_row(
        cone.name + "_absm" + std::to_string(z),
        {{eta[z], 1.0}, {xi[z - 1], -s}, {eta[z - 1], c}}, RowSense::GreaterEqual, 0.0));
  }
  double tanZ = std::tan(std::numbers::pi / std::pow(2.0, depth + 1));
  std::vector<std::pair<int, double>> tail = {{xi[depth], -1.0}};
  append(tail, cone.x3, 1.0);
  h.rows.push_back(model.add_row(cone.name + "_cap", tail, RowSense::GreaterEqual, 0.0));
  h.rows.push_back(model.add_row(cone.name + "_tan",
                                 {{xi[depth], tanZ}, {eta[depth], -1.0}},
                                 RowSense::GreaterEqual, 0.0));
  h.xi_last = xi[depth];
  return h;
}

namespace {

struct Tree {
  int root = -1;
  std::vector<int> line_parent_bus, line_child_bus;  // per line
  std::vector<std::vector<int>> child_lines;         // per bus
};

Tree orient_tree(const PowerNetwork& net) {
  size_t nb = net.buses.size();
  if (net.lines.size() + 1 != nb)
    throw ValidationError("feasible set needs a radial network (buses-1 lines)");
  Tree t;
  t.root = net.bus_index(net.slack_bus);
  if (t.root < 0) throw ValidationError("unknown slack bus '" + net.slack_bus + "'");
  t.line_parent_bus.assign(net.lines.size(), -1);
  t.line_child_bus.assign(net.lines.size(), -1);
  t.child_lines.assign(nb, {});

  std::vector<std::vector<std::pair<int, int>>> adj(nb);  // (line, other bus)
  for (size_t l = 0; l < net.lines.size(); ++l) {
    int f = net.bus_index(net.lines[l].from);
    int to = net.bus_index(net.lines[l].to);
    if (f < 0 || to < 0) throw ValidationError("line endpoint missing");
    adj[f].push_back({static_cast<int>(l), to});
    adj[to].push_back({static_cast<int>(l), f});
  }
  std::vector<char> seen(nb, 0);
  std::vector<int> queue = {t.root};
  seen[t.root] = 1;
  for (size_t q = 0; q < queue.size(); ++q) {
    int u = queue[q];
    for (auto& [l, v] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      t.line_parent_bus[l] = u;
      t.line_child_bus[l] = v;
      t.child_lines[u].push_back(l);
      queue.push_back(v);
    }
  }
  for (size_t i = 0; i < nb; ++i)
    if (!seen[i])
      throw ValidationError("network is not connected: bus '" + net.buses[i].id + "'");
  return t;
}

}  // namespace

FeasibleSetBlock build_feasible_set(LpModel& model, const PowerNetwork& net,
                                    const std::vector<Prosumer>& prosumers, int cone_depth) {
  Tree tree = orient_tree(net);
  const double base = net.base_mva;
  const size_t nl = net.lines.size();
  const size_t nb = net.buses.size();

  FeasibleSetBlock fs;
  fs.line_p.resize(nl);
  fs.line_q.resize(nl);
  fs.line_isq.resize(nl);
  fs.line_w.resize(nl);
  fs.bus_vsq.resize(nb);

  for (size_t l = 0; l < nl; ++l) {
    const Line& ln = net.lines[l];
    std::string tag = ln.from + "_" + ln.to;
    fs.line_p[l] = model.add_var("P_" + tag, -kInf, kInf);
    fs.line_q[l] = model.add_var("Q_" + tag, -kInf, kInf);
    fs.line_isq[l] = model.add_var("l_" + tag, 0.0, ln.i_sq_max_pu);
    fs.line_w[l] = model.add_var("W_" + tag, 0.0, kInf);
  }
  for (size_t i = 0; i < nb; ++i) {
    const Bus& b = net.buses[i];
    double lo = b.v_sq_min, hi = b.v_sq_max;
    if (static_cast<int>(i) == tree.root)
      lo = hi = net.slack_v_pu * net.slack_v_pu;
    fs.bus_vsq[i] = model.add_var("v_" + b.id, lo, hi);
  }

  std::vector<int> withdraw_of_bus(nb, -1);
  std::vector<int> reactive_of_bus(nb, -1);
  fs.withdraw.resize(prosumers.size());
  fs.reactive.resize(prosumers.size());
  for (size_t p = 0; p < prosumers.size(); ++p) {
    int bi = net.bus_index(prosumers[p].bus);
    if (bi < 0) throw ValidationError("prosumer bus '" + prosumers[p].bus + "' missing");
    if (bi == tree.root)
      throw ValidationError("prosumer cannot sit at the slack bus '" + prosumers[p].bus + "'");
    const Bus& b = net.buses[bi];
    fs.withdraw[p] = model.add_var("q_" + b.id, b.p_min_mw / base, b.p_max_mw / base);
    fs.reactive[p] = model.add_var("Qi_" + b.id, prosumers[p].q_min_mvar / base,
                                   prosumers[p].q_max_mvar / base);
    withdraw_of_bus[bi] = fs.withdraw[p];
    reactive_of_bus[bi] = fs.reactive[p];
  }
  {
    const Bus& rb = net.buses[tree.root];
    fs.slack_withdraw = model.add_var("q_" + rb.id, rb.p_min_mw / base, rb.p_max_mw / base);
    fs.slack_reactive = model.add_var("Qi_" + rb.id, rb.q_min_mvar / base, rb.q_max_mvar / base);
    withdraw_of_bus[tree.root] = fs.slack_withdraw;
    reactive_of_bus[tree.root] = fs.slack_reactive;
  }

  fs.active_rows.resize(nl);
  fs.reactive_rows.resize(nl);
  fs.volt_rows.resize(nl);
  for (size_t l = 0; l < nl; ++l) {
    const Line& ln = net.lines[l];
    int child = tree.line_child_bus[l];
    const Bus& cb = net.buses[child];
    double fixed_p = cb.fixed_p_mw / base;
    double fixed_q = cb.fixed_q_mvar / base;

    std::vector<std::pair<int, double>> act = {{fs.line_p[l], 1.0},
                                               {fs.line_isq[l], -ln.r_pu}};
    for (int k : tree.child_lines[child]) act.push_back({fs.line_p[k], -1.0});
    if (withdraw_of_bus[child] >= 0) act.push_back({withdraw_of_bus[child], -1.0});
    fs.active_rows[l] =
        model.add_row("balP_" + cb.id, act, RowSense::Equal, fixed_p);

    std::vector<std::pair<int, double>> rea = {{fs.line_q[l], 1.0},
                                               {fs.line_isq[l], -ln.x_pu}};
    for (int k : tree.child_lines[child]) rea.push_back({fs.line_q[k], -1.0});
    if (reactive_of_bus[child] >= 0) rea.push_back({reactive_of_bus[child], 1.0});
    fs.reactive_rows[l] =
        model.add_row("balQ_" + cb.id, rea, RowSense::Equal, fixed_q);

    int parent = tree.line_parent_bus[l];
    fs.volt_rows[l] = model.add_row(
        "volt_" + ln.from + "_" + ln.to,
        {{fs.bus_vsq[parent], 1.0},
         {fs.bus_vsq[child], -1.0},
         {fs.line_p[l], -2.0 * ln.r_pu},
         {fs.line_q[l], -2.0 * ln.x_pu},
         {fs.line_isq[l], ln.r_pu * ln.r_pu + ln.x_pu * ln.x_pu}},
        RowSense::Equal, 0.0);
  }

  {
    const Bus& rb = net.buses[tree.root];
    std::vector<std::pair<int, double>> act = {{fs.slack_withdraw, 1.0}};
    for (int k : tree.child_lines[tree.root]) act.push_back({fs.line_p[k], 1.0});
    fs.root_active_row =
        model.add_row("balP_" + rb.id, act, RowSense::Equal, -rb.fixed_p_mw / base);
    std::vector<std::pair<int, double>> rea = {{fs.slack_reactive, -1.0}};
    for (int k : tree.child_lines[tree.root]) rea.push_back({fs.line_q[k], 1.0});
    fs.root_reactive_row =
        model.add_row("balQ_" + rb.id, rea, RowSense::Equal, -rb.fixed_q_mvar / base);
  }

  for (size_t l = 0; l < nl; ++l) {
    const Line& ln = net.lines[l];
    int parent = tree.line_parent_bus[l];
    std::string tag = ln.from + "_" + ln.to;
    ConeTriple inner;
    inner.name = "coneA_" + tag;
    inner.x1 = {{fs.line_p[l], 2.0}};
    inner.x2 = {{fs.line_q[l], 2.0}};
    inner.x3 = {{fs.line_w[l], 1.0}};
    ConeTriple outer;
    outer.name = "coneB_" + tag;
    outer.x1 = {{fs.line_w[l], 1.0}};
    outer.x2 = {{fs.line_isq[l], 1.0}, {fs.bus_vsq[parent], -1.0}};
    outer.x3 = {{fs.line_isq[l], 1.0}, {fs.bus_vsq[parent], 1.0}};
    fs.cones.push_back(inner);
    fs.cones.push_back(outer);
    if (cone_depth > 0) {
      fs.cone_rows.push_back(approximate_soc(model, inner, cone_depth));
      fs.cone_rows.push_back(approximate_soc(model, outer, cone_depth));
    }
  }
  return fs;
}

SharingSkeleton build_sharing_skeleton(const Scenario& s, int cone_depth,
                                       const std::set<std::string>& self_sufficient) {
  SharingSkeleton sk;
  sk.base_mva = s.power.base_mva;
  sk.fs = build_feasible_set(sk.model, s.power, s.prosumers, cone_depth);
  sk.model.set_obj_sense(lp::ObjSense::Minimize);

  const double base = sk.base_mva;
  sk.demand.resize(s.prosumers.size());
  sk.balance_rows.resize(s.prosumers.size());
  sk.balance_const.resize(s.prosumers.size());
  for (size_t p = 0; p < s.prosumers.size(); ++p) {
    const Prosumer& pr = s.prosumers[p];
    sk.demand[p] = sk.model.add_var("d_" + pr.bus, pr.elastic_min_mw / base,
                                    pr.elastic_max_mw / base,
                                    -pr.utility_usd_per_mwh * base);
    sk.balance_const[p] = (pr.fixed_demand_mw - pr.renewable_mw) / base;
    sk.balance_rows[p] = sk.model.add_row(
        "share_" + pr.bus, {{sk.fs.withdraw[p], 1.0}, {sk.demand[p], -1.0}},
        RowSense::Equal, sk.balance_const[p]);
    if (self_sufficient.count(pr.bus)) sk.model.set_bounds(sk.fs.withdraw[p], 0.0, 0.0);
  }
  return sk;
}

namespace {

std::vector<double> cone_residuals(const PowerNetwork& net, const FeasibleSetBlock& fs,
                                   const std::vector<double>& x) {
  Tree tree = orient_tree(net);
  std::vector<double> res(net.lines.size());
  for (size_t l = 0; l < net.lines.size(); ++l) {
    double p = x[fs.line_p[l]];
    double q = x[fs.line_q[l]];
    double isq = x[fs.line_isq[l]];
    double v = x[fs.bus_vsq[tree.line_parent_bus[l]]];
    res[l] = std::sqrt(4 * p * p + 4 * q * q + (isq - v) * (isq - v)) - (isq + v);
  }
  return res;
}

}  // namespace

std::map<std::string, double> fixed_charging_demand(const Scenario& s) {
  std::map<std::string, double> d;
  for (auto& p : s.prosumers) {
    auto it = s.options.fixed_charging_demand_mwh.find(p.bus);
    d[p.bus] = it == s.options.fixed_charging_demand_mwh.end() ? 0.0 : it->second;
  }
  return d;
}

MarketOutcome solve_centralized_sharing(const Scenario& s,
                                        const std::map<std::string, double>& charging_mwh,
                                        const std::set<std::string>& self_sufficient) {
  SharingSkeleton sk = build_sharing_skeleton(s, s.options.cone_depth, self_sufficient);
  const double base = sk.base_mva;
  MarketOutcome out;
  out.charging_mwh.resize(s.prosumers.size(), 0.0);
  for (size_t p = 0; p < s.prosumers.size(); ++p) {
    auto it = charging_mwh.find(s.prosumers[p].bus);
    double d_t = it == charging_mwh.end() ? 0.0 : it->second;
    if (d_t < 0) throw ValidationError("negative charging demand at '" + s.prosumers[p].bus + "'");
    out.charging_mwh[p] = d_t;
    sk.model.set_rhs(sk.balance_rows[p], sk.balance_const[p] + d_t / base);
  }

  lp::LpSolution sol = lp::solve_lp(sk.model);
  out.status = sol.status;
  if (sol.status != lp::SolveStatus::Optimal) return out;

  size_t np = s.prosumers.size();
  out.price_usd_per_mwh.resize(np);
  out.bid_mw.resize(np);
  out.share_mw.resize(np);
  out.demand_mw.resize(np);
  out.utility_usd = 0.0;
  for (size_t p = 0; p < np; ++p) {
    out.price_usd_per_mwh[p] = sol.row_dual[sk.balance_rows[p]] / base;
    out.share_mw[p] = sol.x[sk.fs.withdraw[p]] * base;
    out.demand_mw[p] = sol.x[sk.demand[p]] * base;
    out.bid_mw[p] = out.share_mw[p] + s.options.m_a * out.price_usd_per_mwh[p];
    out.utility_usd += s.prosumers[p].utility_usd_per_mwh * out.demand_mw[p];
  }
  out.import_mw = -sol.x[sk.fs.slack_withdraw] * base;
  for (size_t l = 0; l < s.power.lines.size(); ++l) {
    out.line_p_pu.push_back(sol.x[sk.fs.line_p[l]]);
    out.line_q_pu.push_back(sol.x[sk.fs.line_q[l]]);
    out.line_isq_pu.push_back(sol.x[sk.fs.line_isq[l]]);
  }
  for (size_t b = 0; b < s.power.buses.size(); ++b)
    out.bus_vsq_pu.push_back(sol.x[sk.fs.bus_vsq[b]]);
  out.cone_residual_pu = cone_residuals(s.power, sk.fs, sol.x);
  return out;
}

ClearedMarket clear_market(const std::vector<double>& bids_mw, const Scenario& s) {
  if (bids_mw.size() != s.prosumers.size())
    throw ValidationError("clear_market: bid vector size mismatch");
  const double base = s.power.base_mva;
  const size_t np = s.prosumers.size();

  // projection windows per prosumer (p.u.)
  std::vector<double> lo(np), hi(np), bid_pu(np);
  for (size_t p = 0; p < np; ++p) {
    const Bus& b = s.power.bus(s.prosumers[p].bus);
    lo[p] = b.p_min_mw / base;
    hi[p] = b.p_max_mw / base;
    bid_pu[p] = bids_mw[p] / base;
  }
  std::vector<double> win_lo = lo, win_hi = hi;
  std::vector<double> q_pu(np, 0.0);

  const int kFirstPoints = 33;  // 32 segments on the first pass
  const int kRefinePoints = 17;
  for (int pass = 0; pass < 8; ++pass) {
    int npts = pass == 0 ? kFirstPoints : kRefinePoints;
    lp::LpModel model;
    FeasibleSetBlock fs = build_feasible_set(model, s.power, s.prosumers, s.options.cone_depth);
    for (size_t p = 0; p < np; ++p) {
      std::vector<std::pair<int, double>> convex, q_link = {{fs.withdraw[p], 1.0}};
      for (int k = 0; k < npts; ++k) {
        double g = win_lo[p] + (win_hi[p] - win_lo[p]) * k / (npts - 1);
        double cost = (g - bid_pu[p]) * (g - bid_pu[p]);
        int w = model.add_var("w_" + std::to_string(p) + "_" + std::to_string(k), 0.0, kInf,
                              cost);
        convex.push_back({w, 1.0});
        q_link.push_back({w, -g});
      }
      model.add_row("conv_" + std::to_string(p), convex, RowSense::Equal, 1.0);
      model.add_row("qdef_" + std::to_string(p), q_link, RowSense::Equal, 0.0);
    }
    lp::LpSolution sol = lp::solve_lp(model);
    if (sol.status != lp::SolveStatus::Optimal) {
      ClearedMarket cm;
      cm.status = sol.status;
      return cm;
    }
    double max_seg = 0.0;
    for (size_t p = 0; p < np; ++p) {
      q_pu[p] = sol.x[fs.withdraw[p]];
      double seg = (win_hi[p] - win_lo[p]) / (npts - 1);
      max_seg = std::max(max_seg, seg);
      double half = 2.0 * seg;
      win_lo[p] = std::max(lo[p], q_pu[p] - half);
      win_hi[p] = std::min(hi[p], q_pu[p] + half);
      if (win_hi[p] - win_lo[p] < 1e-12) {  // window collapsed onto a bound
        win_lo[p] = std::max(lo[p], win_lo[p] - 1e-9);
        win_hi[p] = std::min(hi[p], win_hi[p] + 1e-9);
      }
    }
    if (max_seg <= 1e-8) break;
  }

  ClearedMarket cm;
  cm.status = lp::SolveStatus::Optimal;
  cm.price_usd_per_mwh.resize(np);
  cm.share_mw.resize(np);
  for (size_t p = 0; p < np; ++p) {
    cm.share_mw[p] = q_pu[p] * base;
    cm.price_usd_per_mwh[p] = (bids_mw[p] - cm.share_mw[p]) / s.options.m_a;
  }
  return cm;
}

BestResponse prosumer_best_response(const Prosumer& p, double price_usd_per_mwh,
                                    double charging_mwh, double m_a) {
  BestResponse r;
  double u = p.utility_usd_per_mwh;
  double tie = 1e-9 * std::max(1.0, std::fabs(u));
  if (u > price_usd_per_mwh + tie) r.demand_mw = p.elastic_max_mw;
  else if (u < price_usd_per_mwh - tie) r.demand_mw = p.elastic_min_mw;
  else r.demand_mw = 0.5 * (p.elastic_min_mw + p.elastic_max_mw);
  double share = r.demand_mw + p.fixed_demand_mw + charging_mwh - p.renewable_mw;
  r.bid_mw = share + m_a * price_usd_per_mwh;
  return r;
}

}  // namespace copower::power
