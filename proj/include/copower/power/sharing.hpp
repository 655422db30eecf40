#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "copower/lp/milp.hpp"
#include "copower/lp/model.hpp"
#include "copower/lp/simplex.hpp"
#include "copower/model/types.hpp"

namespace copower::power {

// Relative error bound of the depth-Z polyhedral cone approximation.
double cone_epsilon(int depth);

// One second-order cone sqrt(x1^2 + x2^2) <= x3 over linear expressions.
struct ConeTriple {
  std::string name;
  std::vector<std::pair<int, double>> x1, x2, x3;
};

struct ConeHandles {
  std::vector<int> rows;
  int xi_last = -1;
};

// Polyhedral approximation: auxiliary (xi, eta) ladder of depth Z with the
// rotation recursion; admits points up to (1 + cone_epsilon(Z)) outside.
ConeHandles approximate_soc(lp::LpModel& model, const ConeTriple& cone, int depth);

struct FeasibleSetBlock {
  std::vector<int> withdraw;       // q_i per prosumer (p.u.)
  int slack_withdraw = -1;
  std::vector<int> reactive;       // prosumer reactive injection (p.u.)
  int slack_reactive = -1;
  std::vector<int> line_p, line_q, line_isq, line_w;
  std::vector<int> bus_vsq;        // per bus
  std::vector<int> active_rows;    // per line, child-bus active balance
  std::vector<int> reactive_rows;  // per line
  std::vector<int> volt_rows;      // per line
  int root_active_row = -1;
  int root_reactive_row = -1;
  std::vector<ConeTriple> cones;   // two per line, in line order
  std::vector<ConeHandles> cone_rows;
};

// Branch-flow feasible set: balances, voltage drops, bounds and the two-cone
// split per line, approximated at cone_depth. Throws on non-radial input.
FeasibleSetBlock build_feasible_set(lp::LpModel& model, const PowerNetwork& net,
                                    const std::vector<Prosumer>& prosumers,
                                    int cone_depth);

struct SharingSkeleton {
  lp::LpModel model;
  FeasibleSetBlock fs;
  std::vector<int> demand;            // d_i per prosumer (p.u.)
  std::vector<int> balance_rows;      // per prosumer
  std::vector<double> balance_const;  // (fixed - renewable)/base per prosumer
  double base_mva = 1.0;
};

// Sharing problem skeleton: feasible set + per-prosumer balance rows +
// utility objective. Prosumers in `self_sufficient` get q_i pinned to 0.
SharingSkeleton build_sharing_skeleton(const Scenario& s, int cone_depth,
                                       const std::set<std::string>& self_sufficient = {});

struct MarketOutcome {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  std::vector<double> price_usd_per_mwh;  // per prosumer
  std::vector<double> bid_mw;
  std::vector<double> share_mw;           // q_i
  std::vector<double> demand_mw;          // d_i
  std::vector<double> charging_mwh;       // D_i used in the solve
  double utility_usd = 0.0;
  double import_mw = 0.0;
  std::vector<double> line_p_pu, line_q_pu, line_isq_pu, bus_vsq_pu;
  std::vector<double> cone_residual_pu;   // signed, per line
};

// Prop.-1 route: minimize -sum U_i(d_i) over the feasible set; prices are the
// duals of the prosumer balance rows.
MarketOutcome solve_centralized_sharing(const Scenario& s,
                                        const std::map<std::string, double>& charging_mwh,
                                        const std::set<std::string>& self_sufficient = {});

struct ClearedMarket {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  std::vector<double> price_usd_per_mwh;
  std::vector<double> share_mw;  // cleared q_i
};

// Operator update: projects the bid vector onto the feasible set
// (min sum (q_i - b_i)^2) via adaptively refined piecewise-linear LPs;
// prices recover from the generalized demand function.
ClearedMarket clear_market(const std::vector<double>& bids_mw, const Scenario& s);

struct BestResponse {
  double bid_mw = 0.0;
  double demand_mw = 0.0;
};

// Linear utility: consume the ceiling when the slope beats the price, the
// floor when it does not, window midpoint at indifference.
BestResponse prosumer_best_response(const Prosumer& p, double price_usd_per_mwh,
                                    double charging_mwh, double m_a);

// Charging demand per prosumer for a sharing-only solve: the scenario's
// fixed_charging_demand_mwh entries (zero when absent).
std::map<std::string, double> fixed_charging_demand(const Scenario& s);

}  // namespace copower::power
