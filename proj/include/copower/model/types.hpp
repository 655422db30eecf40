#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace copower {

// ---------------------------------------------------------------------------
// Power side. Impedances and voltage/current bounds are in per-unit on
// base_mva; demands and generation are in MW and converted when models are
// built. Voltage and current magnitudes are stored squared, matching the
// branch-flow formulation.
// ---------------------------------------------------------------------------

struct Bus {
  std::string id;
  double v_sq_min = 0.94 * 0.94;
  double v_sq_max = 1.06 * 1.06;
  double fixed_p_mw = 0.0;
  double fixed_q_mvar = 0.0;
  // net-withdrawal bounds; only buses that trade (prosumers, slack) use them
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double q_min_mvar = 0.0;
  double q_max_mvar = 0.0;
};

struct Line {
  std::string from;
  std::string to;
  double r_pu = 0.0;
  double x_pu = 0.0;
  double i_sq_max_pu = 1e3;
};

struct PowerNetwork {
  double base_mva = 10.0;
  std::string slack_bus;
  double slack_v_pu = 1.0;
  std::vector<Bus> buses;
  std::vector<Line> lines;

  int bus_index(const std::string& id) const;
  const Bus& bus(const std::string& id) const;
};

struct Prosumer {
  std::string bus;
  double renewable_mw = 0.0;
  double fixed_demand_mw = 0.0;
  double elastic_min_mw = 0.0;
  double elastic_max_mw = 0.0;
  double utility_usd_per_mwh = 0.0;  // linear utility slope
  double q_min_mvar = 0.0;
  double q_max_mvar = 0.0;
};

// ---------------------------------------------------------------------------
// Road side. Flows are in p.u. of flow_base_vph vehicles per hour; times in
// hours. Charging links carry the station they host.
// ---------------------------------------------------------------------------

enum class LinkKind { Regular, Charging, Bypass };
enum class VehicleClass { GV = 0, EV = 1 };

struct TransportLink {
  std::string id;
  int tail = -1;
  int head = -1;
  LinkKind kind = LinkKind::Regular;
  double t0_h = 0.0;
  double cap_pu = 1.0;
  // charging links only
  std::string station;
  double service_h = 0.0;
  double max_wait_h = 0.0;
  double max_ev_pu = 0.0;
};

struct OdPair {
  int origin = -1;
  int dest = -1;
  double gv_rate_pu = 0.0;
  double ev_rate_pu = 0.0;
};

struct TransportNetwork {
  double flow_base_vph = 100.0;
  double omega_usd_per_h = 10.0;  // value of travel time
  double ev_charge_mwh = 0.02;    // energy drawn per charging EV
  std::vector<std::string> nodes;
  std::vector<TransportLink> links;
  std::vector<OdPair> od_pairs;
  bool expanded = false;

  int node_index(const std::string& id) const;
  std::vector<int> charging_links() const;
};

struct Path {
  std::vector<int> links;
  double free_time_h = 0.0;
  int charging_link = -1;  // -1 when the path does not charge

  bool uses(int link) const;
};

// Enumerated path sets per OD pair and vehicle class.
struct PathSet {
  std::vector<std::array<std::vector<Path>, 2>> per_od;

  const std::vector<Path>& paths(int od, VehicleClass c) const {
    return per_od[od][static_cast<int>(c)];
  }
  int total_paths() const;
};

// station id -> prosumer bus id
struct CouplingMap {
  std::map<std::string, std::string> station_bus;

  std::vector<std::string> stations_of(const std::string& bus) const;
  bool empty() const { return station_bus.empty(); }
};

struct SolverOptions {
  int cone_depth = 6;             // polyhedral cone approximation depth Z
  int mccormick_partitions = 10;  // |S|
  double big_m = 1e4;             // fallback when no tighter bound is derivable
  int sos2_breakpoints = 17;
  double gap_tol = 1e-4;
  long node_limit = 200000;
  double m_a = 1.0;               // market sensitivity
  double bid_tol = 1e-4;
  int bid_max_iter = 200;
  double bid_damping = 1.0;       // 1 = pure best response
  double fw_rel_gap = 1e-7;
  int fw_max_iter = 5000;
  int max_paths = 50;
  int refine_passes = 3;
  bool ev_must_charge = true;     // EV paths visit exactly one charging link
  unsigned seed = 0;
  // per-bus charging demand override for sharing-only studies (MWh)
  std::map<std::string, double> fixed_charging_demand_mwh;
};

struct Scenario {
  std::string name;
  PowerNetwork power;
  std::vector<Prosumer> prosumers;
  TransportNetwork transport;
  CouplingMap coupling;
  SolverOptions options;

  const Prosumer* prosumer_at(const std::string& bus) const;
  int prosumer_index(const std::string& bus) const;
};

// Throws ValidationError naming the entity when an invariant is violated.
void validate_scenario(const Scenario& s);

}  // namespace copower
