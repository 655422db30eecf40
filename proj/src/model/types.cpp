#include "copower/model/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "copower/model/errors.hpp"

namespace copower {

int PowerNetwork::bus_index(const std::string& id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

const Bus& PowerNetwork::bus(const std::string& id) const {
  int i = bus_index(id);
  if (i < 0) throw ValidationError("unknown bus '" + id + "'");
  return buses[i];
}

int TransportNetwork::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == id) return static_cast<int>(i);
  return -1;
}

std::vector<int> TransportNetwork::charging_links() const {
  std::vector<int> out;
  for (size_t a = 0; a < links.size(); ++a)
    if (links[a].kind == LinkKind::Charging) out.push_back(static_cast<int>(a));
  return out;
}

bool Path::uses(int link) const {
  return std::find(links.begin(), links.end(), link) != links.end();
}

int PathSet::total_paths() const {
  int n = 0;
  for (auto& od : per_od) n += static_cast<int>(od[0].size() + od[1].size());
  return n;
}

std::vector<std::string> CouplingMap::stations_of(const std::string& bus) const {
  std::vector<std::string> out;
  for (auto& [cs, b] : station_bus)
    if (b == bus) out.push_back(cs);
  return out;
}

const Prosumer* Scenario::prosumer_at(const std::string& bus) const {
  for (auto& p : prosumers)
    if (p.bus == bus) return &p;
  return nullptr;
}

int Scenario::prosumer_index(const std::string& bus) const {
  for (size_t i = 0; i < prosumers.size(); ++i)
    if (prosumers[i].bus == bus) return static_cast<int>(i);
  return -1;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void validate_power(const PowerNetwork& net) {
  require(!net.buses.empty(), "power network has no buses");
  std::set<std::string> ids;
  for (auto& b : net.buses) {
    require(ids.insert(b.id).second, "duplicate bus id '" + b.id + "'");
    require(std::isfinite(b.v_sq_min) && std::isfinite(b.v_sq_max),
            "bus '" + b.id + "': voltage bounds must be finite");
    require(b.v_sq_min > 0 && b.v_sq_min < b.v_sq_max,
            "bus '" + b.id + "': need 0 < v_min < v_max");
    require(b.p_min_mw <= b.p_max_mw, "bus '" + b.id + "': p bounds out of order");
    require(b.q_min_mvar <= b.q_max_mvar, "bus '" + b.id + "': q bounds out of order");
    require(std::isfinite(b.fixed_p_mw) && std::isfinite(b.fixed_q_mvar),
            "bus '" + b.id + "': fixed demand must be finite");
  }
  require(net.bus_index(net.slack_bus) >= 0,
          "slack bus '" + net.slack_bus + "' is not a bus");
  require(net.base_mva > 0, "base_mva must be positive");

  require(net.lines.size() + 1 == net.buses.size(),
          "network is not radial: need exactly (buses - 1) lines");
  std::vector<std::vector<int>> adj(net.buses.size());
  for (auto& l : net.lines) {
    int f = net.bus_index(l.from), t = net.bus_index(l.to);
    require(f >= 0, "line " + l.from + "-" + l.to + ": unknown bus '" + l.from + "'");
    require(t >= 0, "line " + l.from + "-" + l.to + ": unknown bus '" + l.to + "'");
    require(l.r_pu >= 0 && l.x_pu >= 0,
            "line " + l.from + "-" + l.to + ": impedance must be nonnegative");
    require(l.i_sq_max_pu > 0, "line " + l.from + "-" + l.to + ": current cap must be positive");
    adj[f].push_back(t);
    adj[t].push_back(f);
  }
  // connectivity (with the line-count check above this certifies a tree)
  std::vector<char> seen(net.buses.size(), 0);
  std::vector<int> stack = {net.bus_index(net.slack_bus)};
  seen[stack[0]] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  for (size_t i = 0; i < net.buses.size(); ++i)
    require(seen[i], "network is not connected: bus '" + net.buses[i].id + "' unreachable");
}

void validate_transport(const TransportNetwork& net) {
  std::set<std::string> ids;
  for (auto& n : net.nodes) require(ids.insert(n).second, "duplicate road node '" + n + "'");
  require(net.flow_base_vph > 0, "flow base must be positive");
  require(net.ev_charge_mwh >= 0, "per-EV charge must be nonnegative");
  std::set<std::string> link_ids, stations;
  for (auto& l : net.links) {
    require(link_ids.insert(l.id).second, "duplicate link id '" + l.id + "'");
    require(l.tail >= 0 && l.tail < static_cast<int>(net.nodes.size()) && l.head >= 0 &&
                l.head < static_cast<int>(net.nodes.size()),
            "link '" + l.id + "': endpoint out of range");
    require(l.t0_h >= 0, "link '" + l.id + "': free time must be nonnegative");
    require(l.cap_pu > 0, "link '" + l.id + "': capacity must be positive");
    if (l.kind == LinkKind::Charging) {
      require(!l.station.empty(), "charging link '" + l.id + "' has no station id");
      require(stations.insert(l.station).second,
              "station '" + l.station + "' appears on more than one link");
      require(l.max_ev_pu > 0, "charging link '" + l.id + "': max EV flow must be positive");
      require(l.service_h >= 0 && l.max_wait_h >= 0,
              "charging link '" + l.id + "': service/wait times must be nonnegative");
    }
  }
  if (net.expanded) {
    for (auto& l : net.links) {
      if (l.kind != LinkKind::Charging) continue;
      bool has_bypass = false;
      for (auto& b : net.links)
        if (b.kind == LinkKind::Bypass && b.tail == l.tail && b.head == l.head) has_bypass = true;
      require(has_bypass, "charging link '" + l.id + "' lacks a parallel bypass link");
    }
  }
  for (auto& od : net.od_pairs) {
    require(od.origin >= 0 && od.origin < static_cast<int>(net.nodes.size()),
            "od pair references unknown origin");
    require(od.dest >= 0 && od.dest < static_cast<int>(net.nodes.size()),
            "od pair references unknown destination");
    require(od.gv_rate_pu >= 0 && od.ev_rate_pu >= 0, "od rates must be nonnegative");
  }
}

}  // namespace

void validate_scenario(const Scenario& s) {
  validate_power(s.power);

  std::set<std::string> prosumer_buses;
  for (auto& p : s.prosumers) {
    require(s.power.bus_index(p.bus) >= 0, "prosumer bus '" + p.bus + "' is not a bus");
    require(prosumer_buses.insert(p.bus).second,
            "more than one prosumer at bus '" + p.bus + "'");
    require(p.elastic_min_mw <= p.elastic_max_mw,
            "prosumer at '" + p.bus + "': elastic bounds out of order");
    require(p.renewable_mw >= 0, "prosumer at '" + p.bus + "': renewable output negative");
    require(p.fixed_demand_mw >= 0, "prosumer at '" + p.bus + "': fixed demand negative");
    require(p.utility_usd_per_mwh > 0, "prosumer at '" + p.bus + "': utility slope must be positive");
    require(p.q_min_mvar <= p.q_max_mvar, "prosumer at '" + p.bus + "': reactive bounds out of order");
  }

  validate_transport(s.transport);

  std::set<std::string> stations;
  for (auto& l : s.transport.links)
    if (l.kind == LinkKind::Charging) stations.insert(l.station);
  for (auto& cs : stations)
    require(s.coupling.station_bus.count(cs),
            "station '" + cs + "' is not mapped to a prosumer");
  for (auto& [cs, bus] : s.coupling.station_bus) {
    require(stations.count(cs), "coupling references unknown station '" + cs + "'");
    require(s.prosumer_at(bus) != nullptr,
            "station '" + cs + "' mapped to '" + bus + "' which is not a prosumer bus");
  }

  const SolverOptions& o = s.options;
  require(o.cone_depth >= 1, "options: cone depth must be >= 1");
  require(o.mccormick_partitions >= 1, "options: partition count must be >= 1");
  require(o.big_m > 0, "options: big-M must be positive");
  require(o.sos2_breakpoints >= 3, "options: need at least 3 SOS2 breakpoints");
  require(o.m_a > 0, "options: market sensitivity must be positive");
  for (auto& [bus, d] : o.fixed_charging_demand_mwh) {
    require(s.prosumer_at(bus) != nullptr,
            "fixed charging demand names non-prosumer bus '" + bus + "'");
    require(d >= 0, "fixed charging demand at '" + bus + "' is negative");
  }
}

}  // namespace copower
