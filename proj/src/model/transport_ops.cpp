#include "copower/model/transport_ops.hpp"

#include <algorithm>
#include <functional>

#include "copower/model/errors.hpp"

namespace copower {

TransportNetwork expand_bypass_links(const TransportNetwork& net) {
  for (auto& l : net.links)
    if (l.kind == LinkKind::Bypass)
      throw ValidationError("network already contains bypass link '" + l.id + "'");

  TransportNetwork out = net;
  out.links.clear();
  for (const TransportLink& l : net.links) {
    if (l.kind != LinkKind::Charging) {
      out.links.push_back(l);
      continue;
    }
    int in_node = static_cast<int>(out.nodes.size());
    out.nodes.push_back(l.station + ":in");
    int out_node = static_cast<int>(out.nodes.size());
    out.nodes.push_back(l.station + ":out");

    TransportLink approach;
    approach.id = l.id + ":a";
    approach.tail = l.tail;
    approach.head = in_node;
    approach.kind = LinkKind::Regular;
    approach.t0_h = l.t0_h;  // keeps the non-charging route time
    approach.cap_pu = l.cap_pu;
    out.links.push_back(approach);

    TransportLink charge = l;
    charge.id = l.id + ":c";
    charge.tail = in_node;
    charge.head = out_node;
    charge.t0_h = 0.0;
    out.links.push_back(charge);

    TransportLink bypass;
    bypass.id = l.id + ":b";
    bypass.tail = in_node;
    bypass.head = out_node;
    bypass.kind = LinkKind::Bypass;
    bypass.t0_h = 0.0;
    bypass.cap_pu = l.cap_pu;
    out.links.push_back(bypass);

    TransportLink exit;
    exit.id = l.id + ":x";
    exit.tail = out_node;
    exit.head = l.head;
    exit.kind = LinkKind::Regular;
    exit.t0_h = 0.0;
    exit.cap_pu = l.cap_pu;
    out.links.push_back(exit);
  }
  out.expanded = true;
  return out;
}

namespace {

double free_time(const TransportLink& l) {
  switch (l.kind) {
    case LinkKind::Regular: return l.t0_h;
    case LinkKind::Charging: return l.service_h;
    case LinkKind::Bypass: return 0.0;
  }
  return 0.0;
}

}  // namespace

std::vector<Path> enumerate_paths(const TransportNetwork& net, const OdPair& od,
                                  VehicleClass cls, int max_paths, bool ev_must_charge) {
  if (od.origin < 0 || od.origin >= static_cast<int>(net.nodes.size()) || od.dest < 0 ||
      od.dest >= static_cast<int>(net.nodes.size()))
    throw ValidationError("od pair endpoint out of range");

  std::vector<std::vector<int>> outgoing(net.nodes.size());
  for (size_t a = 0; a < net.links.size(); ++a)
    outgoing[net.links[a].tail].push_back(static_cast<int>(a));

  const bool is_ev = cls == VehicleClass::EV;
  const long hard_cap = std::max(2000L, 40L * max_paths);

  std::vector<Path> found;
  std::vector<char> visited(net.nodes.size(), 0);
  std::vector<int> stack;
  int charges = 0;

  std::function<void(int)> dfs = [&](int node) {
    if (static_cast<long>(found.size()) >= hard_cap) return;
    if (node == od.dest) {
      if (is_ev && ev_must_charge && charges != 1) return;
      Path p;
      p.links = stack;
      for (int a : stack) {
        p.free_time_h += free_time(net.links[a]);
        if (net.links[a].kind == LinkKind::Charging) p.charging_link = a;
      }
      found.push_back(std::move(p));
      return;
    }
    visited[node] = 1;
    for (int a : outgoing[node]) {
      const TransportLink& l = net.links[a];
      if (visited[l.head]) continue;
      if (l.kind == LinkKind::Charging) {
        if (!is_ev) continue;  // GVs always use the bypass
        if (ev_must_charge && charges >= 1) continue;
        ++charges;
        stack.push_back(a);
        dfs(l.head);
        stack.pop_back();
        --charges;
      } else {
        stack.push_back(a);
        dfs(l.head);
        stack.pop_back();
      }
    }
    visited[node] = 0;
  };
  dfs(od.origin);

  if (found.empty())
    throw SolveError("no " + std::string(is_ev ? "EV" : "GV") + " path from '" +
                     net.nodes[od.origin] + "' to '" + net.nodes[od.dest] + "'");

  std::stable_sort(found.begin(), found.end(), [&](const Path& a, const Path& b) {
    if (a.free_time_h != b.free_time_h) return a.free_time_h < b.free_time_h;
    return a.links < b.links;
  });
  if (static_cast<int>(found.size()) > max_paths) found.resize(max_paths);
  return found;
}

PathSet build_path_sets(const TransportNetwork& net, int max_paths, bool ev_must_charge) {
  PathSet ps;
  ps.per_od.resize(net.od_pairs.size());
  for (size_t k = 0; k < net.od_pairs.size(); ++k) {
    const OdPair& od = net.od_pairs[k];
    if (od.gv_rate_pu > 0)
      ps.per_od[k][0] = enumerate_paths(net, od, VehicleClass::GV, max_paths, ev_must_charge);
    if (od.ev_rate_pu > 0)
      ps.per_od[k][1] = enumerate_paths(net, od, VehicleClass::EV, max_paths, ev_must_charge);
  }
  return ps;
}

std::map<std::string, double> charging_demand(const std::vector<double>& link_flow_pu,
                                              const TransportNetwork& net,
                                              const CouplingMap& coupling) {
  std::map<std::string, double> demand;
  for (auto& [cs, bus] : coupling.station_bus) demand[bus] += 0.0;
  for (size_t a = 0; a < net.links.size(); ++a) {
    const TransportLink& l = net.links[a];
    if (l.kind != LinkKind::Charging) continue;
    auto it = coupling.station_bus.find(l.station);
    if (it == coupling.station_bus.end()) continue;
    double flow = a < link_flow_pu.size() ? link_flow_pu[a] : 0.0;
    demand[it->second] += flow * net.flow_base_vph * net.ev_charge_mwh;
  }
  return demand;
}

}  // namespace copower
