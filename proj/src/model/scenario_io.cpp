#include "copower/model/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "copower/model/errors.hpp"
#include "json.hpp"

namespace copower {

using nlohmann::json;

namespace {

double num(const json& j, const std::string& key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ParseError("field '" + key + "' must be a number");
  return j[key].get<double>();
}

double req_num(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
  if (!j[key].is_number()) throw ParseError(ctx + ": field '" + key + "' must be a number");
  return j[key].get<double>();
}

std::string req_str(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
  if (!j[key].is_string()) throw ParseError(ctx + ": field '" + key + "' must be a string");
  return j[key].get<std::string>();
}

LinkKind parse_kind(const std::string& k, const std::string& ctx) {
  if (k == "regular") return LinkKind::Regular;
  if (k == "charging") return LinkKind::Charging;
  if (k == "bypass") return LinkKind::Bypass;
  throw ParseError(ctx + ": unknown link kind '" + k + "'");
}

const char* kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Regular: return "regular";
    case LinkKind::Charging: return "charging";
    case LinkKind::Bypass: return "bypass";
  }
  return "?";
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("scenario root must be an object");

  Scenario s;
  s.name = root.value("name", std::string{});

  if (!root.contains("power")) throw ParseError("missing 'power' section");
  const json& pw = root["power"];
  s.power.base_mva = num(pw, "base_mva", 10.0);
  s.power.slack_bus = req_str(pw, "slack_bus", "power");
  s.power.slack_v_pu = num(pw, "slack_v_pu", 1.0);
  for (const json& jb : pw.value("buses", json::array())) {
    Bus b;
    b.id = req_str(jb, "id", "bus");
    double vmin = num(jb, "v_min_pu", 0.94);
    double vmax = num(jb, "v_max_pu", 1.06);
    b.v_sq_min = vmin * vmin;
    b.v_sq_max = vmax * vmax;
    b.fixed_p_mw = num(jb, "fixed_p_mw", 0.0);
    b.fixed_q_mvar = num(jb, "fixed_q_mvar", 0.0);
    b.p_min_mw = num(jb, "p_min_mw", 0.0);
    b.p_max_mw = num(jb, "p_max_mw", 0.0);
    b.q_min_mvar = num(jb, "q_min_mvar", 0.0);
    b.q_max_mvar = num(jb, "q_max_mvar", 0.0);
    s.power.buses.push_back(std::move(b));
  }
  for (const json& jl : pw.value("lines", json::array())) {
    Line l;
    l.from = req_str(jl, "from", "line");
    l.to = req_str(jl, "to", "line");
    l.r_pu = req_num(jl, "r_pu", "line " + l.from + "-" + l.to);
    l.x_pu = req_num(jl, "x_pu", "line " + l.from + "-" + l.to);
    l.i_sq_max_pu = num(jl, "i_sq_max_pu", 1e3);
    s.power.lines.push_back(std::move(l));
  }

  for (const json& jp : root.value("prosumers", json::array())) {
    Prosumer p;
    p.bus = req_str(jp, "bus", "prosumer");
    p.renewable_mw = req_num(jp, "renewable_mw", "prosumer " + p.bus);
    p.fixed_demand_mw = num(jp, "fixed_demand_mw", 0.0);
    p.elastic_min_mw = num(jp, "elastic_min_mw", 0.0);
    p.elastic_max_mw = num(jp, "elastic_max_mw", 0.0);
    p.utility_usd_per_mwh = req_num(jp, "utility_usd_per_mwh", "prosumer " + p.bus);
    p.q_min_mvar = num(jp, "q_min_mvar", 0.0);
    p.q_max_mvar = num(jp, "q_max_mvar", 0.0);
    s.prosumers.push_back(std::move(p));
  }

  if (root.contains("transport")) {
    const json& tr = root["transport"];
    TransportNetwork& t = s.transport;
    t.flow_base_vph = num(tr, "flow_base_vph", 100.0);
    t.omega_usd_per_h = num(tr, "time_value_usd_per_hour", 10.0);
    t.ev_charge_mwh = num(tr, "ev_charge_mwh", 0.02);
    t.expanded = tr.value("expanded", false);
    for (const json& jn : tr.value("nodes", json::array())) {
      if (!jn.is_string()) throw ParseError("road nodes must be strings");
      t.nodes.push_back(jn.get<std::string>());
    }
    for (const json& jl : tr.value("links", json::array())) {
      TransportLink l;
      l.id = req_str(jl, "id", "link");
      std::string from = req_str(jl, "from", "link " + l.id);
      std::string to = req_str(jl, "to", "link " + l.id);
      l.tail = t.node_index(from);
      l.head = t.node_index(to);
      if (l.tail < 0) throw ParseError("link '" + l.id + "': unknown node '" + from + "'");
      if (l.head < 0) throw ParseError("link '" + l.id + "': unknown node '" + to + "'");
      l.kind = parse_kind(jl.value("kind", std::string("regular")), "link " + l.id);
      l.t0_h = num(jl, "t0_hours", 0.0);
      l.cap_pu = num(jl, "capacity_pu", 1.0);
      if (l.kind == LinkKind::Charging) {
        l.station = req_str(jl, "station", "link " + l.id);
        l.service_h = num(jl, "service_hours", 0.0);
        l.max_wait_h = num(jl, "max_wait_hours", 0.0);
        l.max_ev_pu = req_num(jl, "max_ev_flow_pu", "link " + l.id);
      }
      t.links.push_back(std::move(l));
    }
    for (const json& jo : tr.value("od_pairs", json::array())) {
      OdPair od;
      std::string o = req_str(jo, "origin", "od pair");
      std::string d = req_str(jo, "destination", "od pair");
      od.origin = t.node_index(o);
      od.dest = t.node_index(d);
      if (od.origin < 0) throw ParseError("od pair: unknown origin '" + o + "'");
      if (od.dest < 0) throw ParseError("od pair: unknown destination '" + d + "'");
      od.gv_rate_pu = num(jo, "gv_rate_pu", 0.0);
      od.ev_rate_pu = num(jo, "ev_rate_pu", 0.0);
      t.od_pairs.push_back(od);
    }
  }

  if (root.contains("coupling")) {
    if (!root["coupling"].is_object()) throw ParseError("'coupling' must be an object");
    for (auto& [cs, bus] : root["coupling"].items()) {
      if (!bus.is_string()) throw ParseError("coupling for '" + cs + "' must name a bus");
      s.coupling.station_bus[cs] = bus.get<std::string>();
    }
  }

  if (root.contains("options")) {
    const json& jo = root["options"];
    SolverOptions& o = s.options;
    o.cone_depth = static_cast<int>(num(jo, "cone_depth", o.cone_depth));
    o.mccormick_partitions =
        static_cast<int>(num(jo, "mccormick_partitions", o.mccormick_partitions));
    o.big_m = num(jo, "big_m", o.big_m);
    o.sos2_breakpoints = static_cast<int>(num(jo, "sos2_breakpoints", o.sos2_breakpoints));
    o.gap_tol = num(jo, "gap_tol", o.gap_tol);
    o.node_limit = static_cast<long>(num(jo, "node_limit", static_cast<double>(o.node_limit)));
    o.m_a = num(jo, "m_a", o.m_a);
    o.bid_tol = num(jo, "bid_tol", o.bid_tol);
    o.bid_max_iter = static_cast<int>(num(jo, "bid_max_iter", o.bid_max_iter));
    o.bid_damping = num(jo, "bid_damping", o.bid_damping);
    o.fw_rel_gap = num(jo, "fw_rel_gap", o.fw_rel_gap);
    o.fw_max_iter = static_cast<int>(num(jo, "fw_max_iter", o.fw_max_iter));
    o.max_paths = static_cast<int>(num(jo, "max_paths", o.max_paths));
    o.refine_passes = static_cast<int>(num(jo, "refine_passes", o.refine_passes));
    if (jo.contains("ev_must_charge")) o.ev_must_charge = jo["ev_must_charge"].get<bool>();
    o.seed = static_cast<unsigned>(num(jo, "seed", o.seed));
    if (jo.contains("fixed_charging_demand_mwh")) {
      for (auto& [bus, d] : jo["fixed_charging_demand_mwh"].items())
        o.fixed_charging_demand_mwh[bus] = d.get<double>();
    }
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json root;
  root["name"] = s.name;

  json pw;
  pw["base_mva"] = s.power.base_mva;
  pw["slack_bus"] = s.power.slack_bus;
  pw["slack_v_pu"] = s.power.slack_v_pu;
  pw["buses"] = json::array();
  for (auto& b : s.power.buses) {
    json jb;
    jb["id"] = b.id;
    jb["v_min_pu"] = std::sqrt(b.v_sq_min);
    jb["v_max_pu"] = std::sqrt(b.v_sq_max);
    jb["fixed_p_mw"] = b.fixed_p_mw;
    jb["fixed_q_mvar"] = b.fixed_q_mvar;
    jb["p_min_mw"] = b.p_min_mw;
    jb["p_max_mw"] = b.p_max_mw;
    jb["q_min_mvar"] = b.q_min_mvar;
    jb["q_max_mvar"] = b.q_max_mvar;
    pw["buses"].push_back(jb);
  }
  pw["lines"] = json::array();
  for (auto& l : s.power.lines) {
    json jl;
    jl["from"] = l.from;
    jl["to"] = l.to;
    jl["r_pu"] = l.r_pu;
    jl["x_pu"] = l.x_pu;
    jl["i_sq_max_pu"] = l.i_sq_max_pu;
    pw["lines"].push_back(jl);
  }
  root["power"] = pw;

  root["prosumers"] = json::array();
  for (auto& p : s.prosumers) {
    json jp;
    jp["bus"] = p.bus;
    jp["renewable_mw"] = p.renewable_mw;
    jp["fixed_demand_mw"] = p.fixed_demand_mw;
    jp["elastic_min_mw"] = p.elastic_min_mw;
    jp["elastic_max_mw"] = p.elastic_max_mw;
    jp["utility_usd_per_mwh"] = p.utility_usd_per_mwh;
    jp["q_min_mvar"] = p.q_min_mvar;
    jp["q_max_mvar"] = p.q_max_mvar;
    root["prosumers"].push_back(jp);
  }

  json tr;
  tr["flow_base_vph"] = s.transport.flow_base_vph;
  tr["time_value_usd_per_hour"] = s.transport.omega_usd_per_h;
  tr["ev_charge_mwh"] = s.transport.ev_charge_mwh;
  tr["expanded"] = s.transport.expanded;
  tr["nodes"] = s.transport.nodes;
  tr["links"] = json::array();
  for (auto& l : s.transport.links) {
    json jl;
    jl["id"] = l.id;
    jl["from"] = s.transport.nodes[l.tail];
    jl["to"] = s.transport.nodes[l.head];
    jl["kind"] = kind_name(l.kind);
    jl["t0_hours"] = l.t0_h;
    jl["capacity_pu"] = l.cap_pu;
    if (l.kind == LinkKind::Charging) {
      jl["station"] = l.station;
      jl["service_hours"] = l.service_h;
      jl["max_wait_hours"] = l.max_wait_h;
      jl["max_ev_flow_pu"] = l.max_ev_pu;
    }
    tr["links"].push_back(jl);
  }
  tr["od_pairs"] = json::array();
  for (auto& od : s.transport.od_pairs) {
    json jo;
    jo["origin"] = s.transport.nodes[od.origin];
    jo["destination"] = s.transport.nodes[od.dest];
    jo["gv_rate_pu"] = od.gv_rate_pu;
    jo["ev_rate_pu"] = od.ev_rate_pu;
    tr["od_pairs"].push_back(jo);
  }
  root["transport"] = tr;

  root["coupling"] = json::object();
  for (auto& [cs, bus] : s.coupling.station_bus) root["coupling"][cs] = bus;

  json jo;
  const SolverOptions& o = s.options;
  jo["cone_depth"] = o.cone_depth;
  jo["mccormick_partitions"] = o.mccormick_partitions;
  jo["big_m"] = o.big_m;
  jo["sos2_breakpoints"] = o.sos2_breakpoints;
  jo["gap_tol"] = o.gap_tol;
  jo["node_limit"] = o.node_limit;
  jo["m_a"] = o.m_a;
  jo["bid_tol"] = o.bid_tol;
  jo["bid_max_iter"] = o.bid_max_iter;
  jo["bid_damping"] = o.bid_damping;
  jo["fw_rel_gap"] = o.fw_rel_gap;
  jo["fw_max_iter"] = o.fw_max_iter;
  jo["max_paths"] = o.max_paths;
  jo["refine_passes"] = o.refine_passes;
  jo["ev_must_charge"] = o.ev_must_charge;
  jo["seed"] = o.seed;
  if (!o.fixed_charging_demand_mwh.empty()) {
    json fd;
    for (auto& [bus, d] : o.fixed_charging_demand_mwh) fd[bus] = d;
    jo["fixed_charging_demand_mwh"] = fd;
  }
  root["options"] = jo;

  return root.dump(2) + "\n";
}

bool scenarios_equal(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace copower
