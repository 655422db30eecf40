#include <set>

#include "copower/model/errors.hpp"
#include "copower/model/scenario_io.hpp"
#include "copower/model/transport_ops.hpp"
#include "copower/model/types.hpp"
#include "doctest.h"

using namespace copower;

namespace {

std::string data_file(const std::string& name) {
  return std::string(COPOWER_DATA_DIR) + "/" + name;
}

// minimal 2-bus, 1-prosumer scenario with a 2-node road net and no stations
std::string minimal_json() {
  return R"({
    "name": "minimal",
    "power": {
      "base_mva": 1.0, "slack_bus": "a",
      "buses": [
        {"id": "a", "p_min_mw": -5, "p_max_mw": 0, "q_min_mvar": -1, "q_max_mvar": 1},
        {"id": "b", "p_min_mw": -2, "p_max_mw": 3, "q_min_mvar": -1, "q_max_mvar": 1}
      ],
      "lines": [{"from": "a", "to": "b", "r_pu": 0.01, "x_pu": 0.01}]
    },
    "prosumers": [
      {"bus": "b", "renewable_mw": 1.0, "fixed_demand_mw": 0.1,
       "elastic_min_mw": 0, "elastic_max_mw": 1, "utility_usd_per_mwh": 50}
    ],
    "transport": {
      "nodes": ["r", "s"],
      "links": [{"id": "L1", "from": "r", "to": "s", "kind": "regular",
                 "t0_hours": 0.1, "capacity_pu": 2.0}],
      "od_pairs": [{"origin": "r", "destination": "s", "gv_rate_pu": 1.0, "ev_rate_pu": 0.0}]
    },
    "coupling": {},
    "options": {}
  })";
}

TransportNetwork corridor_with_station() {
  TransportNetwork net;
  net.nodes = {"u", "v"};
  TransportLink l;
  l.id = "E1";
  l.tail = 0;
  l.head = 1;
  l.kind = LinkKind::Charging;
  l.t0_h = 0.2;
  l.cap_pu = 2.0;
  l.station = "CS1";
  l.service_h = 0.3;
  l.max_wait_h = 0.1;
  l.max_ev_pu = 1.5;
  net.links.push_back(l);
  net.od_pairs.push_back({0, 1, 1.0, 0.5});
  return net;
}

}  // namespace

TEST_CASE("bundled 33-bus scenario loads with expected shape") {
  Scenario s = load_scenario(data_file("ieee33-4p.json"));
  CHECK(s.power.buses.size() == 33);
  CHECK(s.power.lines.size() == 32);
  REQUIRE(s.prosumers.size() == 4);
  CHECK(s.prosumers[0].bus == "b10");
  CHECK(s.prosumers[1].bus == "b18");
  CHECK(s.prosumers[2].bus == "b23");
  CHECK(s.prosumers[3].bus == "b30");
  CHECK(s.prosumers[0].renewable_mw == doctest::Approx(3.0));
  CHECK(s.prosumers[1].renewable_mw == doctest::Approx(1.0));
  CHECK(s.prosumers[2].renewable_mw == doctest::Approx(4.0));
  CHECK(s.prosumers[3].renewable_mw == doctest::Approx(2.0));
  CHECK(s.prosumers[0].fixed_demand_mw == doctest::Approx(0.10));
  CHECK(s.prosumers[1].fixed_demand_mw == doctest::Approx(0.20));
  CHECK(s.prosumers[2].fixed_demand_mw == doctest::Approx(0.15));
  CHECK(s.prosumers[3].fixed_demand_mw == doctest::Approx(0.10));
  for (auto& b : s.power.buses) {
    CHECK(b.v_sq_min == doctest::Approx(0.94 * 0.94));
    CHECK(b.v_sq_max == doctest::Approx(1.06 * 1.06));
  }
  CHECK(s.transport.nodes.size() == 12);
  CHECK(s.transport.links.size() == 20);
  CHECK(s.transport.charging_links().size() == 8);
}

TEST_CASE("station mapped to unknown bus is a validation error") {
  Scenario s = load_scenario(data_file("ieee33-4p.json"));
  s.coupling.station_bus["CS1"] = "b99";
  CHECK_THROWS_WITH_AS(validate_scenario(s),
                       doctest::Contains("CS1"), ValidationError);
}

TEST_CASE("minimal scenario with empty coupling is accepted") {
  Scenario s = parse_scenario(minimal_json());
  CHECK(s.power.buses.size() == 2);
  CHECK(s.prosumers.size() == 1);
  CHECK(s.coupling.empty());
}

TEST_CASE("malformed json is a parse error") {
  CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"power": {}})"), ParseError);
}

TEST_CASE("scenario round-trips through serialization") {
  Scenario s = load_scenario(data_file("ieee33-4p.json"));
  Scenario t = parse_scenario(serialize_scenario(s));
  CHECK(scenarios_equal(s, t));

  Scenario m = parse_scenario(minimal_json());
  CHECK(scenarios_equal(m, parse_scenario(serialize_scenario(m))));
}

TEST_CASE("bypass expansion adds two nodes and three links per station") {
  Scenario s = load_scenario(data_file("ieee33-4p.json"));
  TransportNetwork x = expand_bypass_links(s.transport);
  CHECK(x.nodes.size() == 28);
  CHECK(x.links.size() == 44);
  CHECK(x.expanded);
  validate_scenario([&] {  // expanded net still passes structural validation
    Scenario c = s;
    c.transport = x;
    return c;
  }());

  int stations = static_cast<int>(s.transport.charging_links().size());
  CHECK(static_cast<int>(x.nodes.size() - s.transport.nodes.size()) == 2 * stations);
  CHECK(static_cast<int>(x.links.size() - s.transport.links.size()) == 3 * stations);
}

TEST_CASE("expansion of a station-free network is the identity") {
  Scenario s = parse_scenario(minimal_json());
  TransportNetwork x = expand_bypass_links(s.transport);
  CHECK(x.nodes == s.transport.nodes);
  CHECK(x.links.size() == s.transport.links.size());
}

TEST_CASE("single corridor expands to 4 nodes and 4 links") {
  TransportNetwork net = corridor_with_station();
  TransportNetwork x = expand_bypass_links(net);
  CHECK(x.nodes.size() == 4);
  CHECK(x.links.size() == 4);
  CHECK_THROWS_AS(expand_bypass_links(x), ValidationError);
}

TEST_CASE("path enumeration on a triangle") {
  TransportNetwork net;
  net.nodes = {"r", "m", "s"};
  auto mk = [&](const char* id, int a, int b, double t0) {
    TransportLink l;
    l.id = id;
    l.tail = a;
    l.head = b;
    l.t0_h = t0;
    l.cap_pu = 1.0;
    net.links.push_back(l);
  };
  mk("direct", 0, 2, 0.3);
  mk("leg1", 0, 1, 0.1);
  mk("leg2", 1, 2, 0.1);
  OdPair od{0, 2, 1.0, 0.0};
  auto paths = enumerate_paths(net, od, VehicleClass::GV, 10);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].free_time_h == doctest::Approx(0.2));  // sorted by free time
  CHECK(paths[1].free_time_h == doctest::Approx(0.3));

  OdPair back{2, 0, 1.0, 0.0};
  CHECK_THROWS_AS(enumerate_paths(net, back, VehicleClass::GV, 10), SolveError);
}

TEST_CASE("ev path enumeration honours the charging policy") {
  TransportNetwork x = expand_bypass_links(corridor_with_station());
  OdPair od = x.od_pairs[0];

  auto optional_mode = enumerate_paths(x, od, VehicleClass::EV, 10, false);
  CHECK(optional_mode.size() == 2);  // via charging link and via bypass

  auto required_mode = enumerate_paths(x, od, VehicleClass::EV, 10, true);
  REQUIRE(required_mode.size() == 1);
  CHECK(required_mode[0].charging_link >= 0);

  auto gv = enumerate_paths(x, od, VehicleClass::GV, 10, true);
  REQUIRE(gv.size() == 1);
  for (int a : gv[0].links) CHECK(x.links[a].kind != LinkKind::Charging);
}

TEST_CASE("gv paths never use charging links on the bundled network") {
  Scenario s = load_scenario(data_file("ieee33-4p.json"));
  TransportNetwork x = expand_bypass_links(s.transport);
  PathSet ps = build_path_sets(x, 50);
  for (size_t k = 0; k < x.od_pairs.size(); ++k) {
    for (auto& p : ps.paths(static_cast<int>(k), VehicleClass::GV))
      for (int a : p.links) CHECK(x.links[a].kind != LinkKind::Charging);
    for (auto& p : ps.paths(static_cast<int>(k), VehicleClass::EV)) {
      int charges = 0;
      for (int a : p.links)
        if (x.links[a].kind == LinkKind::Charging) ++charges;
      CHECK(charges == 1);
    }
  }
}

TEST_CASE("link flows recovered from path flows match the incidence sum") {
  // brute force on a 4-node diamond: two GV paths, arbitrary flows
  TransportNetwork net;
  net.nodes = {"r", "a", "b", "s"};
  auto mk = [&](const char* id, int t, int h) {
    TransportLink l;
    l.id = id;
    l.tail = t;
    l.head = h;
    l.t0_h = 0.1;
    l.cap_pu = 1.0;
    net.links.push_back(l);
  };
  mk("ra", 0, 1);
  mk("rb", 0, 2);
  mk("as", 1, 3);
  mk("bs", 2, 3);
  OdPair od{0, 3, 3.0, 0.0};
  auto paths = enumerate_paths(net, od, VehicleClass::GV, 10);
  REQUIRE(paths.size() == 2);
  std::vector<double> f = {1.25, 1.75};
  std::vector<double> x(net.links.size(), 0.0);
  for (size_t k = 0; k < paths.size(); ++k)
    for (int a : paths[k].links) x[a] += f[k];
  // every link carries exactly the flow of the unique path through it
  for (size_t a = 0; a < net.links.size(); ++a) {
    double expect = 0.0;
    for (size_t k = 0; k < paths.size(); ++k)
      if (paths[k].uses(static_cast<int>(a))) expect += f[k];
    CHECK(x[a] == doctest::Approx(expect));
  }
}

TEST_CASE("charging demand aggregation") {
  TransportNetwork x = expand_bypass_links(corridor_with_station());
  CouplingMap cm;
  cm.station_bus["CS1"] = "b10";

  SUBCASE("zero flow gives zero demand") {
    std::vector<double> flows(x.links.size(), 0.0);
    auto d = charging_demand(flows, x, cm);
    CHECK(d.at("b10") == doctest::Approx(0.0));
  }
  SUBCASE("one p.u. of charging flow at 100 veh/h and 0.02 MWh per EV") {
    std::vector<double> flows(x.links.size(), 0.0);
    for (size_t a = 0; a < x.links.size(); ++a)
      if (x.links[a].kind == LinkKind::Charging) flows[a] = 1.0;
    auto d = charging_demand(flows, x, cm);
    CHECK(d.at("b10") == doctest::Approx(2.0));
  }
}

TEST_CASE("two stations on one prosumer sum their charging flows") {
  TransportNetwork net;
  net.nodes = {"u", "m", "v"};
  for (int i = 0; i < 2; ++i) {
    TransportLink l;
    l.id = "E" + std::to_string(i + 1);
    l.tail = i;
    l.head = i + 1;
    l.kind = LinkKind::Charging;
    l.t0_h = 0.1;
    l.cap_pu = 4.0;
    l.station = "CS" + std::to_string(i + 1);
    l.service_h = 0.2;
    l.max_wait_h = 0.1;
    l.max_ev_pu = 4.0;
    net.links.push_back(l);
  }
  TransportNetwork x = expand_bypass_links(net);
  CouplingMap cm;
  cm.station_bus["CS1"] = "p";
  cm.station_bus["CS2"] = "p";
  std::vector<double> flows(x.links.size(), 0.0);
  for (size_t a = 0; a < x.links.size(); ++a) {
    if (x.links[a].kind != LinkKind::Charging) continue;
    flows[a] = x.links[a].station == "CS1" ? 1.0 : 2.0;
  }
  auto d = charging_demand(flows, x, cm);
  CHECK(d.at("p") == doctest::Approx(3.0 * 100.0 * 0.02));
}
