#pragma once

#include <map>

#include "copower/model/types.hpp"

namespace copower {

// Replaces every station-hosting link by an approach segment, a parallel
// charging/bypass pair and an exit segment (+2 nodes, +3 links per station).
// The approach keeps the original free time and capacity so the non-charging
// route cost is preserved; bypass and exit have zero time.
TransportNetwork expand_bypass_links(const TransportNetwork& net);

// All simple paths for one OD pair and class, sorted by free-flow time,
// truncated to max_paths. GV paths never use charging links. With
// ev_must_charge, EV paths visit exactly one charging link; otherwise they
// may also bypass every station.
std::vector<Path> enumerate_paths(const TransportNetwork& net, const OdPair& od,
                                  VehicleClass cls, int max_paths,
                                  bool ev_must_charge = true);

PathSet build_path_sets(const TransportNetwork& net, int max_paths,
                        bool ev_must_charge = true);

// Per-prosumer charging demand D_i in MWh: sum over the prosumer's stations
// of charging-link flow (p.u.) x flow base x per-EV energy.
std::map<std::string, double> charging_demand(const std::vector<double>& link_flow_pu,
                                              const TransportNetwork& net,
                                              const CouplingMap& coupling);

}  // namespace copower
