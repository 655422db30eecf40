#!/usr/bin/env python3
"""Regenerates the bundled scenario files under data/.

Power-side topology follows the standard 33-bus radial test feeder; road
networks, link parameters and utility coefficients are synthetic and
calibrated so the bundled studies land in the intended operating regimes.
Run from the repository root:  python3 scripts/make_scenarios.py
"""
import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data")

# ---------------------------------------------------------------------------
# 33-bus feeder: branch resistance/reactance in ohms, loads in kW/kvar.
# Converted to per-unit on 12.66 kV / 10 MVA.
# ---------------------------------------------------------------------------
BRANCHES = [
    (1, 2, 0.0922, 0.0470), (2, 3, 0.4930, 0.2511), (3, 4, 0.3660, 0.1864),
    (4, 5, 0.3811, 0.1941), (5, 6, 0.8190, 0.7070), (6, 7, 0.1872, 0.6188),
    (7, 8, 0.7114, 0.2351), (8, 9, 1.0300, 0.7400), (9, 10, 1.0440, 0.7400),
    (10, 11, 0.1966, 0.0650), (11, 12, 0.3744, 0.1238), (12, 13, 1.4680, 1.1550),
    (13, 14, 0.5416, 0.7129), (14, 15, 0.5910, 0.5260), (15, 16, 0.7463, 0.5450),
    (16, 17, 1.2890, 1.7210), (17, 18, 0.7320, 0.5740), (2, 19, 0.1640, 0.1565),
    (19, 20, 1.5042, 1.3554), (20, 21, 0.4095, 0.4784), (21, 22, 0.7089, 0.9373),
    (3, 23, 0.4512, 0.3083), (23, 24, 0.8980, 0.7091), (24, 25, 0.8960, 0.7011),
    (6, 26, 0.2030, 0.1034), (26, 27, 0.2842, 0.1447), (27, 28, 1.0590, 0.9337),
    (28, 29, 0.8042, 0.7006), (29, 30, 0.5075, 0.2585), (30, 31, 0.9744, 0.9630),
    (31, 32, 0.3105, 0.3619), (32, 33, 0.3410, 0.5302),
]
LOADS = {
    2: (100, 60), 3: (90, 40), 4: (120, 80), 5: (60, 30), 6: (60, 20),
    7: (200, 100), 8: (200, 100), 9: (60, 20), 10: (60, 20), 11: (45, 30),
    12: (60, 35), 13: (60, 35), 14: (120, 80), 15: (60, 10), 16: (60, 20),
    17: (60, 20), 18: (90, 40), 19: (90, 40), 20: (90, 40), 21: (90, 40),
    22: (90, 40), 23: (90, 50), 24: (420, 200), 25: (420, 200), 26: (60, 25),
    27: (60, 25), 28: (60, 20), 29: (120, 70), 30: (200, 600), 31: (150, 70),
    32: (210, 100), 33: (60, 40),
}
KV = 12.66
BASE_MVA = 10.0
ZBASE = KV * KV / BASE_MVA


def bus_name(i):
    return f"b{i}"


def power_33bus(import_cap_mw, prosumer_buses, line_cap_scale=1.0):
    buses = []
    for i in range(1, 34):
        p, q = LOADS.get(i, (0, 0))
        b = {
            "id": bus_name(i),
            "v_min_pu": 0.94,
            "v_max_pu": 1.06,
            "fixed_p_mw": p / 1000.0,
            "fixed_q_mvar": q / 1000.0,
            "p_min_mw": 0.0,
            "p_max_mw": 0.0,
            "q_min_mvar": 0.0,
            "q_max_mvar": 0.0,
        }
        if i == 1:
            b["fixed_p_mw"] = 0.0
            b["fixed_q_mvar"] = 0.0
            b["p_min_mw"] = -import_cap_mw
            b["p_max_mw"] = 0.0
            b["q_min_mvar"] = -10.0
            b["q_max_mvar"] = 10.0
        if i in prosumer_buses:
            # prosumer buses: their fixed load moves to the prosumer record
            b["fixed_p_mw"] = 0.0
            b["fixed_q_mvar"] = 0.0
            b["p_min_mw"] = -12.0
            b["p_max_mw"] = 15.0
            b["q_min_mvar"] = -3.0
            b["q_max_mvar"] = 3.0
        buses.append(b)
    lines = []
    for f, t, r, x in BRANCHES:
        lines.append({
            "from": bus_name(f),
            "to": bus_name(t),
            "r_pu": round(r / ZBASE, 8),
            "x_pu": round(x / ZBASE, 8),
            "i_sq_max_pu": round(16.0 * line_cap_scale, 6),
        })
    return {
        "base_mva": BASE_MVA,
        "slack_bus": bus_name(1),
        "slack_v_pu": 1.0,
        "buses": buses,
        "lines": lines,
    }


# ---------------------------------------------------------------------------
# 12-node / 20-link road grid (3 rows x 4 columns) with 8 stations.
# ---------------------------------------------------------------------------
ROAD_NODES = [f"T{i}" for i in range(1, 13)]
ROAD_LINKS = [
    # id, from, to, t0 (h), capacity (pu), station or None
    ("E1", "T1", "T2", 0.12, 6.0, None),
    ("E2", "T2", "T3", 0.12, 6.0, None),
    ("E3", "T3", "T4", 0.12, 6.0, None),
    ("E4", "T5", "T6", 0.10, 6.0, "CS1"),
    ("E5", "T6", "T7", 0.10, 6.0, "CS3"),
    ("E6", "T7", "T8", 0.10, 6.0, None),
    ("E7", "T9", "T10", 0.14, 6.0, "CS6"),
    ("E8", "T10", "T11", 0.14, 6.0, None),
    ("E9", "T11", "T12", 0.14, 6.0, None),
    ("E10", "T1", "T5", 0.10, 8.0, None),
    ("E11", "T5", "T9", 0.10, 8.0, None),
    ("E12", "T2", "T6", 0.11, 6.0, "CS2"),
    ("E13", "T6", "T10", 0.11, 6.0, "CS4"),
    ("E14", "T3", "T7", 0.11, 6.0, "CS5"),
    ("E15", "T7", "T11", 0.11, 6.0, "CS7"),
    ("E16", "T4", "T8", 0.11, 6.0, None),
    ("E17", "T8", "T12", 0.11, 6.0, "CS8"),
    ("E18", "T2", "T5", 0.09, 5.0, None),
    ("E19", "T6", "T9", 0.09, 5.0, None),
    ("E20", "T3", "T8", 0.16, 5.0, None),
]
ROAD_ODS = [
    ("T1", "T6", 5), ("T1", "T10", 15), ("T1", "T12", 10), ("T1", "T11", 5),
    ("T3", "T8", 5), ("T3", "T11", 15), ("T3", "T12", 15), ("T3", "T7", 5),
    ("T2", "T9", 10), ("T2", "T12", 10), ("T4", "T12", 5),
]
EV_SHARE = 0.05


def road_network(service_h=1.0 / 3.0, wait_h=0.15, max_ev_pu=3.0):
    links = []
    for lid, f, t, t0, cap, cs in ROAD_LINKS:
        l = {"id": lid, "from": f, "to": t, "kind": "regular",
             "t0_hours": t0, "capacity_pu": cap}
        if cs:
            l["kind"] = "charging"
            l["station"] = cs
            l["service_hours"] = service_h
            l["max_wait_hours"] = wait_h
            l["max_ev_flow_pu"] = max_ev_pu
        links.append(l)
    ods = []
    for o, d, q in ROAD_ODS:
        ods.append({"origin": o, "destination": d,
                    "gv_rate_pu": round(q * (1 - EV_SHARE), 6),
                    "ev_rate_pu": round(q * EV_SHARE, 6)})
    return {
        "flow_base_vph": 100.0,
        "time_value_usd_per_hour": 10.0,
        "ev_charge_mwh": 0.02,
        "nodes": ROAD_NODES,
        "links": links,
        "od_pairs": ods,
    }


def ieee33_4p():
    prosumer_buses = {10, 18, 23, 30}
    sc = {
        "name": "ieee33-4p",
        "power": power_33bus(import_cap_mw=9.0, prosumer_buses=prosumer_buses),
        "prosumers": [
            {"bus": "b10", "renewable_mw": 3.0, "fixed_demand_mw": 0.10,
             "elastic_min_mw": 0.0, "elastic_max_mw": 5.0,
             "utility_usd_per_mwh": 410.0, "q_min_mvar": -2.0, "q_max_mvar": 2.0},
            {"bus": "b18", "renewable_mw": 1.0, "fixed_demand_mw": 0.20,
             "elastic_min_mw": 0.0, "elastic_max_mw": 5.0,
             "utility_usd_per_mwh": 420.0, "q_min_mvar": -2.0, "q_max_mvar": 2.0},
            {"bus": "b23", "renewable_mw": 4.0, "fixed_demand_mw": 0.15,
             "elastic_min_mw": 0.0, "elastic_max_mw": 5.0,
             "utility_usd_per_mwh": 430.0, "q_min_mvar": -2.0, "q_max_mvar": 2.0},
            {"bus": "b30", "renewable_mw": 2.0, "fixed_demand_mw": 0.10,
             "elastic_min_mw": 0.0, "elastic_max_mw": 5.0,
             "utility_usd_per_mwh": 440.0, "q_min_mvar": -2.0, "q_max_mvar": 2.0},
        ],
        "transport": road_network(),
        "coupling": {
            "CS1": "b10", "CS2": "b10",
            "CS3": "b18", "CS4": "b18",
            "CS5": "b23", "CS6": "b23",
            "CS7": "b30", "CS8": "b30",
        },
        "options": {
            "cone_depth": 6,
            "mccormick_partitions": 10,
            "sos2_breakpoints": 17,
            "gap_tol": 1e-4,
            "m_a": 1.0,
            # sharing-only studies fix the charging demand at these values
            "fixed_charging_demand_mwh": {
                "b10": 3.2, "b18": 2.4, "b23": 2.6, "b30": 1.8
            },
        },
    }
    return sc


def write(name, sc):
    os.makedirs(OUT, exist_ok=True)
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        json.dump(sc, f, indent=2)
        f.write("\n")
    print("wrote", path)


def main():
    write("ieee33-4p.json", ieee33_4p())


if __name__ == "__main__":
    main()
