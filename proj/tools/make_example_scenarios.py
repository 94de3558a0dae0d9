#!/usr/bin/env python3
"""Generates scenarios/baseline.example.json and scenarios/green.example.json.

Seven tri-sector sites on a hexagonal grid over an urban map with a regular
pattern of 50 m building blocks. The point equidistant from site0, site1 and
site2 sees every sector off-boresight (the coverage hole). The green scenario
adds one outdoor receive-only antenna there.
"""

import argparse
import json
import math
import pathlib

ISD_M = 1100.0
NOISE_DBM = -112.0
GREEN_GAIN_DBI = 5.0
MOBILES_PER_SECTOR = 10
HALF_MAP_ISD = 1.6
BLOCK_PITCH_M = 250.0
BLOCK_SIZE_M = 50.0
AZIMUTHS = (0.0, 120.0, 240.0)


def site_positions(isd):
    sites = [(0.0, 0.0)]
    for k in range(6):
        bearing = math.radians(30.0 + 60.0 * k)
        sites.append((isd * math.sin(bearing), isd * math.cos(bearing)))
    return sites


def rect(x0, y0, x1, y1):
    return {"x_min": round(x0, 3), "y_min": round(y0, 3), "x_max": round(x1, 3), "y_max": round(y1, 3)}


def buildings(half_map, pitch, penetration_db):
    out = []
    n = int(2 * half_map / pitch)
    for i in range(n):
        for j in range(n):
            x0 = -half_map + i * pitch + (pitch - BLOCK_SIZE_M) / 2
            y0 = -half_map + j * pitch + (pitch - BLOCK_SIZE_M) / 2
            out.append({"id": f"b{i:02d}{j:02d}", "footprint": rect(x0, y0, x0 + BLOCK_SIZE_M, y0 + BLOCK_SIZE_M),
                        "penetration_loss_db": penetration_db})
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=str(pathlib.Path(__file__).resolve().parent.parent / "scenarios"))
    parser.add_argument("--isd", type=float, default=ISD_M, help="inter-site distance [m]")
    parser.add_argument("--noise", type=float, default=NOISE_DBM, help="thermal noise per branch [dBm]")
    parser.add_argument("--green-gain", type=float, default=GREEN_GAIN_DBI)
    parser.add_argument("--mobiles", type=int, default=MOBILES_PER_SECTOR)
    parser.add_argument("--half-map-isd", type=float, default=HALF_MAP_ISD)
    parser.add_argument("--block-pitch", type=float, default=BLOCK_PITCH_M)
    parser.add_argument("--attach", choices=("all", "hole"), default="all",
                        help="attach the green to every sector or to the six facing the hole")
    args = parser.parse_args()
    isd = args.isd
    half_map = round(args.half_map_isd * isd, -1)

    sites = []
    for s, (x, y) in enumerate(site_positions(isd)):
        sites.append({
            "id": f"site{s}",
            "position": [round(x, 3), round(y, 3)],
            "sectors": [{
                "id": f"s{s}{chr(ord('a') + k)}",
                "azimuth_deg": az,
                "antenna": {"kind": "sector", "gain_dbi": 15.0, "theta_3db_deg": 65.0, "front_to_back_db": 20.0},
                "tx_power_dbm": 43.0,
                "noise_figure_db": 0.0,
            } for k, az in enumerate(AZIMUTHS)],
        })

    # Centroid of site0, site1 (bearing 30) and site2 (bearing 90).
    pos = site_positions(isd)
    hole = tuple(sum(p[i] for p in pos[:3]) / 3.0 for i in range(2))

    base = {
        "sites": sites,
        "greens": [],
        "clutter": {
            "bounds": rect(-half_map, -half_map, half_map, half_map),
            "cell_size_m": 100.0,
            "default_class": "urban",
            "buildings": buildings(half_map, args.block_pitch, 20.0),
        },
        "radio": {
            "p_min_dbm": -50.0,
            "p_max_dbm": 24.0,
            "thermal_noise_dbm": args.noise,
            "pathloss": {"urban": {"pl0_db": 128.1, "d0_m": 1000.0, "exponent": 3.76}},
            "shadowing_sigma_db": {"urban": 8.0},
            "dl_shadowing_mode": "reciprocal",
            "combining": "mrc",
            "uplink_access": "ofdma",
        },
        "traffic": {
            "mobiles_per_sector": args.mobiles,
            "indoor_fraction": 0.3,
            "voice_fraction": 0.5,
            "sinr_target_db": {"voice": -4.0, "data": 2.0},
        },
    }

    attached = [sec["id"] for site in sites for sec in site["sectors"]]
    if args.attach == "hole":
        attached = ["s0a", "s0b", "s1b", "s1c", "s2a", "s2c"]
    green = json.loads(json.dumps(base))
    green["greens"] = [{
        "id": "g0",
        "position": [round(hole[0], 3), round(hole[1], 3)],
        "antenna": {"kind": "omni", "gain_dbi": args.green_gain},
        "attached_sectors": attached,
        "noise_figure_db": 0.0,
    }]

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in (("baseline.example.json", base), ("green.example.json", green)):
        (out / name).write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
