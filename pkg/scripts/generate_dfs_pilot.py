#!/usr/bin/env python3
"""Regenerate the committed DFS query-scaling pilot constants.

Runs the scaling study at the pilot seed and writes the per-epsilon mean
query/law ratios plus their generating manifest to
src/pathprobe/data/dfs_pilot.json.  The acceptance suite asserts fresh
runs stay within a factor 3 of these constants.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from pathprobe import __version__, experiments as ex

PILOT = dict(n=10_000, eps_list=[0.1, 0.15, 0.2], trials=20, master_seed=11001100)
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "pathprobe" / "data" / "dfs_pilot.json"


def main() -> None:
    rows, summaries = ex.dfs_scaling_study(**{
        "n": PILOT["n"],
        "eps_list": PILOT["eps_list"],
        "trials": PILOT["trials"],
        "master_seed": PILOT["master_seed"],
    })
    cells = {
        str(s.epsilon): {
            "target": s.target,
            "success_rate": s.success_rate,
            "mean_queries": s.mean_queries,
            "law": s.law,
            "mean_ratio": s.mean_ratio,
        }
        for s in summaries
    }
    ratios = [s.mean_ratio for s in summaries]
    geo_mean = 1.0
    for r in ratios:
        geo_mean *= r
    geo_mean **= 1.0 / len(ratios)
    payload = {
        "manifest": {"generator": "scripts/generate_dfs_pilot.py",
                     "version": __version__, **PILOT},
        "cells": cells,
        "ratio_geometric_mean": geo_mean,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")
    for eps, cell in cells.items():
        print(f"  eps={eps}: ratio={cell['mean_ratio']:.4f} success={cell['success_rate']}")
    print(f"  geometric mean ratio: {geo_mean:.4f}")


if __name__ == "__main__":
    main()
