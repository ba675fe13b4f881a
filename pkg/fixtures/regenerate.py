"""Rebuild the graph fixtures and the expected sweep tables.

Expected values come from the oracle routes only: the QUADPACK pole/contour
pressure for star sweeps, and central differences of regulated mode sums for
the tree and loop sweeps. The engine is never used to make its own targets.

    python3 fixtures/regenerate.py            # everything (mode sums take minutes)
    python3 fixtures/regenerate.py --graphs   # graph files only
"""
import argparse
import csv
import json
from pathlib import Path
import warnings

import numpy as np

from netcasimir import graphfile
from netcasimir.graph import preset_circle, preset_loop4, preset_star, preset_strip, preset_tree5
from netcasimir.oracle import SpectrumWarning, find_zeros_general, mode_sum_energy, pressure_reference

# a missed zero or a poor fit must never end up as a frozen target
warnings.simplefilter("error", SpectrumWarning)

HERE = Path(__file__).resolve().parent
GRAPHS = HERE / "graphs"
EXPECTED = HERE / "expected"

GRAPH_FILES = {
    "star3_dbc": (preset_star(3, [1, 1, 1], "dirichlet"), 2),
    "star3_nbc": (preset_star(3, [1, 1, 1], "neumann"), 2),
    "star3_long_dbc": (preset_star(3, [1, 1e6, 1e6], "dirichlet"), 2),
    "star3_long_nbc": (preset_star(3, [1, 1e6, 1e6], "neumann"), 2),
    "star3_thin_dbc": (preset_star(3, [1, 1e-6, 1e-6], "dirichlet"), 2),
    "star3_thin_nbc": (preset_star(3, [1, 1e-6, 1e-6], "neumann"), 2),
    "strip_dbc": (preset_strip(1.0, "dirichlet"), 2),
    "strip_nbc": (preset_strip(1.0, "neumann"), 2),
    "circle": (preset_circle(1.0), 2),
    "tree5_dbc": (preset_tree5([1] * 5, "dirichlet"), 2),
    "tree5_nbc": (preset_tree5([1] * 5, "neumann"), 2),
    "loop4_dbc": (preset_loop4([1] * 4, "dirichlet"), 2),
    "loop4_nbc": (preset_loop4([1] * 4, "neumann"), 2),
    "loop4_strip_limit_dbc": (preset_loop4([0.5, 1e-4, 1e-4, 0.5], "dirichlet"), 2),
    "loop4_strip_limit_nbc": (preset_loop4([0.5, 1e-4, 1e-4, 0.5], "neumann"), 2),
    "loop4_circle_limit_dbc": (preset_loop4([1e-4, 0.5, 0.5, 1e-4], "dirichlet"), 2),
    "star3_d3_dbc": (preset_star(3, [1, 1, 1], "dirichlet"), 3),
    "star3_d3_nbc": (preset_star(3, [1, 1, 1], "neumann"), 3),
    "star3_d4_dbc": (preset_star(3, [1, 1, 1], "dirichlet"), 4),
    "star3_d4_nbc": (preset_star(3, [1, 1, 1], "neumann"), 4),
}

# name: graph file, varied edges, grid, quantity, edge, dimension
STAR_SWEEPS = {}
for bc in ("dbc", "nbc"):
    STAR_SWEEPS[f"star_F1_vs_L23_{bc}"] = (f"star3_{bc}", ["E2", "E3"], (0.05, 50.0, 60, "log"), "force", "E1", 2)
    STAR_SWEEPS[f"star_F1_vs_L3_{bc}"] = (f"star3_{bc}", ["E3"], (0.05, 50.0, 60, "log"), "force", "E1", 2)
    for d in (3, 4):
        STAR_SWEEPS[f"star_P1_vs_L23_d{d}_{bc}"] = (f"star3_d{d}_{bc}", ["E2", "E3"], (0.05, 50.0, 60, "log"),
                                                   "pressure", "E1", d)
GENERAL_SWEEPS = {}
for bc in ("dbc", "nbc"):
    GENERAL_SWEEPS[f"tree5_F1_vs_L345_{bc}"] = (f"tree5_{bc}", ["E3", "E4", "E5"], (0.25, 4.0, 8, "log"), "force", "E1", 2)
    GENERAL_SWEEPS[f"loop4_F1_vs_L23_{bc}"] = (f"loop4_{bc}", ["E2", "E3"], (0.25, 4.0, 8, "log"), "force", "E1", 2)
    GENERAL_SWEEPS[f"loop4_F2_vs_L14_{bc}"] = (f"loop4_{bc}", ["E1", "E4"], (0.25, 4.0, 8, "log"), "force", "E2", 2)


def grid(spec):
    a, b, n, scale = spec
    return (np.geomspace(a, b, n) if scale == "log" else np.linspace(a, b, n)).tolist()


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["param", "value", "error"])
        for x, v, e in rows:
            w.writerow([repr(float(x)), repr(float(v)), repr(float(e))])


def star_rows(g, vary, spec, edge, d):
    lengths0 = list(g.lengths)
    bc = g.star_data()[1]
    rows = []
    for x in grid(spec):
        lengths = list(lengths0)
        for e in vary:
            lengths[g.edge_index(e)] = x
        P, err = pressure_reference(d, lengths, bc, g.edge_index(edge), with_error=True)
        rows.append((x, P, err))
    return rows


def mode_sum(g):
    r = mode_sum_energy(lambda k: find_zeros_general(g, k), min(g.lengths))
    return r.finite_part, r.residual


def general_rows(g, vary, spec, edge, h=1e-3):
    i = g.edge_index(edge)
    rows = []
    for x in grid(spec):
        lengths = list(g.lengths)
        for e in vary:
            lengths[g.edge_index(e)] = x
        L = lengths[i]
        up, down = list(lengths), list(lengths)
        up[i], down[i] = L * (1 + h), L * (1 - h)
        (bp, ep), (bm, em) = mode_sum(g.with_lengths(up)), mode_sum(g.with_lengths(down))
        F = -(bp - bm) / (2 * h * L)
        # fit residuals over the lever arm plus the O(h^2) truncation scale
        rows.append((x, F, (ep + em) / (2 * h * L) + h * h * abs(F)))
        print(f"  {edge} at {x:.4g}: {F:.10f}", flush=True)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--graphs", action="store_true", help="only rewrite graph files")
    ap.add_argument("--stars", action="store_true", help="graph files and star sweeps only")
    args = ap.parse_args()
    GRAPHS.mkdir(exist_ok=True)
    EXPECTED.mkdir(exist_ok=True)
    for name, (g, d) in GRAPH_FILES.items():
        graphfile.save(GRAPHS / f"{name}.json", g, d)
    manifest = {}
    for name, (gname, vary, spec, qty, edge, d) in {**STAR_SWEEPS, **GENERAL_SWEEPS}.items():
        a, b, n, scale = spec
        manifest[name] = {"graph": f"graphs/{gname}.json", "vary": vary, "from": a, "to": b, "points": n,
                          "scale": scale, "quantity": qty, "edge": edge, "dimension": d,
                          "expected": f"expected/{name}.csv",
                          "oracle": "pole/contour quadrature" if name in STAR_SWEEPS else "mode-sum difference"}
    (HERE / "sweeps.json").write_text(json.dumps(manifest, indent=2) + "\n")
    if args.graphs:
        return
    for name, (gname, vary, spec, qty, edge, d) in STAR_SWEEPS.items():
        g, _ = graphfile.load(GRAPHS / f"{gname}.json")
        write_csv(EXPECTED / f"{name}.csv", star_rows(g, vary, spec, edge, d))
        print("wrote", name, flush=True)
    if args.stars:
        return
    for name, (gname, vary, spec, qty, edge, d) in GENERAL_SWEEPS.items():
        g, _ = graphfile.load(GRAPHS / f"{gname}.json")
        print(name, flush=True)
        write_csv(EXPECTED / f"{name}.csv", general_rows(g, vary, spec, edge))


if __name__ == "__main__":
    main()
