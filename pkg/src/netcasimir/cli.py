"""Command line front end: ``netcasimir <command> ...`` (or ``python3 -m netcasimir``).

Exit codes: 0 success, 1 verification failure, 2 invalid graph, 3 unreadable
file, 4 unsupported method/dimension, 5 numerical non-convergence.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import os
import sys
import warnings

import numpy as np
from scipy import optimize

from . import graphfile
from .casimir1d import (
    DETERMINANT_INTEGRAL,
    FD_STEP,
    MODE_SUM,
    QUAD_TOL,
    STAR_CLOSED_FORM,
    ConvergenceError,
    energy_general,
    energy_star,
    force_star,
    _force_general,
)
from .graph import validate_graph
from .highd import MAX_DIM, MIN_DIM, energy_per_area_star, pressure_star
from .oracle import SpectrumWarning, find_zeros_general, find_zeros_star, mode_sum_energy
from . import verify as verify_mod

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_NOCONV = 0, 1, 2, 3, 4, 5

DEFAULT_TOL = {"energy": 1e-10, "force": 1e-6, "sweep": 1e-6}


class Unsupported(Exception):
    """Method / dimension / graph combination the engines do not cover."""


class InvalidGraph(Exception):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


def _threads():
    raw = os.environ.get("CASIMIR_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _load(path, dim=None):
    g, file_dim = graphfile.load(path)
    report = validate_graph(g)
    if not report.ok:
        raise InvalidGraph(report)
    d = file_dim if dim is None else dim
    if not MIN_DIM <= d <= MAX_DIM:
        raise Unsupported(f"dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {d}")
    return g, d


def _quad_tol(tol, fd=False):
    # requested accuracy of the output; the engine never runs looser than its default
    return min(QUAD_TOL, tol * (FD_STEP if fd else 1.0))


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# ----------------------------------------------------------------------------- computations


def compute_energy(g, d, method="auto", tol=DEFAULT_TOL["energy"], forces=False):
    star = g.star_data()
    if method == "auto":
        method = "star" if star is not None else "det"
    if method == "star" and star is None:
        raise Unsupported("method 'star' needs a star graph (one node, all edges to leaves with one shared bc)")
    if method in ("det", "modes") and d != 2:
        raise Unsupported(f"method {method!r} supports dimension 2 only; use 'star' for d > 2")
    qt = _quad_tol(tol, fd=forces and star is None)
    if method == "star" and d > 2:
        res = energy_per_area_star(d, star[0], star[1], tol=qt)
        out = {"energy": res.energy_per_area, "error": res.quad_error, "method": STAR_CLOSED_FORM,
               "quad_error": res.quad_error, "dimension": d, "per_area": True}
        if forces:
            out["pressures"], out["pressure_errors"] = {}, {}
            for i, e in enumerate(g.edges):
                P, err = pressure_star(d, star[0], star[1], i, tol=qt, with_error=True)
                out["pressures"][e.id], out["pressure_errors"][e.id] = P, err
        return out
    if method == "star":
        res = energy_star(star[0], star[1], with_forces=forces, tol=qt)
        ids = {f"E{i + 1}": e.id for i, e in enumerate(g.edges)}
        out = {"energy": res.energy, "error": res.quad_error, "method": res.method, "quad_error": res.quad_error}
        if forces:
            out["forces"] = {ids[k]: v for k, v in res.forces.items()}
            out["force_errors"] = {ids[k]: v for k, v in res.force_errors.items()}
            out["fd_step"] = None
        return out
    if method == "det":
        res = energy_general(g, with_forces=forces, tol=qt)
        out = {"energy": res.energy, "error": res.quad_error, "method": res.method, "quad_error": res.quad_error}
        if forces:
            out["forces"], out["force_errors"], out["fd_step"] = res.forces, res.force_errors, res.fd_step
        return out
    if method == "modes":
        if forces:
            raise Unsupported("method 'modes' reports energies only")
        minL = min(g.lengths)
        modes = (lambda k: find_zeros_star(star[0], star[1], k)) if star is not None else (lambda k: find_zeros_general(g, k))
        with warnings.catch_warnings():
            warnings.simplefilter("error", SpectrumWarning)
            try:
                fine = mode_sum_energy(modes, minL)
                coarse = mode_sum_energy(modes, minL, extra_terms=2)
            except SpectrumWarning as exc:
                raise ConvergenceError(str(exc)) from None
        err = abs(fine.finite_part - coarse.finite_part) + fine.residual
        return {"energy": fine.finite_part, "error": err, "method": MODE_SUM, "quad_error": err}
    raise Unsupported(f"unknown method {method!r}")


def compute_force(g, d, edge, tol=DEFAULT_TOL["force"]):
    try:
        i = g.edge_index(edge)
    except KeyError:
        raise Unsupported(f"graph has no edge {edge!r}") from None
    star = g.star_data()
    if d > 2:
        if star is None:
            raise Unsupported("pressures for d > 2 need a star graph")
        P, err = pressure_star(d, star[0], star[1], i, tol=_quad_tol(tol), with_error=True)
        return {"pressure": P, "error": err, "fd_step": None, "edge": edge, "dimension": d,
                "method": STAR_CLOSED_FORM}
    if star is not None:
        F, err = force_star(star[0], star[1], i, tol=_quad_tol(tol), with_error=True)
        return {"force": F, "error": err, "fd_step": None, "edge": edge, "method": STAR_CLOSED_FORM}
    F, err = _force_general(g, edge, _quad_tol(tol, fd=True), "fd")
    return {"force": F, "error": err, "fd_step": FD_STEP, "edge": edge, "method": DETERMINANT_INTEGRAL}


def sweep_grid(start, stop, points, scale):
    if not start < stop:
        raise ValueError("--from must be smaller than --to")
    if points < 2:
        raise ValueError("--points must be at least 2")
    if scale == "log":
        if start <= 0:
            raise ValueError("log grid needs --from > 0")
        return np.geomspace(start, stop, points).tolist()
    return np.linspace(start, stop, points).tolist()


def _sweep_point(g, d, vary, quantity, edge, tol, x):
    lengths = list(g.lengths)
    for e in vary:
        lengths[g.edge_index(e)] = x
    h = g.with_lengths(lengths)
    if quantity == "energy":
        r = compute_energy(h, d, tol=tol)
        return r["energy"], r["error"]
    if quantity == "force" and d > 2:
        raise Unsupported("quantity 'force' is for d = 2; use 'pressure' in higher dimensions")
    r = compute_force(h, d, edge, tol)
    return r.get("force", r.get("pressure")), r["error"]


def run_sweep(g, d, vary, grid, quantity, edge=None, tol=DEFAULT_TOL["sweep"], threads=None):
    """Rows ``(param, value, error)`` in grid order; parallel but order-independent."""
    for e in vary:
        g.edge_index(e)
    if quantity in ("force", "pressure") and edge is None:
        raise Unsupported(f"quantity {quantity!r} needs --edge")
    if quantity == "pressure" and g.star_data() is None:
        raise Unsupported("pressure needs a star graph")
    threads = _threads() if threads is None else threads
    fn = lambda x: _sweep_point(g, d, vary, quantity, edge, tol, x)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(fn, grid))
    else:
        values = [fn(x) for x in grid]
    return [(x, v, e) for x, (v, e) in zip(grid, values)]


def sign_changes(g, d, vary, quantity, edge, tol, rows):
    """Abscissas where the swept quantity changes sign, refined by bracketing root search."""
    out = []
    fn = lambda x: _sweep_point(g, d, vary, quantity, edge, tol, x)[0]
    for (x0, v0, _), (x1, v1, _) in zip(rows, rows[1:]):
        if v0 == 0 or v0 * v1 < 0:
            root = x0 if v0 == 0 else optimize.brentq(fn, x0, x1, xtol=1e-12, rtol=1e-12)
            out.append({"between": [x0, x1], "root": root})
    return out


def format_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "value", "error"])
    for x, v, e in rows:
        w.writerow([repr(float(x)), repr(float(v)), repr(float(e))])
    return buf.getvalue()


def compute_spectrum(g, k_max):
    star = g.star_data()
    if star is not None:
        modes = find_zeros_star(star[0], star[1], k_max)
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SpectrumWarning)
            modes = find_zeros_general(g, k_max)
        if caught:
            raise ConvergenceError(str(caught[0].message))
    # bisection / kink polishing resolve zeros to a few ulps
    return [{"k": m.k, "multiplicity": m.multiplicity, "error": 8 * np.finfo(float).eps * max(1.0, m.k)}
            for m in modes]


# ----------------------------------------------------------------------------- commands


def cmd_validate(args):
    try:
        g, _ = graphfile.load(args.path)
    except graphfile.GraphFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = validate_graph(g)
    if report.ok:
        print("ok")
        return EXIT_OK
    for v in report.violations:
        print(v)
    return EXIT_INVALID


def cmd_energy(args):
    g, d = _load(args.path, args.dim)
    _emit(compute_energy(g, d, args.method, args.tol, args.forces))
    return EXIT_OK


def cmd_force(args):
    g, d = _load(args.path, args.dim)
    _emit(compute_force(g, d, args.edge, args.tol))
    return EXIT_OK


def cmd_sweep(args):
    g, d = _load(args.path, args.dim)
    vary = [e.strip() for e in args.vary.split(",") if e.strip()]
    try:
        grid = sweep_grid(args.start, args.stop, args.points, args.scale)
        for e in vary + ([args.edge] if args.edge else []):
            g.edge_index(e)
    except (ValueError, KeyError) as exc:
        raise Unsupported(str(exc).strip("'\"")) from None
    rows = run_sweep(g, d, vary, grid, args.quantity, args.edge, args.tol)
    if args.output == "csv":
        sys.stdout.write(format_csv(rows))
    else:
        _emit({"param": vary, "quantity": args.quantity, "edge": args.edge, "dimension": d,
               "rows": [{"param": x, "value": v, "error": e} for x, v, e in rows],
               "sign_changes": sign_changes(g, d, vary, args.quantity, args.edge, args.tol, rows)})
    return EXIT_OK


def cmd_spectrum(args):
    g, d = _load(args.path)
    if d != 2:
        raise Unsupported("the spectrum is that of the 1d network; omit the transverse dimension")
    zeros = compute_spectrum(g, args.kmax)
    _emit({"kmax": args.kmax, "count": sum(z["multiplicity"] for z in zeros), "zeros": zeros})
    return EXIT_OK


def cmd_verify(args):
    threshold = args.tol
    if args.path:
        g, d = _load(args.path)
        if d == 2:
            checks = verify_mod.check_graph(g, threshold)
        else:
            star = g.star_data()
            if star is None:
                raise Unsupported("verification in d > 2 needs a star graph")
            checks = verify_mod.check_highd(d, star[0], star[1].value, threshold)
    else:
        checks = verify_mod.run_presets(threshold, stars_only=args.stars_only)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="netcasimir", description="Casimir energies and forces on metric graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a graph file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("energy", help="Casimir energy (per transverse area for d > 2)")
    s.add_argument("path")
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--method", choices=("auto", "star", "det", "modes"), default="auto")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL["energy"])
    s.add_argument("--forces", action="store_true", help="also report forces (pressures for d > 2)")
    s.set_defaults(func=cmd_energy)

    s = sub.add_parser("force", help="force (d = 2) or pressure (d > 2) on one edge")
    s.add_argument("path")
    s.add_argument("--edge", required=True)
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL["force"])
    s.set_defaults(func=cmd_force)

    s = sub.add_parser("sweep", help="vary edge lengths together over a grid")
    s.add_argument("path")
    s.add_argument("--vary", required=True, help="comma separated edge ids set to the grid value")
    s.add_argument("--from", dest="start", type=float, required=True)
    s.add_argument("--to", dest="stop", type=float, required=True)
    s.add_argument("--points", type=int, default=60)
    s.add_argument("--scale", choices=("linear", "log"), default="linear")
    s.add_argument("--quantity", choices=("energy", "force", "pressure"), default="energy")
    s.add_argument("--edge", default=None)
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--tol", type=float, default=DEFAULT_TOL["sweep"])
    s.add_argument("--output", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("spectrum", help="eigenvalues k with multiplicity up to --kmax")
    s.add_argument("path")
    s.add_argument("--kmax", type=float, required=True)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", help="run the invariant suite")
    s.add_argument("path", nargs="?")
    s.add_argument("--all-presets", action="store_true")
    s.add_argument("--stars-only", action="store_true", help="with --all-presets: star graphs only")
    s.add_argument("--tol", type=float, default=verify_mod.DEFAULT_THRESHOLD, help="pass threshold scale")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not (args.path or args.all_presets):
        parser.error("verify needs a graph file or --all-presets")
    try:
        return args.func(args)
    except graphfile.GraphFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidGraph as exc:
        print("invalid graph:", file=sys.stderr)
        for v in exc.report.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INVALID
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV


if __name__ == "__main__":
    sys.exit(main())
