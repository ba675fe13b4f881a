"""Self-consistency checks run by ``netcasimir verify``.

Each check compares two routes that share no code beyond the graph
assembly, or tests an exact identity (conformal relation, 1/L scaling).
"""
from dataclasses import dataclass
import math

from .casimir1d import conformal_residual, energy_general, energy_star
from .graph import preset_circle, preset_loop4, preset_star, preset_strip, preset_tree5
from .highd import conformal_residual_highd, energy_per_area_star, pressure_star
from .oracle import find_zeros_general, find_zeros_star, mode_sum_energy, pressure_appendix

DEFAULT_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Check:
    graph: str
    name: str
    value: float
    threshold: float

    @property
    def passed(self):
        return self.value < self.threshold

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.graph} {self.name}: {self.value:.3e} (< {self.threshold:.1e})"


def preset_graphs(stars_only=False):
    out = [
        preset_star(3, [1, 1, 1], "dirichlet"),
        preset_star(3, [1, 1, 1], "neumann"),
        preset_star(4, [1.0, 0.6, 1.7, 2.3], "neumann"),
    ]
    if stars_only:
        return out
    return out + [
        preset_tree5([1, 1, 1, 1, 1], "dirichlet"),
        preset_tree5([1, 1, 1, 1, 1], "neumann"),
        preset_loop4([1, 1, 1, 1], "dirichlet"),
        preset_loop4([1, 1, 1, 1], "neumann"),
        preset_strip(1.0, "dirichlet"),
        preset_circle(1.0),
    ]


def _label(g):
    star = g.star_data()
    tag = g.name or "graph"
    if star is not None:
        return f"{tag}[{star[1].value}]"
    bcs = {e.bc.value for ed in g.edges for e in (ed.start, ed.end) if hasattr(e, "bc")}
    return f"{tag}[{','.join(sorted(bcs))}]" if bcs else tag


def check_graph(g, threshold=DEFAULT_THRESHOLD, oracle=True):
    """Checks for a 1+1 dimensional graph; ``threshold`` scales every gate."""
    label = _label(g)
    out = []
    star = g.star_data()
    res = energy_general(g, with_forces=True)
    W = res.energy
    scale = abs(W) + 1.0
    out.append(Check(label, "conformal |W - sum F L|", conformal_residual(g, res) / scale, threshold))
    W_alt = energy_general(g, integrand="logdet").energy
    out.append(Check(label, "log-derivative vs log-determinant", abs(W - W_alt) / scale, threshold))
    W2 = energy_general(g.scaled(2.0)).energy
    out.append(Check(label, "scaling W(2L) = W(L)/2", abs(2 * W2 - W) / scale, threshold))
    if star is not None:
        lengths, bc = star
        cf = energy_star(lengths, bc, with_forces=True)
        out.append(Check(label, "closed form vs determinant", abs(cf.energy - W) / scale, threshold))
        dF = max(abs(cf.forces[e.id] - res.forces[e.id]) for e in g.edges)
        out.append(Check(label, "analytic vs finite-difference forces", dF / scale, 100 * threshold))
    if oracle:
        minL = min(g.lengths)
        if star is not None:
            modes = lambda k: find_zeros_star(star[0], star[1], k)
        else:
            modes = lambda k: find_zeros_general(g, k)
        b = mode_sum_energy(modes, minL).finite_part
        out.append(Check(label, "mode-sum oracle", abs(b - W) * minL, 1e3 * threshold))
    return out


def check_highd(d, lengths, bc, threshold=DEFAULT_THRESHOLD):
    label = f"star{len(lengths)}[{bc}] d={d}"
    res = energy_per_area_star(d, lengths, bc)
    scale = abs(res.energy_per_area) + 1.0
    out = [Check(label, "conformal |(d-1)W/A - sum P L|", conformal_residual_highd(d, lengths, bc) / scale, threshold)]
    if d % 2 == 0:
        worst = 0.0
        for i in range(len(lengths)):
            P = pressure_star(d, lengths, bc, i)
            worst = max(worst, abs(pressure_appendix(d, lengths, bc, i) - P) / max(abs(P), 1e-300))
        out.append(Check(label, "appendix pole/contour pressure", worst, 10 * threshold))
    return out


def run_presets(threshold=DEFAULT_THRESHOLD, stars_only=False):
    checks = []
    for g in preset_graphs(stars_only):
        checks += check_graph(g, threshold)
    for d in (3, 4):
        for bc in ("dirichlet", "neumann"):
            checks += check_highd(d, [1.0, 0.6, 1.7], bc, threshold)
    return checks
