"""Casimir energies and forces of a massless scalar on (1+1)-dimensional networks.

Two engines:

* star graphs with uniform leaf condition, where the zeta-regularized pole
  sum is known in closed form and only a rapidly convergent integral over
  the imaginary frequency axis remains;
* arbitrary graphs, through the junction determinant with its linear
  large-frequency growth subtracted.

Forces are ``F_i = -dW/dL_i``.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .graph import BC, preset_star, require_valid, total_length
from .quadrature import QuadratureError, integrate_half_line
from .secular import (
    DETERMINANT,
    _coth,
    _csch2,
    _sech2,
    _tanh,
    dlog_det_imag,
    dlog_det_imag_dlength,
    log_det_imag,
    log_det_imag_limit,
    secular_function,
)

STAR_CLOSED_FORM = "StarClosedForm"
DETERMINANT_INTEGRAL = "DeterminantIntegral"
MODE_SUM = "ModeSum"

QUAD_TOL = 1e-12
FD_STEP = 1e-4


class ConvergenceError(RuntimeError):
    """Quadrature for an energy or force did not converge."""


@dataclass
class CasimirResult:
    energy: float
    method: str
    quad_error: float = 0.0
    forces: dict = field(default=None)
    fd_step: float = None
    force_errors: dict = field(default=None)


def _check_star(lengths, bc):
    lengths = [float(L) for L in lengths]
    if len(lengths) < 2:
        raise ValueError("a star needs at least two edges")
    if any(not (L > 0 and math.isfinite(L)) for L in lengths):
        raise ValueError("edge lengths must be positive")
    return lengths, BC.parse(bc)


def _breaks(lengths):
    # every 1/L_i plus a geometric ladder (ratio 4) spanning all edge scales, so no
    # feature of the integrand can hide between the initial panels
    lo = 0.05 / max(lengths)
    hi = 40.0 / min(lengths)
    ladder = lo * 4.0 ** np.arange(int(math.ceil(math.log(hi / lo, 4))) + 1)
    return sorted(set(1.0 / L for L in lengths) | set(ladder.tolist()))


def _half_line(f, lengths, tol, unit=None):
    # tol is relative to the natural magnitude ``unit`` (default 1/minL), keeping results scale covariant
    scale = min(lengths)
    unit = 1.0 / scale if unit is None else unit
    try:
        return integrate_half_line(f, scale=scale, breakpoints=_breaks(lengths), tol=tol * unit)
    except QuadratureError as exc:
        raise ConvergenceError(f"{exc}; lengths={lengths}") from exc


def _star_denominator(lengths, bc, w):
    if bc is BC.DIRICHLET:
        return sum(_coth(w * L) for L in lengths)
    return sum(_tanh(w * L) for L in lengths)


def _bracket(bc, x):
    return _csch2(x) if bc is BC.DIRICHLET else _sech2(x)


def pole_coefficient(bc):
    """Zeta-regularized pole sum per unit 1/L: -pi/24 (Dirichlet) or +pi/48 (Neumann)."""
    # poles m*pi/L sum to (pi/2L) zeta(-1); poles (m+1/2)*pi/L to (pi/2L) zeta(-1, 1/2)
    return -math.pi / 24 if BC.parse(bc) is BC.DIRICHLET else math.pi / 48


def _star_energy_integral(lengths, bc, tol):
    sign = 1.0 if bc is BC.DIRICHLET else -1.0

    def f(w):
        num = sum(L * _bracket(bc, w * L) for L in lengths)
        return sign * w * num / (2 * math.pi * _star_denominator(lengths, bc, w))

    return _half_line(f, lengths, tol)


def _star_force_integral(lengths, bc, i, tol):
    sign = 1.0 if bc is BC.DIRICHLET else -1.0
    Li = lengths[i]

    def f(w):
        return sign * w * _bracket(bc, w * Li) / (2 * math.pi * _star_denominator(lengths, bc, w))

    return _half_line(f, lengths, tol, unit=1.0 / (min(lengths) * Li))


def force_star(lengths, bc, i, tol=QUAD_TOL, with_error=False):
    """Casimir force on edge ``i`` (0-based) of a star; analytic derivative of the energy."""
    lengths, bc = _check_star(lengths, bc)
    if not 0 <= i < len(lengths):
        raise IndexError(f"edge index {i} out of range")
    val, err = _star_force_integral(lengths, bc, i, tol)
    F = pole_coefficient(bc) / lengths[i] ** 2 + val
    return (F, err) if with_error else F


def energy_star(lengths, bc, with_forces=False, tol=QUAD_TOL):
    """Closed-form star energy: pole sum plus convergent imaginary-axis integral."""
    lengths, bc = _check_star(lengths, bc)
    val, err = _star_energy_integral(lengths, bc, tol)
    W = pole_coefficient(bc) * math.fsum(1.0 / L for L in lengths) + val
    res = CasimirResult(W, STAR_CLOSED_FORM, err)
    if with_forces:
        res.forces, res.force_errors = {}, {}
        for i, L in enumerate(lengths):
            fv, fe = _star_force_integral(lengths, bc, i, tol)
            res.forces[f"E{i + 1}"] = pole_coefficient(bc) / L ** 2 + fv
            res.force_errors[f"E{i + 1}"] = fe
    return res


def _general_energy(f, tol, integrand="logderiv"):
    g = f.graph
    lengths = g.lengths
    if integrand == "logderiv":
        # W = -(1/2pi) int w h'(w) dw, with h' the subtracted log-derivative
        fn = lambda w: -w * dlog_det_imag(f, w) / (2 * math.pi)
    elif integrand == "logdet":
        # integrated by parts: W = (1/2pi) int (h(w) - h(inf)) dw
        h_inf = log_det_imag_limit(f)
        fn = lambda w: (log_det_imag(f, w) - h_inf) / (2 * math.pi)
    else:
        raise ValueError(f"unknown integrand {integrand!r}")
    return _half_line(fn, lengths, tol)


def energy_general(g, with_forces=False, tol=QUAD_TOL, integrand="logderiv", force_method="fd"):
    """Casimir energy of any valid graph from the junction determinant."""
    require_valid(g)
    f = secular_function(g, DETERMINANT)
    W, err = _general_energy(f, tol, integrand)
    res = CasimirResult(W, DETERMINANT_INTEGRAL, err)
    if with_forces:
        res.forces, res.force_errors = {}, {}
        for e in g.edges:
            value, ferr = _force_general(g, e.id, tol, force_method)
            res.forces[e.id] = value
            res.force_errors[e.id] = ferr
        res.fd_step = FD_STEP if force_method == "fd" else None
    return res


def _force_general(g, edge_id, tol, method):
    i = g.edge_index(edge_id)
    L = g.lengths[i]
    if method == "analytic":
        f = secular_function(g, DETERMINANT)
        fn = lambda w: -dlog_det_imag_dlength(f, w, i) / (2 * math.pi)
        return _half_line(fn, g.lengths, tol, unit=1.0 / (min(g.lengths) * L))
    if method != "fd":
        raise ValueError(f"unknown force method {method!r}")

    def W(delta):
        lengths = list(g.lengths)
        lengths[i] = L * (1 + delta)
        val, err = _general_energy(secular_function(g.with_lengths(lengths)), tol)
        return val, err

    h = FD_STEP
    (wp, ep), (wm, em) = W(h), W(-h)
    (wp2, ep2), (wm2, em2) = W(h / 2), W(-h / 2)
    d1 = (wp - wm) / (2 * h * L)
    d2 = (wp2 - wm2) / (h * L)
    deriv = (4 * d2 - d1) / 3
    # roundoff from the energies plus the Richardson change as a truncation proxy
    err = (4 * (ep2 + em2) / (h * L) + (ep + em) / (2 * h * L)) / 3 + abs(d2 - d1) / 3e3
    return -deriv, err


def force_general(g, edge_id, tol=QUAD_TOL, method="fd"):
    """Force on ``edge_id``: central difference of the energy with one Richardson step.

    ``method="analytic"`` instead integrates ``-d h / dL_i`` directly.
    """
    require_valid(g)
    return _force_general(g, edge_id, tol, method)[0]


def conformal_residual(g, result):
    """|W - sum_i F_i L_i| for a result that carries all forces."""
    if result.forces is None:
        raise ValueError("result has no forces")
    total = math.fsum(result.forces[e.id] * e.length for e in g.edges)
    return abs(result.energy - total)


def star_graph(lengths, bc):
    return preset_star(len(lengths), lengths, bc)
