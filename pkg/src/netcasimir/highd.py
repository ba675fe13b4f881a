"""Star networks in 1+(d-1) dimensions: energy per transverse area and pressures.

The transverse momenta are integrated out, leaving the parallel-plate term
``c(d, bc) * sum 1/L_i^(d-1)`` and a single radial integral of the same
star kernel as in two dimensions, weighted by ``w^(d-1)``.
"""
from dataclasses import dataclass, field
import math

from .casimir1d import _bracket, _check_star, _half_line, _star_denominator, QUAD_TOL
from .graph import BC
from .special import gamma_half_integer, zeta_int

MIN_DIM, MAX_DIM = 2, 8


@dataclass
class HighDResult:
    dimension: int
    energy_per_area: float
    quad_error: float = 0.0
    pressures: dict = field(default=None)


def _check_dim(d):
    if int(d) != d or not MIN_DIM <= d <= MAX_DIM:
        raise ValueError(f"dimension must be an integer in [{MIN_DIM}, {MAX_DIM}], got {d}")
    return int(d)


def plate_coefficient(d, bc):
    """c(d, bc) with W_plates/A = c * sum_i 1/L_i^(d-1).

    The textbook form ``-2^-d pi^((d-1)/2) zeta(1-d) Gamma((1-d)/2)`` is 0 * inf
    at odd d; the functional equation turns ``zeta(1-d) Gamma((1-d)/2)`` into
    ``2 (2 pi)^-d pi Gamma(d) zeta(d) / Gamma((d+1)/2)``, finite for every d.
    Neumann leaves use zeta(1-d, 1/2) = (2^(1-d) - 1) zeta(1-d).
    """
    d = _check_dim(d)
    zeta_gamma = 2.0 * (2 * math.pi) ** -d * math.pi * math.gamma(d) * zeta_int(d) / gamma_half_integer((d + 1) / 2)
    c = -(2.0 ** -d) * math.pi ** ((d - 1) / 2) * zeta_gamma
    if BC.parse(bc) is BC.NEUMANN:
        c *= 2.0 ** (1 - d) - 1.0
    return c


def kernel_prefactor(d):
    """2^-d pi^((1-d)/2) / Gamma((d+1)/2); equals 1/(2 pi) at d = 2."""
    d = _check_dim(d)
    return 2.0 ** -d * math.pi ** ((1 - d) / 2) / gamma_half_integer((d + 1) / 2)


def _energy_integral(d, lengths, bc, tol):
    def f(w):
        num = sum(L * _bracket(bc, w * L) for L in lengths)
        return w ** (d - 1) * num / _star_denominator(lengths, bc, w)

    return _half_line(f, lengths, tol, unit=min(lengths) ** (1 - d))


def _pressure_integral(d, lengths, bc, i, tol):
    Li = lengths[i]

    def f(w):
        return w ** (d - 1) * _bracket(bc, w * Li) / _star_denominator(lengths, bc, w)

    return _half_line(f, lengths, tol, unit=min(lengths) ** (1 - d) / Li)


def pressure_star(d, lengths, bc, i, tol=QUAD_TOL, with_error=False):
    """Pressure P_i = -(dW/dL_i)/A on edge ``i`` (0-based)."""
    d = _check_dim(d)
    lengths, bc = _check_star(lengths, bc)
    if not 0 <= i < len(lengths):
        raise IndexError(f"edge index {i} out of range")
    sign = 1.0 if bc is BC.DIRICHLET else -1.0
    val, err = _pressure_integral(d, lengths, bc, i, tol)
    K = kernel_prefactor(d)
    P = (d - 1) * (plate_coefficient(d, bc) / lengths[i] ** d + sign * K * val)
    return (P, (d - 1) * K * err) if with_error else P


def energy_per_area_star(d, lengths, bc, with_pressures=False, tol=QUAD_TOL):
    d = _check_dim(d)
    lengths, bc = _check_star(lengths, bc)
    sign = 1.0 if bc is BC.DIRICHLET else -1.0
    val, err = _energy_integral(d, lengths, bc, tol)
    K = kernel_prefactor(d)
    W = plate_coefficient(d, bc) * math.fsum(L ** (1 - d) for L in lengths) + sign * K * val
    res = HighDResult(d, W, K * err)
    if with_pressures:
        res.pressures = {f"E{i + 1}": pressure_star(d, lengths, bc, i, tol) for i in range(len(lengths))}
    return res


def conformal_residual_highd(d, lengths, bc, tol=QUAD_TOL):
    """|(d-1) W/A - sum_i P_i L_i|."""
    res = energy_per_area_star(d, lengths, bc, with_pressures=True, tol=tol)
    total = math.fsum(res.pressures[f"E{i + 1}"] * L for i, L in enumerate(lengths))
    return abs((d - 1) * res.energy_per_area - total)
