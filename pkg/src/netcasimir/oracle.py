"""Brute-force spectral route: real zeros, normalized modes and regulated mode sums.

Nothing here uses the imaginary-axis machinery, so agreement with
:mod:`netcasimir.casimir1d` and :mod:`netcasimir.highd` is a genuine
cross-check rather than a restatement.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from .graph import BC, Leaf, total_length
from .secular import build_matrix, det_real, secular_function, star_secular_closed
from .special import gamma_half_integer, hurwitz_half_one_minus, zeta_one_minus


class SpectrumWarning(UserWarning):
    """Zero count drifted outside the Weyl band: zeros were probably missed."""


@dataclass(frozen=True)
class NormalizedMode:
    k: float
    multiplicity: int = 1
    amplitudes: tuple = None


def _group(values, rtol=1e-11):
    """Merge values that agree to ``rtol``; returns [(value, count)] sorted."""
    out = []
    for v in sorted(values):
        if out and abs(v - out[-1][0]) <= rtol * max(1.0, v):
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return [(v, c) for v, c in out]


def _star_poles(lengths, bc, k_max):
    shift = 0.0 if bc is BC.DIRICHLET else 0.5
    poles = []
    for L in lengths:
        m_max = int(k_max * L / math.pi - shift) + 2
        poles += [(m + shift) * math.pi / L for m in range(0 if shift else 1, m_max + 1)]
    return _group(poles)


def find_zeros_star(lengths, bc, k_max):
    """Star spectrum up to ``k_max`` from the pole structure of sum cot / sum tan.

    Between consecutive distinct poles the closed form is monotone, so each
    gap holds exactly one simple zero (bracketed root search). A pole shared
    by r edges carries a zero of multiplicity r - 1 at the pole itself. The
    k = 0 Neumann constant mode carries no energy and is left out.
    """
    lengths = [float(L) for L in lengths]
    bc = BC.parse(bc)
    poles = _star_poles(lengths, bc, k_max)
    # DBC: k=0 is a pole of every cot, so the first gap is (0, p_1); NBC: sum tan
    # rises from 0 at k=0, so there is no zero below the first pole
    values = [p for p, _ in poles]
    lo = np.array(([0.0] if bc is BC.DIRICHLET else []) + values[:-1])
    hi = np.array(values if bc is BC.DIRICHLET else values[1:])
    roots = _gap_roots(lambda k: star_secular_closed(lengths, bc, k), lo, hi, bc is BC.DIRICHLET)
    zeros = [(k, 1) for k in roots.tolist()] + [(p, c - 1) for p, c in poles if c > 1]
    return [NormalizedMode(k, m) for k, m in sorted(zeros) if k <= k_max]


def _gap_roots(f, lo, hi, decreasing):
    # vectorized bisection; f is monotone between its poles and never evaluated on them
    lo, hi = lo.copy(), hi.copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        right = (f(mid) > 0) == decreasing
        lo = np.where(right, mid, lo)
        hi = np.where(right, hi, mid)
    return 0.5 * (lo + hi)


def _nullity(problem, k, tol=1e-8):
    # entries are bounded trig values (Kirchhoff rows carry 1/k), so an absolute
    # threshold is meaningful; the whole matrix may vanish at a zero (circle)
    sv = np.linalg.svd(build_matrix(problem, float(k)), compute_uv=False)
    return int(np.sum(sv <= tol)), sv[-1]


def bond_scattering(g):
    """Vertex scattering matrix S on directed bonds and the bond lengths.

    Bond ``2e`` runs from x=0 to x=L on edge e, bond ``2e+1`` back. Kirchhoff
    nodes scatter with 2/deg - delta; leaves reflect with -1 (Dirichlet) or +1
    (Neumann). The spectrum is where U(k) = S diag(exp(i k L)) has eigenvalue 1.
    """
    nb = 2 * len(g.edges)
    S = np.zeros((nb, nb))
    # bond arriving at end t of edge e, and bond leaving from it
    arriving = lambda e, t: 2 * e + (0 if t == 1 else 1)
    leaving = lambda e, t: 2 * e + (0 if t == 0 else 1)
    for e, edge in enumerate(g.edges):
        for t, end in ((0, edge.start), (1, edge.end)):
            if isinstance(end, Leaf):
                S[leaving(e, t), arriving(e, t)] = -1.0 if end.bc is BC.DIRICHLET else 1.0
    for node in g.nodes:
        ends = g.incident_ends(node)
        deg = len(ends)
        for e_in, t_in in ends:
            for e_out, t_out in ends:
                S[leaving(e_out, t_out), arriving(e_in, t_in)] = 2.0 / deg - ((e_in, t_in) == (e_out, t_out))
    bond_len = np.repeat(np.asarray(g.lengths, dtype=float), 2)
    return S, bond_len


def count_zeros(g, ks, k_ref=None):
    """Exact number of eigenvalues (with multiplicity) in (0, k] for each k in ``ks``.

    The eigenphases of U(k) increase monotonically, and their sum is known in
    closed form (det U = det S * exp(2 i k total_length)), so the number of
    phases that wrapped through 2 pi follows from the principal phases alone.
    ``k_ref`` must lie below the first eigenvalue; the default
    pi/(16 total_length) does for every Kirchhoff graph with Dirichlet or
    Neumann leaves.
    """
    S, bl = bond_scattering(g)
    total = total_length(g)
    k_ref = math.pi / (16 * total) if k_ref is None else k_ref
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    grid = np.concatenate([[k_ref], ks])
    U = S[None, :, :] * np.exp(1j * grid[:, None, None] * bl[None, None, :])
    phases = np.mod(np.angle(np.linalg.eigvals(U)), 2 * math.pi).sum(axis=1)
    wraps = (2 * total * (grid - k_ref) - (phases - phases[0])) / (2 * math.pi)
    return np.rint(wraps[1:]).astype(int)


def find_zeros_general(g, k_max, step=None):
    """Zeros of the junction determinant on (0, k_max] with multiplicities.

    Sign changes on a grid of spacing pi/(8 total_length) are refined by
    bisection. Cells where |det| has a local minimum without a sign change
    are refined by minimizing the smallest singular value of the junction
    matrix, which catches close pairs and even-order zeros alike. The
    multiplicity of every zero is the null-space dimension of the matrix
    there (kernel vectors are exactly the eigenfunctions). Finally every
    cell is audited against the exact scattering count; where roots are
    missing, found roots are searched for a near-degenerate partner and the
    cell is rescanned more finely (8x per round); cells that never agree
    raise a :class:`SpectrumWarning`.
    """
    f = secular_function(g)
    p = f.problem
    total = total_length(g)
    step = math.pi / (8 * total) if step is None else step
    # an irrational offset keeps grid points off zeros at rational multiples of pi,
    # where the exact count is ambiguous by one
    ks = np.arange(0.6180339887498949 * step, k_max, step)
    # the last cell ends exactly at k_max so counts and the returned list cover the same range
    ks = np.append(ks, k_max)
    expected = count_zeros(g, ks)
    roots = _scan(f, ks, expected)
    modes = _as_modes(p, roots, k_max)
    for level in range(5):
        found = np.searchsorted([m.k for m in modes], ks, side="right")
        mult = np.concatenate([[0], np.cumsum([m.multiplicity for m in modes])])
        bad = np.nonzero(np.diff(expected) != np.diff(mult[found]))[0]
        if not len(bad):
            break
        if level == 4:
            warnings.warn(f"{len(bad)} scan cells still disagree with the exact zero count", SpectrumWarning)
            break
        for i in bad:
            lo, hi = ks[max(i - 1, 0)], ks[min(i + 2, len(ks) - 1)]
            roots += _split_pairs(f, [m.k for m in modes if lo <= m.k <= hi])
            # overlap the neighbours so a root at a cell boundary is an interior dip;
            # each round is 8x finer, which splits ever closer pairs
            sub = np.linspace(ks[max(i - 1, 0)], ks[min(i + 2, len(ks) - 1)], 192 * 8 ** level + 1)
            roots += _scan(f, sub, count_zeros(g, sub))
        modes = _as_modes(p, roots, k_max)
    band = len(g.edges) + len(g.nodes)
    dev = weyl_deviation(modes, total)
    if dev > band + 1e-6:
        warnings.warn(f"zero count deviates from Weyl law by {dev:.1f} > {band}; zeros may be missing",
                      SpectrumWarning)
    return modes


def _as_modes(p, roots, k_max):
    return [NormalizedMode(float(k), max(1, _nullity(p, k)[0]))
            for k, _ in _group([r for r in roots if 0 < r <= k_max], rtol=1e-11)]


def _scan(f, ks, expected):
    p = f.problem
    d = det_real(f, ks)
    F = lambda k: float(det_real(f, k))
    sign = np.sign(d)
    roots = []
    flips = sign[:-1] * sign[1:] < 0
    for i in np.nonzero(flips)[0]:
        roots.append(_brent(F, ks[i], ks[i + 1]))
    roots += [float(k) for k in ks[d == 0]]
    ad = np.abs(d)
    smin = lambda k: _nullity(p, k)[1]
    last = -1
    for i in range(1, len(ks) - 1):
        if not (ad[i] <= ad[i - 1] and ad[i] <= ad[i + 1]) or flips[i - 1] or flips[i]:
            continue
        # the exact count says whether this dip hides zeros; most dips do not
        if expected[i + 1] - expected[i - 1] == 0 or i - 1 < last:
            continue
        last = i + 1
        res = optimize.minimize_scalar(smin, bounds=(ks[i - 1], ks[i + 1]), method="bounded",
                                       options={"xatol": 1e-14 * max(1.0, ks[i])})
        kmin = res.x
        smallest = res.fun
        # Brent converges slowly on the V-shaped kink; polishing is always worth the few SVDs
        kmin, smallest = _polish_kink(smin, kmin, 4e-8 * max(1.0, kmin))
        if sign[i] * F(kmin) < 0:
            roots.append(_brent(F, ks[i - 1], kmin))
            roots.append(_brent(F, kmin, ks[i + 1]))
        elif smallest < 1e-10:
            roots.append(kmin)
    return roots


def _split_pairs(f, found):
    # a near-degenerate pair (e.g. two symmetry sectors crossing) leaves the
    # second singular value small at the root that was found; its partner sits
    # about s2 / slope away, where the determinant changes sign twice
    p = f.problem
    F = lambda k: float(det_real(f, k))
    out = []
    for k0 in found:
        s2 = np.linalg.svd(build_matrix(p, k0), compute_uv=False)[-2]
        h = 1e-6 * max(1.0, k0)
        slope = max(_nullity(p, k0 + h)[1], _nullity(p, k0 - h)[1]) / h
        w = min(8 * s2 / max(slope, 1e-300), 1e-2 * max(1.0, k0))
        sub = np.linspace(k0 - w, k0 + w, 4097)
        d = det_real(f, sub)
        for j in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
            out.append(_brent(F, sub[j], sub[j + 1]))
    return out


def _brent(F, a, b):
    # near an odd-order multiple zero the determinant is flat and noisy at the
    # 1e-15 level, so accept the last bracket midpoint instead of raising
    return optimize.brentq(F, a, b, xtol=1e-14, rtol=1e-15, maxiter=200, disp=False)


def _polish_kink(smin, k, h):
    # the bounded search stops at ~sqrt(eps) relative; near a zero smin is
    # |slope (k - k*)|, so the lines through two straddling points meet at k*
    best = (k, smin(k))
    for _ in range(6):
        a, b = k - h, k + h
        sa, sb = smin(a), smin(b)
        if sa + sb == 0:
            break
        k = (sa * b + sb * a) / (sa + sb)
        sk = smin(k)
        if sk < best[1]:
            best = (k, sk)
        if sk < 1e-14:
            break
        h = max(2 * sk / max((sa + sb) / (2 * h), 1e-300), 4 * np.finfo(float).eps * abs(k))
    return best


def weyl_deviation(modes, total, k_grid=None):
    """max_k |N(k) - total * k / pi| over the zeros (and optional extra k values)."""
    ks = np.array([m.k for m in modes])
    counts = np.cumsum([m.multiplicity for m in modes])
    weyl = total * ks / math.pi
    dev = 0.0
    if len(ks):
        # just above and just below each zero
        dev = max(np.max(np.abs(counts - weyl)), np.max(np.abs(counts - np.array([m.multiplicity for m in modes]) - weyl)))
    if k_grid is not None:
        for k in np.atleast_1d(k_grid):
            n = counts[ks <= k][-1] if np.any(ks <= k) else 0
            dev = max(dev, abs(n - total * k / math.pi))
    return float(dev)


def normalize_mode(lengths, bc, k):
    """Amplitudes a_i making sum_i int_0^{L_i} phi_i^2 = 1 for a star eigenmode.

    phi_i = a_i sin(k (x - L_i)) (Dirichlet) or a_i cos(k (x - L_i)) (Neumann).
    """
    lengths = np.asarray(lengths, dtype=float)
    bc = BC.parse(bc)
    t = np.sin(k * lengths) if bc is BC.DIRICHLET else np.cos(k * lengths)
    if np.any(np.abs(t) < 1e-12):
        raise ValueError("k sits on a pole of csc/sec; the closed-form amplitudes do not apply")
    inv = 1.0 / t
    amps = math.sqrt(2.0) * inv / math.sqrt(float(np.sum(lengths * inv ** 2)))
    return NormalizedMode(float(k), 1, tuple(amps.tolist()))


def mode_norm(lengths, bc, mode, points=200):
    """sum_i int phi_i^2 dx by Gauss-Legendre quadrature on every edge."""
    x, w = np.polynomial.legendre.leggauss(points)
    total = 0.0
    shape = np.sin if BC.parse(bc) is BC.DIRICHLET else np.cos
    for L, a in zip(lengths, mode.amplitudes):
        xs = 0.5 * L * (x + 1)
        total += 0.5 * L * np.sum(w * (a * shape(mode.k * (xs - L))) ** 2)
    return float(total)


def regulated_energy(modes, eps, power=1):
    """W(eps) = sum_m mult * k_m^power / 2 * exp(-eps k_m)."""
    ks = np.array([m.k for m in modes])
    mult = np.array([m.multiplicity for m in modes], dtype=float)
    return float(np.sum(mult * 0.5 * ks ** power * np.exp(-eps * ks)))


@dataclass(frozen=True)
class RegulatedSum:
    eps: tuple
    values: tuple
    finite_part: float
    residual: float


def extrapolate_finite_part(eps, values, power=1, extra_terms=1):
    """Least-squares fit of W(eps) = a / eps^(power+1) + b + c eps^2 (+ d eps^4 ...).

    Exponential regulators of symmetric spectra produce no odd powers of eps,
    so the constant ``b`` is the regularized sum.
    """
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    cols = [eps ** -(power + 1), np.ones_like(eps)] + [eps ** (2 * j) for j in range(1, extra_terms + 1)]
    A = np.stack(cols, axis=1)
    # column scaling keeps the normal equations well conditioned
    scale = np.max(np.abs(A), axis=0)
    coef, *_ = np.linalg.lstsq(A / scale, values, rcond=None)
    coef = coef / scale
    residual = float(np.max(np.abs(A @ coef - values)))
    b = float(coef[1])
    if residual > 1e-4 * max(abs(b), 1e-12) and residual > 1e-10:
        warnings.warn(f"regulated-sum fit residual {residual:.2e} is large relative to b={b:.3e}", SpectrumWarning)
    return RegulatedSum(tuple(eps.tolist()), tuple(values.tolist()), b, residual)


# geometric from 0.2 to 0.025 (ratio sqrt 2); with terms up to eps^6 the fit
# truncation sits below 1e-10 on every preset
EPS_FACTORS = tuple(0.2 * 2.0 ** (-j / 2) for j in range(7))


def mode_sum_energy(modes_or_fn, min_length, eps_factors=EPS_FACTORS, power=1, extra_terms=3):
    """Finite part of the regulated zero-point sum.

    ``modes_or_fn`` is a list of modes complete up to at least
    (40 + 10 (power - 1))/eps_min, or a callable ``k_max -> modes``.
    """
    eps = [f * min_length for f in eps_factors]
    # the neglected tail is ~ (eps k)^power e^(-eps k) / eps^(power+1)
    k_max = (40.0 + 10.0 * (power - 1)) / min(eps)
    modes = modes_or_fn(k_max) if callable(modes_or_fn) else modes_or_fn
    values = [regulated_energy(modes, e, power) for e in eps]
    return extrapolate_finite_part(eps, values, power, extra_terms)


def pressure_appendix(d, lengths, bc, i, with_error=False):
    """Even-d pressure on edge ``i`` from the pole/contour split of the mode sum.

    Pole part: 2^(1-d) pi^((d-1)/2) Gamma((3-d)/2) zeta / L_i^d with zeta(1-d)
    (Dirichlet) or zeta(1-d, 1/2) (Neumann); contour part carries the factor
    (-1)^(d/2) 2^(1-d) pi^(-(d+1)/2) Gamma((3-d)/2). Odd d would need a
    further regularization and is rejected.
    """
    if int(d) != d or d < 2 or d % 2:
        raise ValueError("the pole/contour pressure formula holds for even d only")
    d = int(d)
    lengths = [float(L) for L in lengths]
    bc = BC.parse(bc)
    Li = lengths[i]
    g3 = gamma_half_integer((3 - d) / 2)
    if bc is BC.DIRICHLET:
        zeta = zeta_one_minus(d)
        kern = lambda w: (w ** (d - 1) / np.sinh(w * Li) ** 2) / sum(1.0 / np.tanh(w * L) for L in lengths)
        sign = -1.0
    else:
        zeta = hurwitz_half_one_minus(d)
        kern = lambda w: (w ** (d - 1) / np.cosh(w * Li) ** 2) / sum(np.tanh(w * L) for L in lengths)
        sign = 1.0
    pole = 2.0 ** (1 - d) * math.pi ** ((d - 1) / 2) * g3 * zeta / Li ** d
    # QUADPACK on purpose: independent of the in-house Gauss-Kronrod engine
    cut = 60.0 / min(lengths)
    pts = sorted({1.0 / L for L in lengths if 1.0 / L < cut})
    with np.errstate(over="ignore"):
        val, err = integrate.quad(kern, 0.0, cut, points=pts, limit=500, epsabs=1e-14, epsrel=1e-12)
    factor = 2.0 ** (1 - d) * math.pi ** (-(d + 1) / 2) * abs(g3)
    contour = (-1) ** (d // 2) * 2.0 ** (1 - d) * math.pi ** (-(d + 1) / 2) * g3 * val
    P = pole + sign * contour
    return (float(P), float(factor * err)) if with_error else float(P)


def pressure_reference(d, lengths, bc, i, with_error=False):
    """Reference pressure for any d in [2, 8], independent of the engine code paths.

    Even d uses :func:`pressure_appendix`. Odd d has no pole/contour form, so
    the plate-plus-kernel expression is evaluated with scipy.special
    coefficients and QUADPACK instead.
    """
    if d % 2 == 0:
        return pressure_appendix(d, lengths, bc, i, with_error)
    from scipy import special

    lengths = [float(L) for L in lengths]
    bc = BC.parse(bc)
    Li = lengths[i]
    # zeta(1-d) Gamma((1-d)/2) through the reflection formula, finite at odd d
    zg = 2.0 * (2 * math.pi) ** -d * math.pi * special.gamma(d) * special.zeta(d) / special.gamma((d + 1) / 2)
    c = -(2.0 ** -d) * math.pi ** ((d - 1) / 2) * zg
    K = 2.0 ** -d * math.pi ** ((1 - d) / 2) / special.gamma((d + 1) / 2)
    if bc is BC.DIRICHLET:
        c_bc, sign = c, 1.0
        kern = lambda w: w ** (d - 1) / np.sinh(w * Li) ** 2 / sum(1.0 / np.tanh(w * L) for L in lengths)
    else:
        c_bc, sign = c * (2.0 ** (1 - d) - 1.0), -1.0
        kern = lambda w: w ** (d - 1) / np.cosh(w * Li) ** 2 / sum(np.tanh(w * L) for L in lengths)
    cut = 60.0 / min(lengths)
    pts = sorted({1.0 / L for L in lengths if 1.0 / L < cut})
    with np.errstate(over="ignore"):
        val, err = integrate.quad(kern, 0.0, cut, points=pts, limit=500, epsabs=1e-14, epsrel=1e-12)
    P = (d - 1) * (c_bc / Li ** d + sign * K * val)
    return (float(P), float((d - 1) * K * err)) if with_error else float(P)
