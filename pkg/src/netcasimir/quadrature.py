"""Adaptive Gauss-Kronrod (7/15) quadrature on [0, inf) with batched integrands.

The half-line is mapped by ``w = t / (s (1 - t))`` onto ``t in (0, 1)``.
Every refinement sweep evaluates all new panels in one vectorized call, so
integrands that assemble a stack of small matrices stay cheap. Panels are
bisected in a fixed order, which makes results bit-reproducible.
"""
import numpy as np

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (xgk[1], xgk[3], xgk[5], xgk[7])
for _j, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS[_j] = _w
    GAUSS[14 - _j] = _w
GAUSS[7] = _WG[3]


class QuadratureError(RuntimeError):
    """Adaptive refinement hit the panel budget before reaching the tolerance."""

    def __init__(self, message, value, error, panels):
        super().__init__(message)
        self.value = value
        self.error = error
        self.panels = panels


def _panel_rules(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k = half * (fx @ KRONROD)
    g = half * (fx @ GAUSS)
    return k, np.abs(k - g)


def integrate(f, a, b, breakpoints=(), tol=1e-12, max_panels=4000):
    """Integral of vectorized ``f`` over the finite interval [a, b].

    A panel ``[x0, x1]`` is accepted when its error estimate is below
    ``tol * (x1 - x0) / (b - a)`` (or below ``1e-4 * tol`` outright), so
    accepted errors sum to roughly ``tol``.
    Returns ``(value, error_estimate)``.
    """
    edges = np.unique(np.clip(np.concatenate([[a, b], np.asarray(breakpoints, float)]), a, b))
    lo, hi = edges[:-1], edges[1:]
    width = b - a
    done_val, done_err = [], []
    panels = 0
    while lo.size:
        k, err = _panel_rules(f, lo, hi)
        panels += lo.size
        ok = err <= tol * (hi - lo) / width
        # rounding noise near integrable endpoint behaviour never meets the
        # relative-width test; such panels are accepted once their error is negligible
        ok |= err <= 1e-4 * tol
        ok |= (hi - lo) <= 1e-15 * np.maximum(1.0, np.abs(lo))
        done_val.append(k[ok])
        done_err.append(err[ok])
        lo, hi = lo[~ok], hi[~ok]
        if lo.size and panels + 2 * lo.size > max_panels:
            value = float(np.sum(np.concatenate(done_val)) + np.sum(k[~ok]))
            error = float(np.sum(np.concatenate(done_err)) + np.sum(err[~ok]))
            raise QuadratureError(f"no convergence after {panels} panels (error {error:.3g})", value, error, panels)
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
    vals = np.concatenate(done_val)
    errs = np.concatenate(done_err)
    return float(np.sum(np.sort(vals))), float(np.sum(errs))


def integrate_half_line(f, scale=1.0, breakpoints=(), tol=1e-12, max_panels=4000):
    """Integral of vectorized ``f`` over ``0 <= w < inf``.

    ``scale`` sets the frequency ``1/scale`` mapped to ``t = 1/2``; choose the
    decay length of the integrand (e.g. the shortest edge). ``breakpoints``
    are frequencies where the integrand changes character (e.g. every 1/L_i).
    """

    def g(t):
        one_minus = 1.0 - t
        w = t / (scale * one_minus)
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.asarray(f(w), dtype=float) / (scale * one_minus ** 2)
        return np.where(np.isfinite(w), out, 0.0)

    tb = [scale * w / (1.0 + scale * w) for w in breakpoints if w > 0 and np.isfinite(w)]
    return integrate(g, 0.0, 1.0, breakpoints=tb, tol=tol, max_panels=max_panels)
