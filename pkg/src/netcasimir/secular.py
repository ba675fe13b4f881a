"""Junction-condition matrices and the secular function of a metric graph.

Real axis
    Each edge carries the trigonometric ansatz: ``a sin(kx) + b cos(kx)`` on
    interior edges, ``a sin(k(x-L))`` / ``a cos(k(x-L))`` on edges with a
    Dirichlet / Neumann leaf at ``x = L`` (mirrored when the leaf sits at
    ``x = 0``). Derivative (Kirchhoff) rows are divided by ``k`` so every
    entry stays analytic at ``k = 0``.

Imaginary axis, ``k = i w``
    The trigonometric basis grows like ``exp(w x)``. Each edge is instead
    expanded in the decaying pair ``exp(-w x)``, ``exp(-w (L - x))``; the
    change of basis costs exactly a factor ``exp(w L)`` per edge (times a
    constant), so ``log |det|`` in the decaying basis *is*
    ``log |Delta(i w)| - w * total_length`` up to an additive constant. All
    entries are polynomials in ``E = exp(-w L)`` bounded by 2.
"""
from dataclasses import dataclass
import math

import numpy as np

from .graph import BC, Leaf, require_valid, total_length

INTERIOR = "interior"
LEAF_AT_END = "leaf_end"      # node at x=0, leaf at x=L
LEAF_AT_START = "leaf_start"  # leaf at x=0, node at x=L
LEAF_LEAF = "leaf_leaf"       # strip: no internal node at all


@dataclass(frozen=True)
class EdgeBasis:
    edge: int
    kind: str
    slot: int
    bc: BC = None
    far_bc: BC = None  # only for LEAF_LEAF: condition imposed at x=L

    @property
    def nslots(self):
        return 2 if self.kind == INTERIOR else 1


@dataclass(frozen=True)
class Term:
    edge: int
    end: int      # 0 -> x=0, 1 -> x=L
    what: str     # "value", "deriv" (divided by k or w) or "bc"
    weight: float


@dataclass(frozen=True)
class Row:
    kind: str     # "continuity", "kirchhoff" or "leaf"
    node: object
    terms: tuple


@dataclass(frozen=True)
class SecularProblem:
    graph: object
    bases: tuple
    rows: tuple

    @property
    def size(self):
        return len(self.rows)

    @property
    def coefficient_labels(self):
        labels = []
        for b in self.bases:
            i = b.edge + 1
            labels += [f"a{i}", f"b{i}"] if b.kind == INTERIOR else [f"a{i}"]
        return labels


def plan_problem(g):
    """Assign per-edge ansatz slots and the row plan (continuity chain + Kirchhoff per node).

    Coefficients are ordered by edge, ``a`` before ``b``. Continuity rows read
    ``phi_prev - phi_next`` along the node's incident ends in edge order;
    the Kirchhoff row sums outward normal derivatives (``+d/dx`` at ``x=0``,
    ``-d/dx`` at ``x=L``).
    """
    require_valid(g)
    bases = []
    slot = 0
    for i, e in enumerate(g.edges):
        s_leaf, e_leaf = isinstance(e.start, Leaf), isinstance(e.end, Leaf)
        if s_leaf and e_leaf:
            b = EdgeBasis(i, LEAF_LEAF, slot, bc=e.start.bc, far_bc=e.end.bc)
        elif e_leaf:
            b = EdgeBasis(i, LEAF_AT_END, slot, bc=e.end.bc)
        elif s_leaf:
            b = EdgeBasis(i, LEAF_AT_START, slot, bc=e.start.bc)
        else:
            b = EdgeBasis(i, INTERIOR, slot)
        bases.append(b)
        slot += b.nslots

    rows = []
    for node in g.nodes:
        ends = g.incident_ends(node)
        for (i, a), (j, c) in zip(ends, ends[1:]):
            rows.append(Row("continuity", node, (Term(i, a, "value", 1.0), Term(j, c, "value", -1.0))))
        rows.append(Row("kirchhoff", node, tuple(Term(i, a, "deriv", 1.0 if a == 0 else -1.0) for i, a in ends)))
    for b in bases:
        if b.kind == LEAF_LEAF:
            rows.append(Row("leaf", None, (Term(b.edge, 1, "bc", 1.0),)))
    if len(rows) != slot:
        raise AssertionError("row plan is not square")
    return SecularProblem(g, tuple(bases), tuple(rows))


# --- real / complex axis: trigonometric basis --------------------------------

def _trig_end(basis, s, c, end, what):
    """Entries of one edge-end for the trigonometric ansatz, as a list over slots."""
    kind = basis.kind
    if kind == INTERIOR:
        if what == "value":
            return [0 * s, 1 + 0 * s] if end == 0 else [s, c]
        return [1 + 0 * s, 0 * s] if end == 0 else [c, -s]
    if kind == LEAF_AT_END:  # node end is x=0
        if basis.bc is BC.DIRICHLET:
            return [-s] if what == "value" else [c]
        return [c] if what == "value" else [s]
    if kind == LEAF_AT_START:  # node end is x=L
        if basis.bc is BC.DIRICHLET:
            return [s] if what == "value" else [c]
        return [c] if what == "value" else [-s]
    # strip: ansatz fixed by the x=0 leaf, row imposes the x=L condition
    if basis.far_bc is BC.DIRICHLET:
        return [s] if basis.bc is BC.DIRICHLET else [c]
    return [c] if basis.bc is BC.DIRICHLET else [-s]


def build_matrix(p, k):
    """Junction matrix M(k) in the trigonometric basis.

    ``k`` may be a scalar or an array (real or complex); array input returns a
    stack of shape ``k.shape + (U, U)``.
    """
    k = np.asarray(k)
    dtype = complex if np.iscomplexobj(k) else float
    lengths = np.array(p.graph.lengths)
    M = np.zeros(k.shape + (p.size, p.size), dtype=dtype)
    for r, row in enumerate(p.rows):
        for t in row.terms:
            b = p.bases[t.edge]
            kl = k * lengths[t.edge]
            vals = _trig_end(b, np.sin(kl), np.cos(kl), t.end, t.what)
            for n, v in enumerate(vals):
                M[..., r, b.slot + n] += t.weight * v
    return M


# --- imaginary axis: decaying basis ------------------------------------------

def _decay_end(basis, E, end, what):
    """Entries f(E) and df/dE for one edge-end in the decaying basis."""
    one, zero = 1 + 0 * E, 0 * E
    kind = basis.kind
    if kind == INTERIOR:  # slots: exp(-w x), exp(-w (L - x))
        if end == 0:
            if what == "value":
                return [one, E], [zero, one]
            return [-one, E], [zero, one]
        if what == "value":
            return [E, one], [one, zero]
        return [-E, one], [-one, zero]
    E2 = E * E
    if kind == LEAF_AT_END:
        if basis.bc is BC.DIRICHLET:
            return ([1 - E2], [-2 * E]) if what == "value" else ([-1 - E2], [-2 * E])
        return ([1 + E2], [2 * E]) if what == "value" else ([-1 + E2], [2 * E])
    if kind == LEAF_AT_START:
        if basis.bc is BC.DIRICHLET:
            return ([1 - E2], [-2 * E]) if what == "value" else ([1 + E2], [2 * E])
        return ([1 + E2], [2 * E]) if what == "value" else ([1 - E2], [-2 * E])
    same = basis.bc is basis.far_bc
    return ([1 - E2], [-2 * E]) if same else ([1 + E2], [2 * E])


def _decay_matrices(p, w, lengths=None, want=()):
    """Decaying-basis matrix at ``w`` plus optional derivatives.

    ``want`` may contain ``"w"`` (d/dw) and/or edge indices ``i`` (d/dL_i).
    """
    w = np.asarray(w, dtype=float)
    lengths = np.array(p.graph.lengths if lengths is None else lengths, dtype=float)
    shape = w.shape + (p.size, p.size)
    M = np.zeros(shape)
    dM = {key: np.zeros(shape) for key in want}
    for r, row in enumerate(p.rows):
        for t in row.terms:
            b = p.bases[t.edge]
            L = lengths[t.edge]
            E = np.exp(-w * L)
            vals, dvals = _decay_end(b, E, t.end, t.what)
            for n, (v, dv) in enumerate(zip(vals, dvals)):
                col = b.slot + n
                M[..., r, col] += t.weight * v
                for key in want:
                    if key == "w":
                        dM[key][..., r, col] += t.weight * dv * (-L * E)
                    elif key == t.edge:
                        dM[key][..., r, col] += t.weight * dv * (-w * E)
    return M, dM


def build_matrix_imag(p, w):
    """Bounded junction matrix on the imaginary axis ``k = i w`` (decaying basis)."""
    return _decay_matrices(p, w)[0]


# --- secular functions --------------------------------------------------------

DETERMINANT = "determinant"
STAR_CLOSED = "star_closed"


def _coth(x):
    q = np.exp(-2 * x)
    return (1 + q) / -np.expm1(-2 * x)


def _csch2(x):
    q = np.exp(-2 * x)
    return 4 * q / np.expm1(-2 * x) ** 2


def _tanh(x):
    return np.tanh(x)


def _sech2(x):
    q = np.exp(-2 * x)
    return 4 * q / (1 + q) ** 2


@dataclass(frozen=True)
class SecularFunction:
    problem: SecularProblem
    variant: str = DETERMINANT

    @property
    def graph(self):
        return self.problem.graph


def secular_function(g, variant=DETERMINANT):
    p = plan_problem(g)
    if variant == STAR_CLOSED and g.star_data() is None:
        raise ValueError("closed-form secular function needs a uniform-bc star")
    return SecularFunction(p, variant)


def star_secular_closed(lengths, bc, k):
    """Sum of cot(k L_i) (Dirichlet leaves) or tan(k L_i) (Neumann leaves).

    Exactly at a pole the result is a signed ``inf``.
    """
    bc = BC.parse(bc)
    k = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        total = np.zeros_like(k)
        for L in lengths:
            x = k * L
            if bc is BC.DIRICHLET:
                s = np.sin(x)
                term = np.where(s == 0, np.copysign(np.inf, np.cos(x)), np.cos(x) / np.where(s == 0, 1, s))
            else:
                c = np.cos(x)
                term = np.where(c == 0, np.copysign(np.inf, np.sin(x)), np.sin(x) / np.where(c == 0, 1, c))
            total = total + term
    return total if total.ndim else float(total)


def _star_polynomial(lengths, bc, k):
    # sum_i cos(kL_i) prod_{j!=i} sin(kL_j) for Dirichlet, sin <-> cos for Neumann
    k = np.asarray(k, dtype=float)
    a = [np.cos(k * L) for L in lengths]
    b = [np.sin(k * L) for L in lengths]
    if BC.parse(bc) is BC.NEUMANN:
        a, b = b, a
    total = 0
    for i in range(len(lengths)):
        term = a[i]
        for j in range(len(lengths)):
            if j != i:
                term = term * b[j]
        total = total + term
    return total


def det_real(f, kappa):
    """Pole-free secular function on the real axis.

    Zeros are the spectrum; only signs and zeros carry meaning. For the
    closed-form star variant this is ``prod sin(kL) * sum cot(kL)`` (resp.
    ``prod cos * sum tan``), which agrees with the determinant up to sign.
    """
    if f.variant == STAR_CLOSED:
        lengths, bc = f.graph.star_data()
        return _star_polynomial(lengths, bc, kappa)
    M = build_matrix(f.problem, np.asarray(kappa, dtype=float))
    return np.linalg.det(M) if M.shape[-1] else np.ones(M.shape[:-2])


def log_det_imag(f, w):
    """h(w) = log|Delta(i w)| - w * total_length   (up to an additive constant).

    Bounded for all w > 0; tends to a constant as w -> infinity.
    """
    w = np.asarray(w, dtype=float)
    if f.variant == STAR_CLOSED:
        lengths, bc = f.graph.star_data()
        out = 0.0
        for L in lengths:
            q = np.exp(-2 * w * L)
            out = out + np.log1p(-q if bc is BC.DIRICHLET else q)
        inner = sum(_coth(w * L) if bc is BC.DIRICHLET else _tanh(w * L) for L in lengths)
        out = out + np.log(np.abs(inner))
    else:
        M = build_matrix_imag(f.problem, w)
        _, out = np.linalg.slogdet(M)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite log-determinant on the imaginary axis")
    return out


def log_det_imag_limit(f):
    """lim_{w -> inf} h(w)."""
    if f.variant == STAR_CLOSED:
        lengths, bc = f.graph.star_data()
        return math.log(len(lengths))
    M = build_matrix_imag(f.problem, np.inf)
    return float(np.linalg.slogdet(M)[1])


def dlog_det_imag(f, w):
    """h'(w): derivative of the normalized log-determinant (decays exponentially)."""
    w = np.asarray(w, dtype=float)
    if f.variant == STAR_CLOSED:
        lengths, bc = f.graph.star_data()
        if bc is BC.DIRICHLET:
            # d/dw sum log(1 - exp(-2wL)) + d/dw log sum coth
            head = sum(2 * L / np.expm1(2 * w * L) for L in lengths)
            num = sum(-L * _csch2(w * L) for L in lengths)
            den = sum(_coth(w * L) for L in lengths)
        else:
            head = sum(-2 * L / (np.exp(2 * w * L) + 1) for L in lengths)
            num = sum(L * _sech2(w * L) for L in lengths)
            den = sum(_tanh(w * L) for L in lengths)
        return head + num / den
    M, dM = _decay_matrices(f.problem, w, want=("w",))
    return np.trace(np.linalg.solve(M, dM["w"]), axis1=-2, axis2=-1)


def log_derivative_imag(f, w):
    """d/dw log Delta(i w) in the determinant normalization: total_length + h'(w)."""
    return total_length(f.graph) + dlog_det_imag(f, w)


def dlog_det_imag_dlength(f, w, edge):
    """d h / d L_edge at fixed w, via tr(M^-1 dM/dL)."""
    M, dM = _decay_matrices(f.problem, w, want=(edge,))
    return np.trace(np.linalg.solve(M, dM[edge]), axis1=-2, axis2=-1)
