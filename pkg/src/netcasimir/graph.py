"""Metric graphs with Kirchhoff nodes and Dirichlet/Neumann leaves.

Each edge carries its own coordinate ``0 <= x <= length``; ``start`` is the
endpoint at ``x = 0`` and ``end`` the endpoint at ``x = length``. An endpoint
is either the id of an internal node or a :class:`Leaf` with a boundary
condition.
"""
from dataclasses import dataclass, field
from enum import Enum
import math


class BC(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"d": cls.DIRICHLET, "dbc": cls.DIRICHLET, "n": cls.NEUMANN, "nbc": cls.NEUMANN}
        if key in aliases:
            return aliases[key]
        return cls(key)


@dataclass(frozen=True)
class Leaf:
    bc: BC

    def __post_init__(self):
        object.__setattr__(self, "bc", BC.parse(self.bc))


@dataclass(frozen=True)
class EdgeSpec:
    id: str
    start: object  # node id (str) or Leaf
    end: object
    length: float

    @property
    def leaf_count(self):
        return isinstance(self.start, Leaf) + isinstance(self.end, Leaf)

    @property
    def is_self_loop(self):
        return (not isinstance(self.start, Leaf)) and self.start == self.end

    def with_length(self, length):
        return EdgeSpec(self.id, self.start, self.end, float(length))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "\n".join(self.violations)


class GraphError(ValueError):
    """Raised when an operation needs a well-posed graph and gets a broken one."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid graph: " + "; ".join(report.violations))


@dataclass(frozen=True)
class MetricGraph:
    nodes: tuple
    edges: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def lengths(self):
        return [e.length for e in self.edges]

    @property
    def edge_ids(self):
        return [e.id for e in self.edges]

    def edge_index(self, edge_id):
        for i, e in enumerate(self.edges):
            if e.id == edge_id:
                return i
        raise KeyError(f"no edge {edge_id!r}")

    def degree(self, node):
        return sum((e.start == node) + (e.end == node) for e in self.edges)

    def incident_ends(self, node):
        """Edge-ends touching ``node`` as ``(edge_index, end)`` with end 0 (x=0) or 1 (x=L)."""
        out = []
        for i, e in enumerate(self.edges):
            if e.start == node:
                out.append((i, 0))
            if e.end == node:
                out.append((i, 1))
        return out

    def with_lengths(self, lengths):
        if len(lengths) != len(self.edges):
            raise ValueError("need one length per edge")
        edges = [e.with_length(L) for e, L in zip(self.edges, lengths)]
        return MetricGraph(self.nodes, edges, self.name)

    def scaled(self, factor):
        return self.with_lengths([factor * L for L in self.lengths])

    def star_data(self):
        """Return ``(lengths, bc)`` if this is a star with uniform leaf bc, else ``None``.

        Either edge orientation is accepted; the star formulas only see lengths.
        """
        if len(self.nodes) != 1 or len(self.edges) < 2:
            return None
        (node,) = self.nodes
        bcs = set()
        for e in self.edges:
            ends = {e.start, e.end}
            leaf = e.end if isinstance(e.end, Leaf) else e.start
            if node not in ends or not isinstance(leaf, Leaf):
                return None
            bcs.add(leaf.bc)
        if len(bcs) != 1:
            return None
        return self.lengths, bcs.pop()


def unknown_count(g):
    return sum(2 - e.leaf_count for e in g.edges)


def constraint_count(g):
    return sum(g.degree(n) for n in g.nodes)


def validate_graph(g):
    """Check every structural invariant; violations are returned, not raised."""
    problems = []
    node_set = set(g.nodes)
    if len(node_set) != len(g.nodes):
        problems.append("duplicate node ids")
    ids = [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        problems.append("duplicate edge ids")
    if not g.edges:
        problems.append("graph has no edges")
    for e in g.edges:
        if not (isinstance(e.length, (int, float)) and math.isfinite(e.length) and e.length > 0):
            problems.append(f"edge {e.id}: non-positive length {e.length!r}")
        for side in (e.start, e.end):
            if not isinstance(side, Leaf) and side not in node_set:
                problems.append(f"edge {e.id}: unknown node {side!r}")
    for n in g.nodes:
        if g.degree(n) < 1:
            problems.append(f"node {n}: degree 0")
    if g.edges and not _connected(g):
        problems.append("graph is not connected")
    u, c = unknown_count(g), constraint_count(g)
    if u != c:
        problems.append(f"unknown count {u} != constraint count {c}")
    return ValidationReport(tuple(problems))


def _connected(g):
    # union-find over edges; two edges are linked when they share a node
    parent = list(range(len(g.edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for i, e in enumerate(g.edges):
        for side in (e.start, e.end):
            if isinstance(side, Leaf):
                continue
            if side in owner:
                parent[find(i)] = find(owner[side])
            else:
                owner[side] = i
    roots = {find(i) for i in range(len(g.edges))}
    isolated = [n for n in g.nodes if n not in owner]
    return len(roots) == 1 and not isolated


def require_valid(g):
    report = validate_graph(g)
    if not report.ok:
        raise GraphError(report)
    return g


def total_length(g):
    return math.fsum(g.lengths)


def _lengths(lengths, count):
    lengths = [float(L) for L in lengths]
    if len(lengths) != count:
        raise ValueError(f"expected {count} lengths, got {len(lengths)}")
    return lengths


def preset_star(n, lengths, bc):
    """n edges glued at one node N; edge i runs from N (x=0) to a leaf (x=L_i)."""
    if n < 2:
        raise ValueError("a star needs n >= 2 edges")
    lengths = _lengths(lengths, n)
    leaf = Leaf(BC.parse(bc))
    edges = [EdgeSpec(f"E{i + 1}", "N", leaf, L) for i, L in enumerate(lengths)]
    return MetricGraph(("N",), edges, name=f"star{n}")


def preset_tree5(lengths, bc):
    """Two nodes A, B joined by E3; E1, E2 hang off A and E4, E5 off B.

    Coordinates: x=0 at A on E1, E2, E3; x=L at B on E3, E4, E5.
    """
    L = _lengths(lengths, 5)
    leaf = Leaf(BC.parse(bc))
    edges = [
        EdgeSpec("E1", "A", leaf, L[0]),
        EdgeSpec("E2", "A", leaf, L[1]),
        EdgeSpec("E3", "A", "B", L[2]),
        EdgeSpec("E4", leaf, "B", L[3]),
        EdgeSpec("E5", leaf, "B", L[4]),
    ]
    return MetricGraph(("A", "B"), edges, name="tree5")


def preset_loop4(lengths, bc):
    """E1 from A to a leaf, E2 and E3 both from A to B (the loop), E4 from a leaf to B."""
    L = _lengths(lengths, 4)
    leaf = Leaf(BC.parse(bc))
    edges = [
        EdgeSpec("E1", "A", leaf, L[0]),
        EdgeSpec("E2", "A", "B", L[1]),
        EdgeSpec("E3", "A", "B", L[2]),
        EdgeSpec("E4", leaf, "B", L[3]),
    ]
    return MetricGraph(("A", "B"), edges, name="loop4")


def preset_strip(L, bc, end_bc=None):
    """A single edge between two leaves (same bc on both sides unless ``end_bc`` is given)."""
    start = Leaf(BC.parse(bc))
    end = Leaf(BC.parse(end_bc if end_bc is not None else bc))
    return MetricGraph((), [EdgeSpec("E1", start, end, float(L))], name="strip")


def preset_circle(L):
    """A single self-loop of perimeter L on node N."""
    return MetricGraph(("N",), [EdgeSpec("E1", "N", "N", float(L))], name="circle")
