"""JSON graph files.

    {"dimension": 2,
     "nodes": ["N"],
     "edges": [{"id": "E1", "from": "N", "to": "leaf", "length": 1.0, "leaf_bc": "dirichlet"}, ...]}

``leaf_bc`` is a string when the edge has one leaf, or either a string or
``{"from": ..., "to": ...}`` when both ends are leaves. Edges without leaves
must not carry it. An optional ``name`` labels the graph.
"""
import json
import math

from .graph import BC, EdgeSpec, Leaf, MetricGraph

LEAF = "leaf"
TOP_KEYS = {"dimension", "nodes", "edges", "name"}
EDGE_KEYS = {"id", "from", "to", "length", "leaf_bc"}


class GraphFileError(ValueError):
    """Malformed graph file (bad JSON, wrong types, unknown keys)."""


def _bc(value, where):
    try:
        return BC.parse(value)
    except ValueError:
        raise GraphFileError(f"{where}: leaf_bc must be 'dirichlet' or 'neumann', got {value!r}") from None


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphFileError(f"{where}: length must be a number, got {value!r}")
    return float(value)


def graph_from_dict(data):
    """Parse a GraphFile mapping; returns ``(MetricGraph, dimension)``.

    Structural problems raise :class:`GraphFileError`; physical ones (zero
    length, disconnected graph) are left for :func:`validate_graph`.
    """
    if not isinstance(data, dict):
        raise GraphFileError("top level must be a JSON object")
    extra = set(data) - TOP_KEYS
    if extra:
        raise GraphFileError(f"unknown keys: {sorted(extra)}")
    for key in ("nodes", "edges"):
        if key not in data:
            raise GraphFileError(f"missing key {key!r}")
    dim = data.get("dimension", 2)
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise GraphFileError(f"dimension must be an integer, got {dim!r}")
    nodes = data["nodes"]
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise GraphFileError("nodes must be a list of strings")
    if LEAF in nodes:
        raise GraphFileError(f"{LEAF!r} is reserved and cannot be a node id")
    if not isinstance(data["edges"], list):
        raise GraphFileError("edges must be a list")
    edges = []
    for j, e in enumerate(data["edges"]):
        where = f"edges[{j}]"
        if not isinstance(e, dict):
            raise GraphFileError(f"{where}: must be an object")
        extra = set(e) - EDGE_KEYS
        if extra:
            raise GraphFileError(f"{where}: unknown keys {sorted(extra)}")
        for key in ("id", "from", "to", "length"):
            if key not in e:
                raise GraphFileError(f"{where}: missing key {key!r}")
        if not isinstance(e["id"], str):
            raise GraphFileError(f"{where}: id must be a string")
        for key in ("from", "to"):
            if not isinstance(e[key], str):
                raise GraphFileError(f"{where}: {key!r} must be a node id or 'leaf'")
        leaves = [k for k in ("from", "to") if e[k] == LEAF]
        spec = e.get("leaf_bc")
        if not leaves:
            if spec is not None:
                raise GraphFileError(f"{where}: leaf_bc given but the edge has no leaf")
            bcs = {}
        elif spec is None:
            raise GraphFileError(f"{where}: leaf endpoint needs leaf_bc")
        elif isinstance(spec, dict):
            if set(spec) != set(leaves):
                raise GraphFileError(f"{where}: leaf_bc object must have exactly the keys {leaves}")
            bcs = {k: _bc(v, where) for k, v in spec.items()}
        else:
            bcs = {k: _bc(spec, where) for k in leaves}
        start = Leaf(bcs["from"]) if "from" in bcs else e["from"]
        end = Leaf(bcs["to"]) if "to" in bcs else e["to"]
        edges.append(EdgeSpec(e["id"], start, end, _number(e["length"], where)))
    name = data.get("name", "")
    if not isinstance(name, str):
        raise GraphFileError("name must be a string")
    return MetricGraph(tuple(nodes), edges, name=name), dim


def graph_to_dict(g, dimension=2):
    edges = []
    for e in g.edges:
        item = {"id": e.id}
        bcs = {}
        for key, end in (("from", e.start), ("to", e.end)):
            if isinstance(end, Leaf):
                item[key] = LEAF
                bcs[key] = end.bc.value
            else:
                item[key] = end
        item["length"] = e.length
        if len(bcs) == 1 or (len(bcs) == 2 and len(set(bcs.values())) == 1):
            item["leaf_bc"] = next(iter(bcs.values()))
        elif bcs:
            item["leaf_bc"] = bcs
        edges.append(item)
    out = {"dimension": int(dimension), "nodes": list(g.nodes), "edges": edges}
    if g.name:
        out["name"] = g.name
    return out


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"invalid JSON: {exc}") from None
    return graph_from_dict(data)


def dumps(g, dimension=2):
    for L in g.lengths:
        if not math.isfinite(L):
            raise ValueError("lengths must be finite to serialize")
    return json.dumps(graph_to_dict(g, dimension), indent=2) + "\n"


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def save(path, g, dimension=2):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g, dimension))
