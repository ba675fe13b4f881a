import pytest

from netcasimir.graph import (
    BC,
    EdgeSpec,
    GraphError,
    Leaf,
    MetricGraph,
    constraint_count,
    preset_circle,
    preset_loop4,
    preset_star,
    preset_strip,
    preset_tree5,
    require_valid,
    total_length,
    unknown_count,
    validate_graph,
)


@pytest.mark.parametrize(
    "g",
    [
        preset_star(3, [1, 1, 1], "dirichlet"),
        preset_star(5, [1, 2, 3, 4, 5], "neumann"),
        preset_tree5([1] * 5, "d"),
        preset_loop4([1] * 4, "n"),
        preset_strip(2.0, "d"),
        preset_strip(2.0, "d", "n"),
        preset_circle(1.0),
    ],
    ids=lambda g: g.name,
)
def test_presets_valid_and_square(g):
    report = validate_graph(g)
    assert report.ok, str(report)
    assert unknown_count(g) == constraint_count(g)


def test_counts_tree5():
    g = preset_tree5([1] * 5, "d")
    assert unknown_count(g) == 6
    assert g.degree("A") == 3 and g.degree("B") == 3


def test_bc_aliases():
    assert BC.parse("DBC") is BC.DIRICHLET
    assert BC.parse("n") is BC.NEUMANN
    assert BC.parse(BC.NEUMANN) is BC.NEUMANN
    with pytest.raises(ValueError):
        BC.parse("robin")


def test_zero_length_rejected():
    g = preset_star(3, [1, 0, 1], "d")
    report = validate_graph(g)
    assert not report.ok
    assert any("non-positive length" in v for v in report.violations)
    with pytest.raises(GraphError):
        require_valid(g)


def test_disconnected_rejected():
    leaf = Leaf("d")
    g = MetricGraph(("A", "B"), [EdgeSpec("E1", "A", leaf, 1), EdgeSpec("E2", "A", leaf, 1),
                                 EdgeSpec("E3", "B", leaf, 1), EdgeSpec("E4", "B", leaf, 1)])
    assert any("not connected" in v for v in validate_graph(g).violations)


def test_unknown_node_and_isolated_node():
    leaf = Leaf("d")
    g = MetricGraph(("A", "C"), [EdgeSpec("E1", "A", leaf, 1), EdgeSpec("E2", "A", "B", 1)])
    msgs = " ".join(validate_graph(g).violations)
    assert "unknown node" in msgs and "degree 0" in msgs


def test_duplicate_ids():
    leaf = Leaf("d")
    g = MetricGraph(("A",), [EdgeSpec("E1", "A", leaf, 1), EdgeSpec("E1", "A", leaf, 1)])
    assert any("duplicate edge ids" in v for v in validate_graph(g).violations)


def test_empty_graph():
    assert "graph has no edges" in validate_graph(MetricGraph((), [])).violations


def test_star_data_and_mixed_bc():
    g = preset_star(3, [1, 2, 3], "n")
    lengths, bc = g.star_data()
    assert lengths == [1.0, 2.0, 3.0] and bc is BC.NEUMANN
    mixed = MetricGraph(("N",), [EdgeSpec("E1", "N", Leaf("d"), 1), EdgeSpec("E2", "N", Leaf("n"), 1)])
    assert mixed.star_data() is None
    # reversed orientation is still a star
    rev = MetricGraph(("N",), [EdgeSpec("E1", Leaf("d"), "N", 1), EdgeSpec("E2", "N", Leaf("d"), 2)])
    assert rev.star_data() == ([1.0, 2.0], BC.DIRICHLET)
    assert preset_tree5([1] * 5, "d").star_data() is None


def test_scaling_helpers():
    g = preset_loop4([1, 2, 3, 4], "d")
    assert g.scaled(2).lengths == [2, 4, 6, 8]
    assert total_length(g) == 10
    assert g.with_lengths([1, 1, 1, 1]).edge_ids == g.edge_ids
    with pytest.raises(ValueError):
        g.with_lengths([1, 2])


def test_incident_ends_self_loop():
    g = preset_circle(2.0)
    assert g.incident_ends("N") == [(0, 0), (0, 1)]
    assert g.edges[0].is_self_loop


def test_star_needs_two_edges():
    with pytest.raises(ValueError):
        preset_star(1, [1], "d")
