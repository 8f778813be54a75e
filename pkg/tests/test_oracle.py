import pytest

from list_recoloring.common import GraphError, StateCapExceeded, ImproperColoringError
from list_recoloring.coloring import ListAssignment, validate_sequence
from list_recoloring.oracle import (
    build_state_space,
    bfs_distance,
    shortest_sequence,
    component_count,
    diameter,
    bounded_budget_search,
    star_gadget,
)

from conftest import cycle_graph, path_graph, uniform_lists


ALPHA = {0: 0, 1: 1, 2: 0}
BETA = {0: 1, 1: 0, 2: 1}


def test_path_state_count():
    g = path_graph(3)
    space = build_state_space(g, uniform_lists(g, 3))
    assert len(space) == 12
    assert space.stores_adjacency
    assert ALPHA in space
    assert {0: 0, 1: 0, 2: 1} not in space


def test_frozen_edge():
    g = path_graph(2)
    lists = ListAssignment.uniform(g.vertices, [1, 2])
    space = build_state_space(g, lists)
    assert len(space) == 2
    assert bfs_distance(space, {0: 1, 1: 2}, {0: 2, 1: 1}) is None
    assert shortest_sequence(space, {0: 1, 1: 2}, {0: 2, 1: 1}) is None
    assert component_count(space) == 2
    assert diameter(space) is None


def test_middle_vertex_moves_twice():
    g = path_graph(3)
    lists = uniform_lists(g, 3)
    space = build_state_space(g, lists)
    assert bfs_distance(space, ALPHA, ALPHA) == 0
    assert bfs_distance(space, ALPHA, BETA) == 4

    seq = shortest_sequence(space, ALPHA, BETA)
    assert len(seq) == 4
    report = validate_sequence(g, lists, seq, BETA)
    assert report.valid
    assert (report.max_count, report.argmax) == (2, 1)


def test_swap_diameter():
    g = path_graph(2)
    space = build_state_space(g, uniform_lists(g, 3))
    assert len(space) == 6
    assert component_count(space) == 1
    assert diameter(space) == 3


def test_cycle_with_enough_colors_is_connected():
    g = cycle_graph(4)
    space = build_state_space(g, uniform_lists(g, 4))
    assert component_count(space) == 1
    assert diameter(space) is not None


def test_improper_endpoint():
    g = path_graph(3)
    space = build_state_space(g, uniform_lists(g, 3))
    with pytest.raises(ImproperColoringError):
        bfs_distance(space, {0: 0, 1: 0, 2: 0}, BETA)


def test_state_cap(monkeypatch):
    g = path_graph(3)
    with pytest.raises(StateCapExceeded) as info:
        build_state_space(g, uniform_lists(g, 3), cap=5)
    assert (info.value.estimate, info.value.cap) == (27, 5)

    monkeypatch.setenv("RECOLOR_STATE_CAP", "10")
    with pytest.raises(StateCapExceeded):
        build_state_space(g, uniform_lists(g, 3))


def test_bounded_budget_search():
    g = path_graph(3)
    lists = uniform_lists(g, 3)
    assert bounded_budget_search(g, lists, ALPHA, BETA, k=1) is None

    seq = bounded_budget_search(g, lists, ALPHA, BETA, k=2)
    assert len(seq) == 4
    assert validate_sequence(g, lists, seq, BETA, k=2).valid


def test_budget_search_limits():
    g = path_graph(6)
    coloring = {v: v % 2 for v in range(6)}
    with pytest.raises(GraphError):
        bounded_budget_search(g, uniform_lists(g, 3), coloring, coloring, k=1)

    small = path_graph(3)
    with pytest.raises(GraphError):
        bounded_budget_search(small, uniform_lists(small, 5), ALPHA, ALPHA, k=1)


def test_star_gadget_needs_a_spare_color():
    with pytest.raises(GraphError):
        star_gadget(3, 4)
