import pytest
from hypothesis import given, settings, strategies as st

from list_recoloring.common import MissingVertexError, ImproperColoringError
from list_recoloring.coloring import (
    ListAssignment,
    RecoloringSequence,
    RecoloringStep,
    is_proper,
    require_proper,
    restrict,
    validate_sequence,
)

from conftest import cycle_graph, path_graph, uniform_lists


def _seq(start, *steps) -> RecoloringSequence:
    return RecoloringSequence(start=dict(start), steps=tuple(RecoloringStep(v, c) for v, c in steps))


def test_is_proper(k4):
    c4 = cycle_graph(4)
    assert is_proper(c4, ListAssignment.uniform(c4.vertices, [1, 2]), {0: 1, 1: 2, 2: 1, 3: 2})

    edge = path_graph(2)
    assert not is_proper(edge, ListAssignment.uniform(edge.vertices, [1]), {0: 1, 1: 1})

    assert is_proper(k4, ListAssignment.uniform(k4.vertices, [1, 2, 3, 4]), {0: 1, 1: 2, 2: 3, 3: 4})


def test_color_outside_list():
    g = path_graph(2)
    assert not is_proper(g, ListAssignment.from_mapping({0: [1], 1: [2]}), {0: 1, 1: 3})
    with pytest.raises(ImproperColoringError):
        require_proper(g, ListAssignment.from_mapping({0: [1], 1: [2]}), {0: 1, 1: 3}, name="alpha")


def test_partial_coloring():
    g = path_graph(3)
    with pytest.raises(MissingVertexError):
        is_proper(g, uniform_lists(g, 3), {0: 0, 1: 1})


def test_restrict():
    alpha = {v: v % 2 for v in range(5)}
    assert restrict(alpha, range(5)) == alpha
    assert restrict(alpha, []) == {}
    assert restrict(alpha, [0, 4]) == {0: 0, 4: 0}


def test_empty_sequence_is_valid():
    g = path_graph(3)
    alpha = {0: 0, 1: 1, 2: 0}
    report = validate_sequence(g, uniform_lists(g, 3), RecoloringSequence.empty(alpha), alpha, k=0)
    assert report.valid
    assert report.max_count == 0


def test_swap_on_an_edge():
    g = path_graph(2)
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3])
    seq = _seq({0: 1, 1: 2}, (0, 3), (1, 1), (0, 2))
    report = validate_sequence(g, lists, seq, {0: 2, 1: 1}, k=2)
    assert report.valid
    assert (report.max_count, report.argmax) == (2, 0)


def test_conflicting_step_is_reported():
    g = path_graph(2)
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3])
    seq = _seq({0: 1, 1: 2}, (0, 3), (1, 3))
    report = validate_sequence(g, lists, seq, {0: 3, 1: 3})
    assert not report.valid
    assert report.failing_index == 1


def test_noop_and_budget_violations():
    g = path_graph(2)
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3])
    assert validate_sequence(g, lists, _seq({0: 1, 1: 2}, (0, 1)), {0: 1, 1: 2}).failing_index == 0

    seq = _seq({0: 1, 1: 2}, (0, 3), (0, 1))
    assert validate_sequence(g, lists, seq, {0: 1, 1: 2}, k=2).valid
    report = validate_sequence(g, lists, seq, {0: 1, 1: 2}, k=1)
    assert not report.valid and report.failing_index == 1


def test_wrong_target():
    g = path_graph(2)
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3])
    report = validate_sequence(g, lists, _seq({0: 1, 1: 2}, (0, 3)), {0: 1, 1: 2})
    assert not report.valid
    assert report.failing_index == 1


def test_concat_adds_counts():
    first = _seq({0: 1, 1: 2}, (0, 3), (1, 1))
    second = _seq({0: 3, 1: 1}, (0, 2), (0, 3))
    joined = first.concat(second)
    assert joined.counts == first.counts + second.counts
    assert joined.final() == {0: 3, 1: 1}

    with pytest.raises(ValueError):
        first.concat(_seq({0: 1}, (0, 2)))


def test_restrict_and_tag_sequence():
    seq = _seq({0: 1, 1: 2, 2: 1}, (0, 3), (2, 3), (1, 1))
    assert seq.restrict([0, 1]).steps == (RecoloringStep(0, 3), RecoloringStep(1, 1))
    assert seq.without([0]).start == {1: 2, 2: 1}
    assert {step.depth for step in seq.tagged(4).steps} == {4}
    # Depth does not take part in equality
    assert seq.tagged(4) == seq


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=12))
def test_replay_is_deterministic(moves):
    g = cycle_graph(4)
    lists = uniform_lists(g, 4)
    seq = _seq({0: 0, 1: 1, 2: 0, 3: 1}, *moves)
    target = seq.final()
    assert validate_sequence(g, lists, seq, target) == validate_sequence(g, lists, seq, target)
