import itertools

import pytest
from hypothesis import given, settings, strategies as st

from list_recoloring.common import ExtensionInapplicableError, ContractBreachError
from list_recoloring.coloring import ListAssignment, RecoloringSequence, RecoloringStep, validate_sequence
from list_recoloring.extenders import (
    ExtensionBudget,
    extend_key_lemma,
    extend_two_thread,
    extend_three_thread,
    extend_pendant_triple,
    extend_deg3_two_deg3_neighbors,
    extend_deg4_four_deg3_neighbors,
)
from list_recoloring.graph import Graph
from list_recoloring.oracle import star_gadget, two_thread_gadget, exhaustive_extension_check


def _inner(start, *steps) -> RecoloringSequence:
    return RecoloringSequence(start=dict(start), steps=tuple(RecoloringStep(v, c) for v, c in steps))


def _check(g, lists, seq, inner, beta, caps):
    assert validate_sequence(g, lists, seq, beta).valid
    assert seq.restrict(inner.start).steps == inner.steps
    for v, cap in caps.items():
        assert seq.count(v) <= cap


@st.composite
def independent_walks(draw, vertices, colors, max_length):
    """
    A start coloring and recoloring walk on vertices that share no edge
    """
    current = {v: draw(st.sampled_from(colors)) for v in vertices}
    start = dict(current)
    steps = []
    for _ in range(draw(st.integers(0, max_length))):
        v = draw(st.sampled_from(vertices))
        color = draw(st.sampled_from([c for c in colors if c != current[v]]))
        current[v] = color
        steps.append(RecoloringStep(v, color))
    return RecoloringSequence(start=start, steps=tuple(steps))


def _proper_choices(g, lists, added, fixed):
    options = []
    for colors in itertools.product(*(lists.sorted(v) for v in added)):
        coloring = {**fixed, **dict(zip(added, colors))}
        if all(coloring[u] != coloring[v] for v in added for u in g.adjacency[v]):
            options.append(dict(zip(added, colors)))
    return options


def test_budget_bound():
    assert ExtensionBudget(t=5, s=2).bound == 4
    assert ExtensionBudget(t=0, s=1).bound == 1


def test_key_lemma_on_a_star():
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3, 4])
    inner = _inner({1: 1, 2: 2}, (1, 3), (2, 1))
    alpha = {0: 3, 1: 1, 2: 2}
    beta = {0: 2, 1: 3, 2: 1}

    seq = extend_key_lemma(g, lists, 0, inner, alpha, beta)
    # t = 2 neighbour recolorings and s = 4 - 2 - 1 = 1 spare color
    _check(g, lists, seq, inner, beta, {0: 3})
    assert seq.start == alpha


def test_key_lemma_needs_a_spare_color():
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3])
    with pytest.raises(ExtensionInapplicableError):
        extend_key_lemma(g, lists, 0, _inner({1: 1, 2: 2}), {0: 3, 1: 1, 2: 2}, {0: 3, 1: 1, 2: 2})


def test_inner_must_end_at_beta():
    g = Graph.from_edges(3, [(0, 1), (0, 2)])
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3, 4])
    with pytest.raises(ContractBreachError):
        extend_key_lemma(g, lists, 0, _inner({1: 1, 2: 2}, (1, 3)), {0: 3, 1: 1, 2: 2}, {0: 3, 1: 1, 2: 2})


@pytest.mark.parametrize("d,list_size,max_length", [(1, 3, 5), (2, 4, 3), (2, 5, 3)])
def test_key_lemma_exhaustively(d, list_size, max_length):
    report = exhaustive_extension_check(star_gadget(d, list_size), max_length=max_length)
    assert report.ok, str(report)
    assert report.runs > 0
    assert report.worst <= report.worst_cap


def test_two_thread_exhaustively():
    report = exhaustive_extension_check(two_thread_gadget(max_s=2), max_length=2)
    assert report.ok, str(report)


@pytest.mark.slow
@pytest.mark.parametrize("list_size", [5, 6])
def test_key_lemma_on_a_claw(list_size):
    report = exhaustive_extension_check(star_gadget(3, list_size), max_length=6)
    assert report.ok, str(report)
    assert report.worst <= report.worst_cap


@pytest.mark.slow
@pytest.mark.parametrize("max_length", [3, 4])
def test_two_thread_up_to_slack_3(max_length):
    report = exhaustive_extension_check(two_thread_gadget(max_s=3), max_length=max_length)
    assert report.ok, str(report)
    assert report.runs > 0


PATH5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
LISTS4 = ListAssignment.uniform(range(5), [1, 2, 3, 4])


@settings(max_examples=40, deadline=None)
@given(inner=independent_walks([0, 3], [1, 2, 3, 4], 10), data=st.data())
def test_two_thread_walks(inner, data):
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3, 4])
    alpha = {**inner.start, **data.draw(st.sampled_from(_proper_choices(g, lists, (1, 2), inner.start)))}
    beta = {**inner.final(), **data.draw(st.sampled_from(_proper_choices(g, lists, (1, 2), inner.final())))}

    s = inner.count(3)
    if s > 11:
        with pytest.raises(ExtensionInapplicableError):
            extend_two_thread(g, lists, (0, 1, 2, 3), inner, alpha, beta)
        return
    seq = extend_two_thread(g, lists, (0, 1, 2, 3), inner, alpha, beta)
    _check(g, lists, seq, inner, beta, {1: 14, 2: s + 3})


@settings(max_examples=40, deadline=None)
@given(inner=independent_walks([0, 4], [1, 2, 3, 4], 12), data=st.data())
def test_three_thread_walks(inner, data):
    alpha = {**inner.start, **data.draw(st.sampled_from(_proper_choices(PATH5, LISTS4, (1, 2, 3), inner.start)))}
    beta = {**inner.final(), **data.draw(st.sampled_from(_proper_choices(PATH5, LISTS4, (1, 2, 3), inner.final())))}

    seq = extend_three_thread(PATH5, LISTS4, (0, 1, 2, 3, 4), inner, alpha, beta)
    _check(PATH5, LISTS4, seq, inner, beta, {1: 14, 2: 4, 3: 14})


def test_three_thread_needs_degree_two_interior():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])
    lists = ListAssignment.uniform(g.vertices, [1, 2, 3, 4])
    inner = _inner({0: 1, 4: 1, 5: 1})
    coloring = {0: 1, 1: 2, 2: 3, 3: 2, 4: 1, 5: 1}
    with pytest.raises(ExtensionInapplicableError):
        extend_three_thread(g, lists, (0, 1, 2, 3, 4), inner, coloring, coloring)


PENDANT = Graph.from_edges(7, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)])
PENDANT_LISTS = ListAssignment.uniform(range(7), [1, 2, 3, 4])


def test_pendant_triple():
    inner = _inner({4: 1, 5: 2, 6: 3}, (4, 2), (5, 3), (6, 1))
    alpha = {**inner.start, 0: 4, 1: 2, 2: 1, 3: 1}
    beta = {**inner.final(), 0: 1, 1: 3, 2: 2, 3: 2}

    seq = extend_pendant_triple(PENDANT, PENDANT_LISTS, 0, (1, 2, 3), inner, alpha, beta)
    _check(PENDANT, PENDANT_LISTS, seq, inner, beta, {0: 4, 1: 14, 2: 14, 3: 14})


def test_pendant_triple_needs_a_quiet_far_end():
    steps = [(4, 2 if idx % 2 == 0 else 1) for idx in range(10)]
    inner = _inner({4: 1, 5: 2, 6: 3}, *steps)
    alpha = {**inner.start, 0: 4, 1: 2, 2: 1, 3: 1}
    beta = {**inner.final(), 0: 4, 1: 2, 2: 1, 3: 1}
    with pytest.raises(ExtensionInapplicableError):
        extend_pendant_triple(PENDANT, PENDANT_LISTS, 0, (1, 2, 3), inner, alpha, beta)


def test_deg3_pair():
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (2, 5)])
    lists = ListAssignment.uniform(g.vertices, range(6))
    inner = _inner({3: 0, 4: 1, 5: 2}, (4, 0), (5, 1), (3, 2), (4, 3))
    alpha = {**inner.start, 0: 3, 1: 4, 2: 5}
    beta = {**inner.final(), 0: 4, 1: 0, 2: 5}

    seq = extend_deg3_two_deg3_neighbors(g, lists, 0, 1, 2, 3, inner, alpha, beta)
    _check(g, lists, seq, inner, beta, {0: 12, 1: 12, 2: 12})


def test_deg3_pair_needs_six_colors():
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (2, 5)])
    lists = ListAssignment.uniform(g.vertices, range(5))
    coloring = {0: 3, 1: 4, 2: 4, 3: 0, 4: 1, 5: 2}
    with pytest.raises(ExtensionInapplicableError):
        extend_deg3_two_deg3_neighbors(g, lists, 0, 1, 2, 3, _inner({3: 0, 4: 1, 5: 2}), coloring, coloring)


def test_deg4_star():
    edges = [(0, w) for w in range(1, 5)] + [(w, x) for w in range(1, 5) for x in (5, 6)]
    g = Graph.from_edges(7, edges)
    lists = ListAssignment.uniform(g.vertices, range(6))
    inner = _inner({5: 0, 6: 1}, (5, 2), (6, 0), (5, 1))
    alpha = {**inner.start, 0: 5, 1: 2, 2: 3, 3: 4, 4: 2}
    beta = {**inner.final(), 0: 4, 1: 2, 2: 3, 3: 5, 4: 2}

    seq = extend_deg4_four_deg3_neighbors(g, lists, 0, (1, 2, 3, 4), inner, alpha, beta)
    _check(g, lists, seq, inner, beta, {0: 10, 1: 12, 2: 12, 3: 12, 4: 12})
