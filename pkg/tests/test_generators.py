from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from list_recoloring.common import GeneratorError, Theorem
from list_recoloring.coloring import is_proper
from list_recoloring.generators import (
    GRAPH_MODELS,
    build_graph,
    generate,
    make_colorings,
    make_lists,
    subdivide,
)
from list_recoloring.graph import check_embedding, is_triangle_free
from list_recoloring.metrics import mad_exact, girth


def test_generation_is_deterministic():
    first = generate("random-sparse", 4, lists="random", coloring="random", seed=11, n=8, bound=Fraction(22, 9))
    second = generate("random-sparse", 4, lists="random", coloring="random", seed=11, n=8, bound=Fraction(22, 9))
    assert first == second


@pytest.mark.parametrize("model,n,m", [
    ("path", 6, 5),
    ("cycle", 6, 6),
    ("grid", 9, 12),
    ("petersen", 10, 15),
    ("dodecahedron", 20, 30),
    ("cube", 8, 12),
    ("complete", 6, 15),
    ("subdivided", 10, 12),
])
def test_model_sizes(model, n, m):
    g = build_graph(model)
    assert (g.n, g.m) == (n, m)
    assert g.vertices == frozenset(range(n))


@pytest.mark.parametrize("model", ["grid", "hex", "cube", "dodecahedron", "cycle", "subdivided"])
def test_planar_models_are_embedded(model):
    g = build_graph(model)
    assert g.rotation is not None
    check_embedding(g)


def test_non_planar_models_have_no_rotation():
    assert build_graph("petersen").rotation is None
    assert build_graph("complete", n=5).rotation is None


def test_hex_patch():
    g = build_graph("hex", rows=2, cols=2)
    assert girth(g) == 6
    assert is_triangle_free(g)
    assert g.max_degree == 3


def test_subdivide():
    graph = subdivide(nx.complete_graph(3), 2)
    assert graph.number_of_nodes() == 9
    assert graph.number_of_edges() == 9
    with pytest.raises(GeneratorError):
        subdivide(nx.complete_graph(3), -1)


@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 1000), n=st.sampled_from([4, 6, 8]), bound=st.sampled_from([Fraction(17, 5), Fraction(22, 9), Fraction(5, 2)]))
def test_random_sparse_meets_its_bound(seed, n, bound):
    g = build_graph("random-sparse", n=n, bound=bound, seed=seed)
    assert mad_exact(g).mad < bound
    assert g.min_degree >= 2


@pytest.mark.parametrize("params", [
    {"model": "random-sparse", "n": 6, "bound": Fraction(2)},
    {"model": "random-sparse", "n": 5, "bound": Fraction(3)},
    {"model": "random-sparse", "n": 6},
    {"model": "cycle", "n": 2},
    {"model": "grid", "rows": 0},
    {"model": "subdivided", "base": "octahedron"},
    {"model": "complete", "n": 0},
    {"model": "wheel"},
])
def test_bad_parameters(params):
    with pytest.raises(GeneratorError):
        build_graph(**params)


def test_all_models_are_listed():
    assert set(GRAPH_MODELS) >= {"path", "cycle", "grid", "hex", "subdivided", "random-sparse"}


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), size=st.integers(4, 8), model=st.sampled_from(["shared", "random"]))
def test_lists(seed, size, model):
    g = build_graph("cube")
    lists = make_lists(g, size, model=model, seed=seed)
    assert lists.is_k_assignment(size)
    assert all(max(lists[v]) < 2 * size for v in g.vertices)


def test_list_errors():
    g = build_graph("path", n=3)
    with pytest.raises(GeneratorError):
        make_lists(g, 0)
    with pytest.raises(GeneratorError):
        make_lists(g, 4, model="random", palette=3)
    with pytest.raises(GeneratorError):
        make_lists(g, 4, model="rainbow")


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), model=st.sampled_from(["random", "disjoint"]))
def test_colorings_are_proper(seed, model):
    g = build_graph("dodecahedron")
    lists = make_lists(g, 4, model="random", seed=seed)
    alpha, beta = make_colorings(g, lists, model=model, seed=seed)
    assert is_proper(g, lists, alpha)
    assert is_proper(g, lists, beta)


def test_disjoint_colorings_differ_everywhere():
    g = build_graph("cycle", n=6)
    lists = make_lists(g, 4)
    alpha, beta = make_colorings(g, lists, model="disjoint", seed=5)
    # Each vertex has at most two colored neighbours and four colors, so a different one is always free
    assert all(alpha[v] != beta[v] for v in g.vertices)


def test_greedy_runs_out_of_colors():
    g = build_graph("complete", n=4)
    with pytest.raises(GeneratorError):
        make_colorings(g, make_lists(g, 3))


def test_subdivided_k4_is_sparse_enough():
    instance = generate("subdivided", 4, base="k4", times=4)
    assert mad_exact(instance.graph).mad < Fraction(22, 9)
    assert instance.lists.is_k_assignment(4)


def test_theorem_hypothesis_is_enforced():
    instance = generate("subdivided", 4, base="k4", times=2, theorem=Theorem.MAD_22_9)
    assert instance.graph.n == 4 + 6 * 2
    assert generate("grid", 7, rows=3, cols=3, theorem=Theorem.TRIANGLE_FREE_PLANAR).lists.is_k_assignment(7)

    with pytest.raises(GeneratorError, match="exactly 7 colors"):
        generate("grid", 3, rows=3, cols=3, theorem=Theorem.TRIANGLE_FREE_PLANAR)
    with pytest.raises(GeneratorError, match="not below 22/9"):
        generate("petersen", 4, theorem=Theorem.MAD_22_9)
