import itertools
import typing as t

import pytest
from hypothesis import strategies as st

from list_recoloring.coloring import ListAssignment
from list_recoloring.data import get_file
from list_recoloring.formats import Instance, parse_instance
from list_recoloring.generators import build_graph
from list_recoloring.graph import Graph


# A straight-line drawing of K4 with vertex 0 in the middle, neighbours clockwise
K4_ROTATION = {0: (1, 2, 3), 1: (2, 0, 3), 2: (3, 0, 1), 3: (1, 0, 2)}


def cycle_graph(n: int, rotation: bool = False) -> Graph:
    edges = [(v, (v + 1) % n) for v in range(n)]
    order = {v: ((v - 1) % n, (v + 1) % n) for v in range(n)} if rotation else None
    return Graph.from_edges(n, edges, rotation=order)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def uniform_lists(g: Graph, k: int) -> ListAssignment:
    return ListAssignment.uniform(g.vertices, range(k))


@st.composite
def small_graphs(draw, min_n: int = 1, max_n: int = 8) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [pair for pair, keep in zip(pairs, mask) if keep])


@pytest.fixture
def k4() -> Graph:
    return Graph.from_edges(4, itertools.combinations(range(4), 2), rotation=K4_ROTATION)


@pytest.fixture
def petersen() -> Graph:
    return build_graph("petersen")


@pytest.fixture
def dodecahedron() -> Graph:
    return build_graph("dodecahedron")


@pytest.fixture
def load_sample() -> t.Callable[[str], Instance]:
    def load(name: str) -> Instance:
        return parse_instance(get_file(name).read_text())
    return load
