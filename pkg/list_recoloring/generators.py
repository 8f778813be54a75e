from __future__ import annotations

import math
import random
import logging
import typing as t
from fractions import Fraction

import networkx as nx

from .common import GeneratorError, HypothesisError, Theorem
from .coloring import Coloring, ListAssignment
from .formats import Instance
from .graph import Graph
from .metrics import mad_exact
from .synthesizers import check_hypotheses


logger = logging.getLogger(__name__)

GRAPH_MODELS = ("path", "cycle", "grid", "hex", "subdivided", "random-sparse", "petersen", "dodecahedron", "cube", "complete")
BASE_GRAPHS = ("k4", "cube", "petersen", "dodecahedron", "complete")
LIST_MODELS = ("shared", "random")
COLORING_MODELS = ("random", "disjoint")
MAX_SUBDIVISIONS = 10_000


def _geometric_rotation(graph: nx.Graph, pos: t.Mapping[t.Any, t.Tuple[float, float]]) -> t.Dict[t.Any, t.Tuple[t.Any, ...]]:
    """
    Neighbours of every node in clockwise order of the straight-line drawing `pos`
    """
    def angle(v, u) -> float:
        return math.atan2(pos[u][1] - pos[v][1], pos[u][0] - pos[v][0])

    return {v: tuple(sorted(graph[v], key=lambda u: -angle(v, u))) for v in graph.nodes}


def _planar_rotation(graph: nx.Graph) -> t.Optional[t.Dict[t.Any, t.Tuple[t.Any, ...]]]:
    is_planar, embedding = nx.check_planarity(graph)
    if not is_planar:
        return None
    return {v: tuple(embedding.neighbors_cw_order(v)) for v in graph.nodes}


def _dense_graph(graph: nx.Graph, labels: t.Sequence[t.Any], rotation: t.Optional[t.Mapping] = None) -> Graph:
    """
    Relabel nodes to `0..n-1` in the order of `labels`, carrying the rotation along
    """
    index = {v: idx for idx, v in enumerate(labels)}
    edges = [(index[u], index[v]) for u, v in graph.edges]
    if rotation is not None:
        rotation = {index[v]: tuple(index[u] for u in order) for v, order in rotation.items()}
    return Graph.from_edges(len(labels), edges, rotation=rotation)


def _base_graph(name: str, n: int) -> nx.Graph:
    if name == "k4":
        return nx.complete_graph(4)
    elif name == "cube":
        return nx.hypercube_graph(3)
    elif name == "petersen":
        return nx.petersen_graph()
    elif name == "dodecahedron":
        return nx.dodecahedral_graph()
    elif name == "complete":
        if n < 1:
            raise GeneratorError("Complete graphs need at least one vertex")
        return nx.complete_graph(n)
    raise GeneratorError(f"Unknown base graph `{name}`, expected one of {', '.join(BASE_GRAPHS)}")


def subdivide(graph: nx.Graph, times: int) -> nx.Graph:
    """
    Replace every edge by a path with `times` new interior vertices
    """
    if times < 0:
        raise GeneratorError("Subdivision count must be non-negative")

    result = nx.Graph()
    result.add_nodes_from(("v", v) for v in graph.nodes)
    for idx, (u, v) in enumerate(sorted(graph.edges, key=str)):
        path = [("v", u), *(("s", idx, j) for j in range(times)), ("v", v)]
        nx.add_path(result, path)
    return result


def _random_sparse(n: int, bound: Fraction, rng: random.Random) -> nx.Graph:
    """
    Random cubic graph whose densest parts are subdivided until mad drops below `bound`
    """
    if bound <= 2:
        raise GeneratorError(f"mad bound {bound} is unreachable, subdividing a graph with a cycle never reaches 2")
    elif n < 4 or n % 2:
        raise GeneratorError("random-sparse needs an even vertex count of at least 4")

    graph = nx.random_regular_graph(3, n, seed=rng.randrange(2**32))
    graph = nx.relabel_nodes(graph, {v: ("v", v) for v in graph.nodes})
    for step in range(MAX_SUBDIVISIONS):
        labels = sorted(graph.nodes, key=str)
        report = mad_exact(_dense_graph(graph, labels))
        if report.mad < bound:
            logger.debug(f"random-sparse reached mad {report.mad} after {step} subdivisions")
            return graph

        witness = {labels[idx] for idx in report.witness}
        u, v = rng.choice(sorted((e for e in graph.edges if e[0] in witness and e[1] in witness), key=str))
        middle = ("s", step)
        graph.remove_edge(u, v)
        nx.add_path(graph, [u, middle, v])
    raise GeneratorError(f"mad bound {bound} not reached within {MAX_SUBDIVISIONS} subdivisions")


def build_graph(
        model: str,
        n: int = 6,
        rows: int = 3,
        cols: int = 3,
        base: str = "k4",
        times: int = 1,
        bound: t.Optional[Fraction] = None,
        seed: int = 0
) -> Graph:
    """
    Build a graph from one of the named families; planar families come with a rotation system
    """
    rng = random.Random(seed)
    rotation = None
    if model == "path":
        graph = nx.path_graph(n)
    elif model == "cycle":
        if n < 3:
            raise GeneratorError("Cycles need at least 3 vertices")
        graph = nx.cycle_graph(n)
    elif model == "grid":
        if rows < 1 or cols < 1:
            raise GeneratorError("Grids need at least one row and one column")
        graph = nx.grid_2d_graph(rows, cols)
        rotation = _geometric_rotation(graph, {v: v for v in graph.nodes})
    elif model == "hex":
        if rows < 1 or cols < 1:
            raise GeneratorError("Hexagonal patches need at least one row and one column")
        graph = nx.hexagonal_lattice_graph(rows, cols, with_positions=True)
        rotation = _geometric_rotation(graph, nx.get_node_attributes(graph, "pos"))
    elif model == "subdivided":
        graph = subdivide(_base_graph(base, n), times)
    elif model == "random-sparse":
        if bound is None:
            raise GeneratorError("random-sparse needs a mad bound")
        graph = _random_sparse(n, Fraction(bound), rng)
    elif model in BASE_GRAPHS:
        graph = _base_graph(model, n)
    else:
        raise GeneratorError(f"Unknown graph model `{model}`, expected one of {', '.join(GRAPH_MODELS)}")

    if rotation is None:
        rotation = _planar_rotation(graph)
    return _dense_graph(graph, sorted(graph.nodes, key=str), rotation)


def make_lists(g: Graph, size: int, model: str = "shared", palette: t.Optional[int] = None, seed: int = 0) -> ListAssignment:
    """
    `shared` gives every vertex the colors `0..size-1`, `random` draws each list from `0..palette-1`
    """
    if size < 1:
        raise GeneratorError("Lists need at least one color")
    elif model == "shared":
        return ListAssignment.uniform(g.vertices, range(size))
    elif model != "random":
        raise GeneratorError(f"Unknown list model `{model}`, expected one of {', '.join(LIST_MODELS)}")

    palette = 2 * size if palette is None else palette
    if palette < size:
        raise GeneratorError(f"Palette of {palette} colors cannot hold lists of {size}")
    rng = random.Random(seed)
    return ListAssignment.from_mapping({v: rng.sample(range(palette), size) for v in sorted(g.vertices)})


def _smallest_last(g: Graph) -> t.List[int]:
    graph = g.to_networkx()
    return list(nx.algorithms.coloring.strategy_smallest_last(graph, {}))


def _greedy(g: Graph, lists: ListAssignment, rng: random.Random, avoid: t.Optional[Coloring] = None) -> Coloring:
    coloring: Coloring = {}
    for v in _smallest_last(g):
        free = sorted(lists[v] - {coloring[u] for u in g.adjacency[v] if u in coloring})
        if not free:
            raise GeneratorError(f"Greedy coloring ran out of colors at vertex {v}, lists are too short for this graph")
        if avoid is not None and (preferred := [c for c in free if c != avoid[v]]):
            free = preferred
        coloring[v] = rng.choice(free)
    return coloring


def make_colorings(g: Graph, lists: ListAssignment, model: str = "disjoint", seed: int = 0) -> t.Tuple[Coloring, Coloring]:
    """
    Start and target L-colorings; `disjoint` makes the target differ from the start wherever it can
    """
    if model not in COLORING_MODELS:
        raise GeneratorError(f"Unknown coloring model `{model}`, expected one of {', '.join(COLORING_MODELS)}")
    rng = random.Random(seed)
    alpha = _greedy(g, lists, rng)
    beta = _greedy(g, lists, rng, avoid=alpha if model == "disjoint" else None)
    return alpha, beta


def generate(
        model: str,
        list_size: int,
        lists: str = "shared",
        coloring: str = "disjoint",
        palette: t.Optional[int] = None,
        seed: int = 0,
        theorem: t.Optional[Theorem] = None,
        **params
) -> Instance:
    """
    A complete instance: graph from `model`, lists, and the two colorings, all fixed by `seed`

    With `theorem` set, the instance must satisfy that theorem's hypothesis or `GeneratorError` is raised.
    """
    g = build_graph(model, seed=seed, **params)
    assignment = make_lists(g, list_size, model=lists, palette=palette, seed=seed + 1)
    alpha, beta = make_colorings(g, assignment, model=coloring, seed=seed + 2)
    logger.debug(f"Generated `{model}` with {g.n} vertices and {g.m} edges, seed {seed}")

    if theorem is not None:
        try:
            route = check_hypotheses(theorem, g, assignment, alpha, beta)
        except HypothesisError as exc:
            raise GeneratorError(f"`{model}` instance is outside theorem {theorem.value}: {exc}") from exc
        logger.debug(f"Generated instance satisfies theorem {theorem.value} via {route}")

    return Instance(graph=g, lists=assignment, alpha=alpha, beta=beta)
