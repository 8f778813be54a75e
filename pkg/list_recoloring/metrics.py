from __future__ import annotations

import math
import logging
import dataclasses
import typing as t
from collections import deque
from fractions import Fraction

import networkx as nx
from networkx.algorithms.flow import minimum_cut

from .common import UndefinedMeasureError, EmbeddingInvalidError, GraphError
from .graph import Graph, check_embedding


logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 20
_SOURCE = "source"
_SINK = "sink"


@dataclasses.dataclass(frozen=True)
class DensityReport:
    mad: Fraction
    witness: t.FrozenSet[int]

    def __str__(self):
        return f"mad {self.mad.numerator}/{self.mad.denominator} witnessed by {sorted(self.witness)}"


@dataclasses.dataclass(frozen=True)
class MadLemmaReport:
    mad: Fraction
    girth: t.Union[int, float]
    bound: Fraction
    density: DensityReport

    @property
    def holds(self) -> bool:
        return self.mad < self.bound


def _edges_within(g: Graph, vertices: t.AbstractSet[int]) -> int:
    return sum(1 for u, v in g.edges if u in vertices and v in vertices)


def _denser_subgraph(g: Graph, density: Fraction) -> t.Optional[t.FrozenSet[int]]:
    """
    Vertex set H with |E(H)|/|H| > density, or None when no such set exists

    The flow network is scaled by the density's denominator so every capacity is an integer.
    """
    a, b = density.numerator, density.denominator
    m = g.m

    network = nx.DiGraph()
    for v in g.vertices:
        network.add_edge(_SOURCE, v, capacity=b * m)
        network.add_edge(v, _SINK, capacity=b * m + 2 * a - b * g.degree(v))
    for u, v in g.edges:
        network.add_edge(u, v, capacity=b)
        network.add_edge(v, u, capacity=b)

    cut_value, (source_side, _) = minimum_cut(network, _SOURCE, _SINK, capacity="capacity")
    if cut_value < b * m * g.n:
        return frozenset(source_side) - {_SOURCE}
    return None


def mad_exact(g: Graph) -> DensityReport:
    """
    Maximum average degree as an exact rational, with a densest vertex set

    Binary search on the density |E(H)|/|H| with a min-cut test per guess. Two distinct
    candidate densities differ by at least 1/n^2, so once the search interval is shorter than
    that the last witness found is a densest subgraph.
    """
    if g.n == 0:
        raise UndefinedMeasureError("mad is undefined for the empty graph")
    elif g.m == 0:
        return DensityReport(mad=Fraction(0), witness=frozenset([min(g.vertices)]))

    u, v = g.edges[0]
    witness = frozenset([u, v])
    lo, hi = Fraction(0), Fraction(g.n, 2)
    resolution = Fraction(1, g.n * g.n)

    while hi - lo >= resolution:
        mid = (lo + hi) / 2
        if (denser := _denser_subgraph(g, mid)) is not None:
            lo, witness = mid, denser
        else:
            hi = mid

    mad = Fraction(2 * _edges_within(g, witness), len(witness))
    logger.debug(f"mad of a graph on {g.n} vertices is {mad}, witness size {len(witness)}")
    return DensityReport(mad=mad, witness=witness)


def mad_enumerate(g: Graph) -> DensityReport:
    """
    Brute-force maximum average degree over every non-empty vertex subset
    """
    if g.n == 0:
        raise UndefinedMeasureError("mad is undefined for the empty graph")
    elif g.n > ENUMERATION_LIMIT:
        raise GraphError(f"Enumeration is limited to {ENUMERATION_LIMIT} vertices, graph has {g.n}")

    order = sorted(g.vertices)
    index = {v: idx for idx, v in enumerate(order)}
    neighbor_masks = [sum(1 << index[u] for u in g.adjacency[v]) for v in order]

    inside = [0] * (1 << len(order))
    best, best_mask = Fraction(0), 1
    for mask in range(1, 1 << len(order)):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        inside[mask] = inside[rest] + bin(neighbor_masks[low] & rest).count("1")
        density = Fraction(2 * inside[mask], bin(mask).count("1"))
        if density > best:
            best, best_mask = density, mask

    witness = frozenset(v for idx, v in enumerate(order) if best_mask >> idx & 1)
    return DensityReport(mad=best, witness=witness)


def girth(g: Graph) -> t.Union[int, float]:
    """
    Length of a shortest cycle, `math.inf` for forests
    """
    best: t.Union[int, float] = math.inf
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            # Any cycle closed from this level on has length at least 2 * dist[v]
            if 2 * dist[v] >= best:
                break
            for u in g.adjacency[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def mad_lemma_bound(g_girth: t.Union[int, float]) -> Fraction:
    if math.isinf(g_girth):
        return Fraction(2)
    return Fraction(2 * g_girth, g_girth - 2)


def check_mad_lemma(g: Graph) -> MadLemmaReport:
    """
    Check mad(G) < 2g/(g-2) on an embedded graph, the bound every planar graph of girth g obeys
    """
    check_embedding(g)

    density = mad_exact(g)
    g_girth = girth(g)
    report = MadLemmaReport(mad=density.mad, girth=g_girth, bound=mad_lemma_bound(g_girth), density=density)
    if not report.holds:
        raise EmbeddingInvalidError(
            f"mad {density.mad} is not below {report.bound} for girth {g_girth}, the embedding cannot be planar"
        )
    return report
