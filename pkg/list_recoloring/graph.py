from __future__ import annotations

import logging
import dataclasses
import typing as t
from collections import Counter, deque
from functools import cached_property

import networkx as nx

from .common import GraphError, EmbeddingInvalidError, NoAnchorError


logger = logging.getLogger(__name__)

Edge = t.Tuple[int, int]
Rotation = t.Mapping[int, t.Tuple[int, ...]]


@dataclasses.dataclass(frozen=True)
class Graph:
    """
    Immutable simple graph with an optional rotation system

    Vertex labels are kept when taking subgraphs, so a subgraph of a graph on `0..n-1`
    is in general not dense. The rotation lists every vertex's neighbours in clockwise order.
    """
    adjacency: t.Mapping[int, t.FrozenSet[int]]
    rotation: t.Optional[Rotation] = None

    def __post_init__(self):
        for v, nbrs in self.adjacency.items():
            if v in nbrs:
                raise GraphError(f"Self-loop at vertex {v}")
            for u in nbrs:
                if v not in self.adjacency.get(u, ()):
                    raise GraphError(f"Adjacency is not symmetric for edge {v}-{u}")

        if self.rotation is not None:
            if set(self.rotation) != set(self.adjacency):
                raise GraphError("Rotation must be given for every vertex")
            for v, order in self.rotation.items():
                if len(order) != len(self.adjacency[v]) or set(order) != self.adjacency[v]:
                    raise GraphError(f"Rotation at vertex {v} is not a permutation of its neighbours")

    @classmethod
    def from_edges(
            cls,
            n: int,
            edges: t.Iterable[t.Tuple[int, int]],
            rotation: t.Optional[Rotation] = None
    ) -> Graph:
        adjacency: t.Dict[int, t.Set[int]] = {v: set() for v in range(n)}
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"Edge {u}-{v} has an endpoint outside of [0, {n})")
            elif u == v:
                raise GraphError(f"Self-loop at vertex {u}")
            elif v in adjacency[u]:
                raise GraphError(f"Duplicate edge {u}-{v}")
            adjacency[u].add(v)
            adjacency[v].add(u)

        if rotation is not None:
            rotation = {v: tuple(order) for v, order in rotation.items()}

        return cls(
            adjacency={v: frozenset(nbrs) for v, nbrs in adjacency.items()},
            rotation=rotation
        )

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(sorted(self.adjacency))
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def vertices(self) -> t.FrozenSet[int]:
        return frozenset(self.adjacency)

    @cached_property
    def edges(self) -> t.Tuple[Edge, ...]:
        return tuple(sorted((u, v) for u, nbrs in self.adjacency.items() for v in nbrs if u < v))

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def has_rotation(self) -> bool:
        return self.rotation is not None

    def neighbors(self, v: int) -> t.FrozenSet[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency.get(u, ())

    @property
    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency.values()), default=0)

    @property
    def min_degree(self) -> int:
        return min((len(nbrs) for nbrs in self.adjacency.values()), default=0)

    def subgraph(self, keep: t.Iterable[int]) -> Graph:
        keep = frozenset(keep)
        if missing := keep - self.vertices:
            raise GraphError(f"Vertices not in graph: {sorted(missing)}")

        adjacency = {v: self.adjacency[v] & keep for v in keep}
        rotation = None
        if self.rotation is not None:
            # Deleting a vertex removes it from its neighbours' cyclic orders
            rotation = {v: tuple(u for u in self.rotation[v] if u in keep) for v in keep}
        return Graph(adjacency=adjacency, rotation=rotation)

    def remove(self, vertices: t.Iterable[int]) -> Graph:
        return self.subgraph(self.vertices - frozenset(vertices))

    def components(self) -> t.List[t.FrozenSet[int]]:
        seen: t.Set[int] = set()
        components = []
        for start in sorted(self.adjacency):
            if start in seen:
                continue
            component = {start}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for u in self.adjacency[v]:
                    if u not in component:
                        component.add(u)
                        queue.append(u)
            seen |= component
            components.append(frozenset(component))
        return components

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def with_rotation(self, rotation: t.Optional[Rotation]) -> Graph:
        if rotation is not None:
            rotation = {v: tuple(order) for v, order in rotation.items()}
        return Graph(adjacency=self.adjacency, rotation=rotation)


@dataclasses.dataclass(frozen=True)
class Face:
    boundary: t.Tuple[Edge, ...]

    @property
    def length(self) -> int:
        return len(self.boundary)

    @property
    def vertex_incidences(self) -> t.Tuple[int, ...]:
        """
        Vertices in walk order; a cut-vertex appears once per visit
        """
        return tuple(u for u, _ in self.boundary)

    def incidence_counts(self) -> t.Counter[int]:
        return Counter(self.vertex_incidences)


def _rotation_successor(g: Graph) -> t.Dict[Edge, int]:
    successor = {}
    for v, order in g.rotation.items():
        for idx, u in enumerate(order):
            successor[(v, u)] = order[(idx + 1) % len(order)]
    return successor


def trace_faces(g: Graph) -> t.Tuple[Face, ...]:
    """
    Trace the faces of a connected graph from its rotation system

    The edge following `u -> v` on a face boundary is `v -> w`, where `w` is the successor
    of `u` in the clockwise order around `v`. Raises `EmbeddingInvalidError` when the rotation
    is missing or the traced faces violate Euler's formula.
    """
    if g.rotation is None:
        raise EmbeddingInvalidError("Face tracing requires a rotation system")
    elif not g.is_connected():
        raise GraphError("Face tracing is only defined for connected graphs")
    elif g.n == 0:
        return ()

    if g.m == 0:
        faces: t.Tuple[Face, ...] = (Face(boundary=()),)
    else:
        successor = _rotation_successor(g)
        unused = {(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges}
        traced = []
        for dart in sorted(unused):
            if dart not in unused:
                continue
            boundary = []
            current = dart
            while current in unused:
                unused.discard(current)
                boundary.append(current)
                u, v = current
                current = (v, successor[(v, u)])
            traced.append(Face(boundary=tuple(boundary)))
        faces = tuple(traced)

    euler = g.n - g.m + len(faces)
    if euler != 2:
        raise EmbeddingInvalidError(
            f"Euler check failed: {g.n} - {g.m} + {len(faces)} = {euler}, rotation is not a planar embedding"
        )

    assert sum(face.length for face in faces) == 2 * g.m
    logger.debug(f"Traced {len(faces)} faces on {g.n} vertices and {g.m} edges")
    return faces


def check_embedding(g: Graph) -> t.List[t.Tuple[Face, ...]]:
    """
    Trace the faces of every component, validating the rotation of each against Euler's formula
    """
    return [trace_faces(g.subgraph(component)) for component in g.components()]


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges:
        if g.adjacency[u] & g.adjacency[v]:
            return False
    return True


@dataclasses.dataclass(frozen=True)
class Thread:
    endpoints: t.Tuple[int, int]
    interior: t.Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.interior)

    @property
    def is_cycle(self) -> bool:
        return self.endpoints[0] == self.endpoints[1]

    @property
    def path(self) -> t.Tuple[int, ...]:
        return (self.endpoints[0], *self.interior, self.endpoints[1])


@dataclasses.dataclass(frozen=True)
class ThreadEnd:
    """
    One incidence of a maximal thread at a 3+-vertex, with the path oriented away from it
    """
    anchor: int
    thread: Thread
    path: t.Tuple[int, ...]

    @property
    def k(self) -> int:
        return self.thread.k

    @property
    def interior(self) -> t.Tuple[int, ...]:
        return self.path[1:-1]

    @property
    def far_end(self) -> int:
        return self.path[-1]


@dataclasses.dataclass(frozen=True)
class ThreeVertexProfile:
    vertex: int
    profile: t.Tuple[int, int, int]


def _walk(g: Graph, anchor: int, first: int) -> t.Optional[t.Tuple[int, ...]]:
    path = [anchor]
    prev, cur = anchor, first
    while g.degree(cur) == 2:
        path.append(cur)
        nxt = next(u for u in g.adjacency[cur] if u != prev)
        prev, cur = cur, nxt
    if g.degree(cur) < 2:
        return None
    path.append(cur)
    return tuple(path)


def _canonical_thread(path: t.Tuple[int, ...]) -> Thread:
    reverse = path[::-1]
    if reverse < path:
        path = reverse
    return Thread(endpoints=(path[0], path[-1]), interior=tuple(path[1:-1]))


def _check_anchored(g: Graph):
    for component in g.components():
        if len(component) > 2 and all(g.degree(v) == 2 for v in component):
            raise NoAnchorError(
                f"Component containing vertex {min(component)} is a bare cycle without a 3+-vertex"
            )


def incident_threads(g: Graph, v: int) -> t.List[ThreadEnd]:
    """
    Maximal threads at a 3+-vertex, one entry per incident edge

    A neighbouring 3+-vertex yields a 0-thread and a cycle thread appears twice. Walks that end
    at a 1-vertex are not threads, `pendant_walks` reports them.
    """
    if g.degree(v) < 3:
        raise GraphError(f"Vertex {v} has degree {g.degree(v)}, threads are anchored at 3+-vertices")

    ends = []
    for u in sorted(g.adjacency[v]):
        if (path := _walk(g, v, u)) is None:
            logger.debug(f"Walk from {v} through {u} ends at a 1-vertex, not a thread")
            continue
        ends.append(ThreadEnd(anchor=v, thread=_canonical_thread(path), path=path))
    return ends


def pendant_walks(g: Graph, v: int) -> t.List[t.Tuple[int, ...]]:
    """
    Walks from the 3+-vertex `v` through 2-vertices that stop at a 1-vertex, the 1-vertex last
    """
    if g.degree(v) < 3:
        raise GraphError(f"Vertex {v} has degree {g.degree(v)}, threads are anchored at 3+-vertices")

    walks = []
    for u in sorted(g.adjacency[v]):
        path = [v]
        prev, cur = v, u
        while g.degree(cur) == 2:
            path.append(cur)
            prev, cur = cur, next(w for w in g.adjacency[cur] if w != prev)
        if g.degree(cur) == 1:
            walks.append((*path, cur))
    return walks


def find_threads(g: Graph) -> t.List[Thread]:
    """
    Every maximal thread once; walks into a pendant path are skipped, see `pendant_walks`
    """
    _check_anchored(g)

    seen: t.Set[Thread] = set()
    threads = []
    for v in sorted(g.adjacency):
        if g.degree(v) < 3:
            continue
        for end in incident_threads(g, v):
            if end.thread not in seen:
                seen.add(end.thread)
                threads.append(end.thread)
    return threads


def classify_three_vertices(g: Graph) -> t.Dict[int, ThreeVertexProfile]:
    if g.n and g.min_degree < 2:
        raise GraphError("Thread profiles require minimum degree at least 2")
    _check_anchored(g)

    profiles = {}
    for v in sorted(g.adjacency):
        if g.degree(v) != 3:
            continue
        lengths = sorted((end.k for end in incident_threads(g, v)), reverse=True)
        profiles[v] = ThreeVertexProfile(vertex=v, profile=tuple(lengths))
    return profiles


def nearby_two_vertices(g: Graph, v: int) -> int:
    return sum(end.k for end in incident_threads(g, v))


def weak_neighbors(g: Graph, v: int) -> t.List[ThreadEnd]:
    return [end for end in incident_threads(g, v) if end.far_end != v]
