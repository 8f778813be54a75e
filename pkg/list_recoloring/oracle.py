from __future__ import annotations

import math
import logging
import itertools
import dataclasses
import typing as t
from collections import deque

from .common import GraphError, StateCapExceeded, ImproperColoringError, RecoloringError
from .coloring import Coloring, ListAssignment, RecoloringSequence, RecoloringStep, validate_sequence
from .extenders import extend_key_lemma, extend_two_thread, key_lemma_budget
from .graph import Graph
from .utils import state_cap_from_env


logger = logging.getLogger(__name__)

STORED_ADJACENCY_LIMIT = 100_000
BUDGET_SEARCH_LIMITS = {"vertices": 5, "list_size": 4, "k": 3}
GADGET_VERTEX_LIMIT = 7
GADGET_LIST_LIMIT = 6


class StateSpace:
    """
    Every proper L-coloring of a graph, encoded as a mixed-radix integer over list indices

    The first vertex in sorted order is the most significant digit, so backtracking in color
    order produces the codes in increasing order. Neighbouring states are stored for small spaces
    and generated on demand above `STORED_ADJACENCY_LIMIT` states.
    """

    def __init__(self, g: Graph, lists: ListAssignment, codes: t.List[int]):
        self.graph = g
        self.lists = lists
        self.order = tuple(sorted(g.vertices))
        self.palettes = tuple(tuple(lists.sorted(v)) for v in self.order)
        self.position = {v: idx for idx, v in enumerate(self.order)}

        weights = []
        weight = 1
        for palette in reversed(self.palettes):
            weights.append(weight)
            weight *= len(palette)
        self.weights = tuple(reversed(weights))

        self.codes = codes
        self.index = {code: idx for idx, code in enumerate(codes)}
        self._adjacency: t.Optional[t.List[t.Tuple[int, ...]]] = None
        if len(codes) <= STORED_ADJACENCY_LIMIT:
            self._adjacency = [self._generate_neighbors(idx) for idx in range(len(codes))]

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, coloring: t.Mapping[int, int]) -> bool:
        try:
            return self.encode(coloring) in self.index
        except (KeyError, ValueError):
            return False

    def encode(self, coloring: t.Mapping[int, int]) -> int:
        return sum(
            self.palettes[idx].index(coloring[v]) * self.weights[idx]
            for idx, v in enumerate(self.order)
        )

    def decode(self, code: int) -> Coloring:
        return {
            v: self.palettes[idx][(code // self.weights[idx]) % len(self.palettes[idx])]
            for idx, v in enumerate(self.order)
        }

    def state(self, idx: int) -> Coloring:
        return self.decode(self.codes[idx])

    def states(self) -> t.Iterator[Coloring]:
        for code in self.codes:
            yield self.decode(code)

    def state_index(self, coloring: t.Mapping[int, int], name: str = "coloring") -> int:
        if coloring not in self:
            raise ImproperColoringError(f"{name} is not a proper L-coloring of the graph")
        return self.index[self.encode(coloring)]

    def _generate_neighbors(self, idx: int) -> t.Tuple[int, ...]:
        code = self.codes[idx]
        found = []
        for pos, palette in enumerate(self.palettes):
            weight = self.weights[pos]
            digit = (code // weight) % len(palette)
            base = code - digit * weight
            for other in range(len(palette)):
                if other != digit and (nxt := self.index.get(base + other * weight)) is not None:
                    found.append(nxt)
        return tuple(found)

    def neighbors(self, idx: int) -> t.Tuple[int, ...]:
        if self._adjacency is not None:
            return self._adjacency[idx]
        return self._generate_neighbors(idx)

    @property
    def stores_adjacency(self) -> bool:
        return self._adjacency is not None

    def step_between(self, src: int, dst: int) -> RecoloringStep:
        before, after = self.state(src), self.state(dst)
        v, = [u for u in self.order if before[u] != after[u]]
        return RecoloringStep(v, after[v])


def build_state_space(g: Graph, lists: ListAssignment, cap: t.Optional[int] = None) -> StateSpace:
    """
    Enumerate the proper L-colorings of `g`, refusing when the list product exceeds `cap`
    """
    cap = state_cap_from_env() if cap is None else cap
    if (estimate := math.prod(len(lists[v]) for v in g.vertices)) > cap:
        raise StateCapExceeded(estimate, cap)

    order = sorted(g.vertices)
    palettes = [lists.sorted(v) for v in order]
    earlier = [[order.index(u) for u in g.adjacency[v] if order.index(u) < idx] for idx, v in enumerate(order)]
    weights = [math.prod(len(p) for p in palettes[idx + 1:]) for idx in range(len(order))]

    codes = []
    colors: t.List[int] = []

    def backtrack(pos: int, code: int):
        if pos == len(order):
            codes.append(code)
            return
        for digit, color in enumerate(palettes[pos]):
            if all(colors[u] != color for u in earlier[pos]):
                colors.append(color)
                backtrack(pos + 1, code + digit * weights[pos])
                colors.pop()

    backtrack(0, 0)
    logger.debug(f"State space of a graph on {g.n} vertices has {len(codes)} states out of {estimate}")
    return StateSpace(g, lists, codes)


def _bfs(space: StateSpace, source: int) -> t.Dict[int, t.Tuple[int, t.Optional[int]]]:
    """
    Distance and BFS parent of every state reachable from `source`
    """
    found = {source: (0, None)}
    queue = deque([source])
    while queue:
        idx = queue.popleft()
        dist = found[idx][0]
        for nxt in space.neighbors(idx):
            if nxt not in found:
                found[nxt] = (dist + 1, idx)
                queue.append(nxt)
    return found


def bfs_distance(space: StateSpace, alpha: t.Mapping[int, int], beta: t.Mapping[int, int]) -> t.Optional[int]:
    """
    Length of a shortest recoloring sequence from alpha to beta, `None` when beta is unreachable
    """
    src = space.state_index(alpha, "alpha")
    dst = space.state_index(beta, "beta")
    if src == dst:
        return 0

    dist = {src: 0}
    queue = deque([src])
    while queue:
        idx = queue.popleft()
        for nxt in space.neighbors(idx):
            if nxt not in dist:
                dist[nxt] = dist[idx] + 1
                if nxt == dst:
                    return dist[nxt]
                queue.append(nxt)
    return None


def shortest_sequence(
        space: StateSpace,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int]
) -> t.Optional[RecoloringSequence]:
    src = space.state_index(alpha, "alpha")
    dst = space.state_index(beta, "beta")
    found = _bfs(space, src)
    if dst not in found:
        return None

    steps = []
    idx = dst
    while (parent := found[idx][1]) is not None:
        steps.append(space.step_between(parent, idx))
        idx = parent
    return RecoloringSequence(start=space.state(src), steps=tuple(reversed(steps)))


def component_count(space: StateSpace) -> int:
    seen: t.Set[int] = set()
    count = 0
    for idx in range(len(space)):
        if idx not in seen:
            count += 1
            seen.update(_bfs(space, idx))
    return count


def diameter(space: StateSpace) -> t.Optional[int]:
    """
    Largest distance between two states, `None` when the recoloring graph is disconnected
    """
    if len(space) == 0:
        return None

    best = 0
    for idx in range(len(space)):
        found = _bfs(space, idx)
        if len(found) != len(space):
            return None
        best = max(best, max(dist for dist, _ in found.values()))
    return best


def bounded_budget_search(
        g: Graph,
        lists: ListAssignment,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        k: int
) -> t.Optional[RecoloringSequence]:
    """
    Shortest sequence from alpha to beta recoloring every vertex at most `k` times, if any exists
    """
    if g.n > BUDGET_SEARCH_LIMITS["vertices"] or k > BUDGET_SEARCH_LIMITS["k"]:
        raise GraphError(f"Budget search is limited to {BUDGET_SEARCH_LIMITS} but got n={g.n}, k={k}")
    elif any(len(lists[v]) > BUDGET_SEARCH_LIMITS["list_size"] for v in g.vertices):
        raise GraphError(f"Budget search is limited to lists of size {BUDGET_SEARCH_LIMITS['list_size']}")

    space = build_state_space(g, lists)
    src = space.state_index(alpha, "alpha")
    dst = space.state_index(beta, "beta")

    start = (src, (0,) * len(space.order))
    parents: t.Dict[t.Tuple[int, t.Tuple[int, ...]], t.Optional[tuple]] = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        node = queue.popleft()
        idx, used = node
        if idx == dst:
            goal = node
            break
        for nxt in space.neighbors(idx):
            pos = space.position[space.step_between(idx, nxt).vertex]
            if used[pos] == k:
                continue
            child = (nxt, used[:pos] + (used[pos] + 1,) + used[pos + 1:])
            if child not in parents:
                parents[child] = node
                queue.append(child)

    if goal is None:
        return None

    steps = []
    node = goal
    while (parent := parents[node]) is not None:
        steps.append(space.step_between(parent[0], node[0]))
        node = parent
    return RecoloringSequence(start=space.state(src), steps=tuple(reversed(steps)))


@dataclasses.dataclass(frozen=True)
class Counterexample:
    graph: Graph
    lists: ListAssignment
    alpha: Coloring
    beta: Coloring
    inner: RecoloringSequence
    reason: str


@dataclasses.dataclass
class ExhaustiveReport:
    gadget: str
    runs: int = 0
    worst: int = 0
    worst_cap: int = 0
    counterexample: t.Optional[Counterexample] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def __str__(self):
        status = "no violations" if self.ok else f"counterexample: {self.counterexample.reason}"
        return f"{self.gadget}: {self.runs} runs, worst count {self.worst} against cap {self.worst_cap}, {status}"


@dataclasses.dataclass(frozen=True)
class Gadget:
    """
    A small graph with an extender to exercise; `checked` is the vertex whose cap is tracked
    """
    name: str
    graph: Graph
    lists: ListAssignment
    added: t.Tuple[int, ...]
    checked: int
    extend: t.Callable[[RecoloringSequence, Coloring, Coloring], RecoloringSequence]
    caps: t.Callable[[RecoloringSequence], t.Optional[t.Dict[int, int]]]


def star_gadget(d: int, list_size: int) -> Gadget:
    """
    K_{1,d} with the centre 0 re-added by the single-vertex extension
    """
    if list_size < d + 2:
        raise GraphError(f"The centre of K1,{d} needs at least {d + 2} colors to have a spare one")
    g = Graph.from_edges(d + 1, [(0, leaf) for leaf in range(1, d + 1)])
    lists = ListAssignment.uniform(g.vertices, range(1, list_size + 1))

    def extend(inner: RecoloringSequence, alpha: Coloring, beta: Coloring) -> RecoloringSequence:
        return extend_key_lemma(g, lists, 0, inner, alpha, beta)

    def caps(inner: RecoloringSequence) -> t.Dict[int, int]:
        return {0: key_lemma_budget(g, lists, 0, inner).bound}

    return Gadget(f"K1,{d} with {list_size}-lists", g, lists, (0,), 0, extend, caps)


def two_thread_gadget(max_s: int) -> Gadget:
    """
    The path 0-1-2-3 with 4-lists; the interior 1, 2 is re-added and 3 is the low-count end
    """
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    lists = ListAssignment.uniform(g.vertices, range(1, 5))

    def extend(inner: RecoloringSequence, alpha: Coloring, beta: Coloring) -> RecoloringSequence:
        return extend_two_thread(g, lists, (0, 1, 2, 3), inner, alpha, beta)

    def caps(inner: RecoloringSequence) -> t.Optional[t.Dict[int, int]]:
        if (s := inner.count(3)) > max_s:
            return None
        return {1: 14, 2: s + 3}

    return Gadget(f"2-thread with s <= {max_s}", g, lists, (1, 2), 2, extend, caps)


def _canonical_inner(vertices: t.Sequence[int], colors: int, max_length: int) -> t.Iterator[RecoloringSequence]:
    """
    Recoloring sequences on an independent set with identical lists 1..colors, one per color relabelling
    """
    def grow(used: int, picked: t.List[int]) -> t.Iterator[t.Tuple[int, ...]]:
        if len(picked) == len(vertices):
            yield tuple(picked)
            return
        for color in range(1, min(colors, used + 1) + 1):
            yield from grow(max(used, color), picked + [color])

    def walk(current: t.Dict[int, int], used: int, steps: t.List[RecoloringStep]) -> t.Iterator[t.List[RecoloringStep]]:
        yield steps
        if len(steps) == max_length:
            return
        for v in vertices:
            for color in range(1, min(colors, used + 1) + 1):
                if color != current[v]:
                    yield from walk({**current, v: color}, max(used, color), steps + [RecoloringStep(v, color)])

    for start in grow(0, []):
        current = dict(zip(vertices, start))
        for steps in walk(current, max(start), []):
            yield RecoloringSequence(start=dict(current), steps=tuple(steps))


def exhaustive_extension_check(gadget: Gadget, max_length: int) -> ExhaustiveReport:
    """
    Run the gadget's extender on every inner sequence up to `max_length` steps and every choice
    of the re-added vertices' start and target colors, checking validity and the claimed caps
    """
    g, lists = gadget.graph, gadget.lists
    if g.n > GADGET_VERTEX_LIMIT or max(len(lists[v]) for v in g.vertices) > GADGET_LIST_LIMIT:
        raise GraphError(f"Gadgets are limited to {GADGET_VERTEX_LIMIT} vertices and lists of {GADGET_LIST_LIMIT}")

    outside = sorted(g.vertices - frozenset(gadget.added))
    if any(g.adjacency[u] & frozenset(outside) for u in outside):
        raise GraphError("Inner vertices of a gadget must be independent")
    colors = max(len(lists[v]) for v in outside)

    report = ExhaustiveReport(gadget=gadget.name)
    for inner in _canonical_inner(outside, colors, max_length):
        if (caps := gadget.caps(inner)) is None:
            continue
        final = inner.final()
        for alpha_added, beta_added in _added_colorings(g, lists, gadget.added, inner.start, final):
            alpha = {**inner.start, **alpha_added}
            beta = {**final, **beta_added}
            report.runs += 1
            reason = None
            try:
                seq = gadget.extend(inner, alpha, beta)
                if not (check := validate_sequence(g, lists, seq, beta)).valid:
                    reason = str(check)
                elif over := [v for v, cap in caps.items() if seq.count(v) > cap]:
                    reason = f"vertex {over[0]} recolored {seq.count(over[0])} times, cap is {caps[over[0]]}"
                elif seq.count(gadget.checked) >= report.worst:
                    report.worst, report.worst_cap = seq.count(gadget.checked), caps[gadget.checked]
            except RecoloringError as exc:
                reason = f"{type(exc).__name__}: {exc}"

            if reason is not None:
                report.counterexample = Counterexample(g, lists, alpha, beta, inner, reason)
                logger.info(f"Counterexample on {gadget.name}: {reason}")
                return report

    logger.debug(str(report))
    return report


def _added_colorings(
        g: Graph,
        lists: ListAssignment,
        added: t.Sequence[int],
        start: t.Mapping[int, int],
        final: t.Mapping[int, int]
) -> t.Iterator[t.Tuple[Coloring, Coloring]]:
    def proper_extensions(fixed: t.Mapping[int, int]) -> t.List[Coloring]:
        options = []
        for colors in itertools.product(*(lists.sorted(v) for v in added)):
            coloring = {**fixed, **dict(zip(added, colors))}
            if all(coloring[u] != coloring[v] for v in added for u in g.adjacency[v]):
                options.append(dict(zip(added, colors)))
        return options

    for alpha_added in proper_extensions(start):
        for beta_added in proper_extensions(final):
            yield alpha_added, beta_added
