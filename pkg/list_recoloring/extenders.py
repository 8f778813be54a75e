from __future__ import annotations

import math
import bisect
import logging
import dataclasses
import typing as t
from collections import Counter, deque

from .common import ExtensionInapplicableError, ContractBreachError, InternalInvariantError
from .coloring import ListAssignment, RecoloringSequence, RecoloringStep
from .graph import Graph
from .utils import ceil_div


logger = logging.getLogger(__name__)

THREAD_LIST_SIZE = 4
STAR_LIST_SIZE = 6
SEARCH_STATE_LIMIT = 1_000_000


@dataclasses.dataclass(frozen=True)
class ExtensionBudget:
    t: int
    s: int

    @property
    def bound(self) -> int:
        return ceil_div(self.t, self.s) + 1


def key_lemma_budget(g: Graph, lists: ListAssignment, v: int, inner: RecoloringSequence) -> ExtensionBudget:
    return ExtensionBudget(
        t=sum(inner.count(u) for u in g.adjacency[v]),
        s=len(lists[v]) - g.degree(v) - 1
    )


@dataclasses.dataclass(frozen=True)
class MovePolicy:
    """
    How an added vertex reacts when the inner sequence is about to take its color

    During its first `early_moves` forced moves the vertex may push `displace` out of the way
    so that its new color is not used by the next `window` upcoming recolorings of its neighbours.
    """
    early_moves: int = 0
    window: int = 1
    displace: t.Optional[int] = None


class _Extension:
    def __init__(
            self,
            g: Graph,
            lists: ListAssignment,
            added: t.Sequence[int],
            inner: RecoloringSequence,
            alpha: t.Mapping[int, int],
            beta: t.Mapping[int, int],
            policies: t.Mapping[int, MovePolicy],
            hubs: t.Sequence[int] = (),
            depth: int = 0
    ):
        self.g = g
        self.lists = lists
        self.added = tuple(added)
        self.added_set = frozenset(added)
        self.inner = inner
        self.beta = {v: beta[v] for v in g.vertices}
        self.policies = policies
        self.hubs = tuple(hubs)
        self.depth = depth

        self._check_contract(alpha)

        self.alpha = {v: alpha[v] for v in g.vertices}
        self.current = dict(self.alpha)
        self.steps: t.List[RecoloringStep] = []
        self.forced: t.Counter[int] = Counter()

        self.watchers: t.Dict[int, t.List[int]] = {}
        for x in self.added:
            for u in sorted(g.adjacency[x] - self.added_set):
                self.watchers.setdefault(u, []).append(x)

        # Upcoming colors on each added vertex's outside neighbourhood, indexed for next-use lookups
        self.stream_positions: t.Dict[int, t.List[int]] = {x: [] for x in self.added}
        self.color_slots: t.Dict[int, t.Dict[int, t.List[int]]] = {x: {} for x in self.added}
        for idx, step in enumerate(inner.steps):
            for x in self.watchers.get(step.vertex, ()):
                self.color_slots[x].setdefault(step.new_color, []).append(len(self.stream_positions[x]))
                self.stream_positions[x].append(idx)

    def _check_contract(self, alpha: t.Mapping[int, int]):
        outside = self.g.vertices - self.added_set
        if set(self.inner.start) != outside:
            raise ContractBreachError("Inner sequence is not defined on exactly the graph minus the added vertices")
        elif any(self.inner.start[v] != alpha[v] for v in outside):
            raise ContractBreachError("Inner sequence does not start from the restriction of alpha")

        final = self.inner.final()
        if mismatch := sorted(v for v in outside if final[v] != self.beta[v]):
            raise ContractBreachError(f"Inner sequence does not end at beta, first mismatch at vertex {mismatch[0]}")

    def run(self) -> RecoloringSequence:
        for idx, step in enumerate(self.inner.steps):
            u, color = step.vertex, step.new_color
            for x in self.watchers.get(u, ()):
                if self.current[x] == color:
                    self._forced_move(x, idx, u, color)
            self._apply(step)

        self._finish()
        return self._result()

    def _apply(self, step: RecoloringStep):
        v, color = step.vertex, step.new_color
        if color not in self.lists[v] or color == self.current[v]:
            raise InternalInvariantError(f"Invalid recoloring of vertex {v} to {color}")
        elif clash := [u for u in self.g.adjacency[v] if self.current[u] == color]:
            raise InternalInvariantError(f"Recoloring vertex {v} to {color} conflicts with neighbour {clash[0]}")

        self.current[v] = color
        self.steps.append(step)

    def _move(self, v: int, color: int):
        self._apply(RecoloringStep(v, color, self.depth))

    def _pointer(self, x: int, idx: int) -> int:
        return bisect.bisect_left(self.stream_positions[x], idx)

    def _next_use(self, x: int, color: int, pointer: int) -> t.Union[int, float]:
        slots = self.color_slots[x].get(color, ())
        pos = bisect.bisect_left(slots, pointer)
        return slots[pos] if pos < len(slots) else math.inf

    def _furthest(self, x: int, candidates: t.Iterable[int], pointer: int) -> t.Optional[int]:
        # Ties go to the smallest color
        return max(sorted(candidates), key=lambda col: self._next_use(x, col, pointer), default=None)

    def _forced_move(self, x: int, idx: int, u: int, color: int):
        pointer = self._pointer(x, idx)
        policy = self.policies[x]
        others = {self.current[z] for z in self.g.adjacency[x]}
        blocked = others | {self.current[x], color}
        target = self._furthest(x, self.lists[x] - blocked, pointer)

        ordinal = self.forced[x]
        self.forced[x] += 1

        y = policy.displace
        if y is not None and ordinal < policy.early_moves and y in self.g.adjacency[x]:
            reach = self._next_use(x, target, pointer) if target is not None else -1
            option = self.current[y]
            rest = {self.current[z] for z in self.g.adjacency[x] if z != y} | {self.current[x], color}
            if (
                reach < pointer + policy.window
                and option in self.lists[x]
                and option not in rest
                and self._next_use(x, option, pointer) > reach
                and self._displace(y, idx, u, color)
            ):
                target = option

        if target is None:
            raise InternalInvariantError(f"No available color for vertex {x} before recoloring {u} to {color}")
        self._move(x, target)

    def _displace(self, y: int, idx: int, u: int, color: int) -> bool:
        blocked = {self.current[z] for z in self.g.adjacency[y]} | {self.current[y]}
        if u in self.g.adjacency[y]:
            blocked.add(color)

        if (choice := self._furthest(y, self.lists[y] - blocked, self._pointer(y, idx))) is None:
            return False
        self._move(y, choice)
        return True

    def _free_for(self, x: int, color: int) -> bool:
        return all(self.current[z] != color for z in self.g.adjacency[x])

    def _finish(self):
        unfinished = [x for x in self.added if self.current[x] != self.beta[x]]
        parked: t.Set[int] = set()

        while unfinished:
            if ready := [x for x in unfinished if self._free_for(x, self.beta[x])]:
                x = ready[0]
                self._move(x, self.beta[x])
                unfinished.remove(x)
                continue

            blocker = self._pick_blocker(unfinished)
            color = self._parking_color(blocker, unfinished) if blocker not in parked else None
            if color is None:
                self._search_finish(unfinished)
                return
            parked.add(blocker)
            self._move(blocker, color)

    def _pick_blocker(self, unfinished: t.List[int]) -> int:
        pending = set(unfinished)
        blockers = [
            b for b in unfinished
            if any(self.beta[x] == self.current[b] for x in self.g.adjacency[b] & pending)
        ]
        for hub in self.hubs:
            if hub in blockers:
                return hub
        return blockers[0]

    def _parking_color(self, b: int, unfinished: t.List[int]) -> t.Optional[int]:
        blocked = {self.current[z] for z in self.g.adjacency[b]} | {self.current[b]}
        wanted = {self.beta[x] for x in unfinished if x in self.g.adjacency[b]}
        candidates = sorted(self.lists[b] - blocked)
        preferred = [col for col in candidates if col not in wanted]
        return (preferred or candidates or [None])[0]

    def _search_finish(self, unfinished: t.List[int]):
        """
        Shortest recoloring of the unfinished vertices to beta with every other vertex fixed
        """
        order = sorted(unfinished)
        logger.debug(f"Falling back to exhaustive finish over vertices {order}")
        size = math.prod(len(self.lists[x]) for x in order)
        if size > SEARCH_STATE_LIMIT:
            raise InternalInvariantError(f"Finishing search over {size} states exceeds the limit")

        position = {x: idx for idx, x in enumerate(order)}
        start = tuple(self.current[x] for x in order)
        goal = tuple(self.beta[x] for x in order)
        parent: t.Dict[tuple, t.Optional[t.Tuple[tuple, int, int]]] = {start: None}
        queue = deque([start])
        while queue and goal not in parent:
            state = queue.popleft()
            for idx, x in enumerate(order):
                used = {
                    state[position[z]] if z in position else self.current[z]
                    for z in self.g.adjacency[x]
                }
                for color in sorted(self.lists[x] - used - {state[idx]}):
                    nxt = state[:idx] + (color,) + state[idx + 1:]
                    if nxt not in parent:
                        parent[nxt] = (state, x, color)
                        queue.append(nxt)

        if goal not in parent:
            raise InternalInvariantError(f"Vertices {order} cannot reach their target colors")

        moves = []
        state = goal
        while (link := parent[state]) is not None:
            state, x, color = link
            moves.append((x, color))
        for x, color in reversed(moves):
            self._move(x, color)

    def _result(self) -> RecoloringSequence:
        replayed = tuple(step for step in self.steps if step.vertex not in self.added_set)
        if replayed != self.inner.steps:
            raise InternalInvariantError("Extended sequence does not restrict to the inner sequence")
        elif mismatch := sorted(v for v in self.g.vertices if self.current[v] != self.beta[v]):
            raise InternalInvariantError(f"Extension did not end at beta, first mismatch at vertex {mismatch[0]}")

        return RecoloringSequence(start=self.alpha, steps=tuple(self.steps))


def _check_caps(seq: RecoloringSequence, caps: t.Mapping[int, int], label: str):
    for v, cap in caps.items():
        if seq.count(v) > cap:
            raise InternalInvariantError(f"{label}: vertex {v} recolored {seq.count(v)} times, cap is {cap}")


def _require_lists(lists: ListAssignment, vertices: t.Iterable[int], size: int, label: str):
    if short := [v for v in vertices if len(lists[v]) < size]:
        raise ExtensionInapplicableError(f"{label} needs lists of size {size}, vertex {short[0]} has fewer")


def _require_inner_bound(inner: RecoloringSequence, bound: int, label: str):
    if inner.max_count > bound:
        raise ExtensionInapplicableError(
            f"{label} needs an inner sequence recoloring each vertex at most {bound} times, got {inner.max_count}"
        )


def _require_thread(h: Graph, path: t.Sequence[int], label: str):
    for u, v in zip(path, path[1:]):
        if not h.has_edge(u, v):
            raise ExtensionInapplicableError(f"{label}: {u}-{v} is not an edge")
    if thick := [v for v in path[1:-1] if h.degree(v) != 2]:
        raise ExtensionInapplicableError(f"{label}: interior vertex {thick[0]} does not have degree 2")


def extend_key_lemma(
        g: Graph,
        lists: ListAssignment,
        v: int,
        inner: RecoloringSequence,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        depth: int = 0
) -> RecoloringSequence:
    """
    Re-add a single vertex whose list exceeds its degree by at least two

    With t inner recolorings on its neighbourhood and s = |L(v)| - d(v) - 1 spare colors, v is
    recolored at most ceil(t/s) + 1 times.
    """
    budget = key_lemma_budget(g, lists, v, inner)
    if budget.s <= 0:
        raise ExtensionInapplicableError(
            f"Vertex {v} has list size {len(lists[v])} and degree {g.degree(v)}, no spare colors"
        )

    extension = _Extension(g, lists, (v,), inner, alpha, beta, policies={v: MovePolicy()}, depth=depth)
    seq = extension.run()
    _check_caps(seq, {v: budget.bound}, "single vertex extension")
    return seq


def extend_two_thread(
        h: Graph,
        lists: ListAssignment,
        thread: t.Sequence[int],
        inner: RecoloringSequence,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        s: t.Optional[int] = None,
        depth: int = 0
) -> RecoloringSequence:
    """
    Re-add the interior v2, v3 of a thread v1 v2 v3 v4

    v2 is recolored at most 14 times and v3 at most s + 3 times, where s >= the inner count of v4.
    """
    v1, v2, v3, v4 = thread
    label = f"2-thread {tuple(thread)}"
    _require_thread(h, thread, label)
    _require_lists(lists, (v2, v3), THREAD_LIST_SIZE, label)
    _require_inner_bound(inner, 14, label)

    if s is None:
        s = inner.count(v4)
    elif inner.count(v4) > s:
        raise ExtensionInapplicableError(f"{label}: vertex {v4} recolored {inner.count(v4)} times, more than {s}")
    if s > 11:
        raise ExtensionInapplicableError(f"{label}: vertex {v4} may be recolored {s} times, at most 11 allowed")

    policies = {v2: MovePolicy(early_moves=1, window=2, displace=v3), v3: MovePolicy()}
    seq = _Extension(h, lists, (v2, v3), inner, alpha, beta, policies, hubs=(v3,), depth=depth).run()
    _check_caps(seq, {v2: 14, v3: s + 3}, label)
    return seq


def extend_three_thread(
        h: Graph,
        lists: ListAssignment,
        thread: t.Sequence[int],
        inner: RecoloringSequence,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        depth: int = 0
) -> RecoloringSequence:
    """
    Re-add the interior v2, v3, v4 of a thread v1 ... v5; the middle vertex moves at most 4 times
    """
    v1, v2, v3, v4, v5 = thread
    label = f"3-thread {tuple(thread)}"
    _require_thread(h, thread, label)
    _require_lists(lists, (v2, v3, v4), THREAD_LIST_SIZE, label)
    _require_inner_bound(inner, 14, label)

    policies = {
        v2: MovePolicy(early_moves=1, window=2, displace=v3),
        v3: MovePolicy(),
        v4: MovePolicy(early_moves=1, window=2, displace=v3),
    }
    seq = _Extension(h, lists, (v2, v3, v4), inner, alpha, beta, policies, hubs=(v3,), depth=depth).run()
    _check_caps(seq, {v2: 14, v3: 4, v4: 14}, label)
    return seq


def pendant_far_ends(g: Graph, v: int, ws: t.Sequence[int]) -> t.Tuple[int, ...]:
    return tuple(next(iter(g.adjacency[w] - {v})) for w in ws)


def extend_pendant_triple(
        g: Graph,
        lists: ListAssignment,
        v: int,
        ws: t.Sequence[int],
        inner: RecoloringSequence,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        depth: int = 0
) -> RecoloringSequence:
    """
    Re-add a 3-vertex v together with its three 2-neighbours ws

    The thread x2 w2 v w3 x3 goes back first with w1 still missing, then w1 is re-added alone.
    Needs the far neighbour x1 of ws[0] to be recolored at most 9 times by the inner sequence.
    """
    label = f"pendant triple at {v}"
    if g.adjacency[v] != frozenset(ws) or len(ws) != 3:
        raise ExtensionInapplicableError(f"{label}: {tuple(ws)} are not the neighbours of {v}")
    elif thick := [w for w in ws if g.degree(w) != 2]:
        raise ExtensionInapplicableError(f"{label}: vertex {thick[0]} does not have degree 2")
    _require_lists(lists, (v, *ws), THREAD_LIST_SIZE, label)
    _require_inner_bound(inner, 14, label)

    x1, x2, x3 = pendant_far_ends(g, v, ws)
    w1, w2, w3 = ws
    if inner.count(x1) > 9:
        raise ExtensionInapplicableError(f"{label}: vertex {x1} recolored {inner.count(x1)} times, more than 9")

    without_w1 = g.remove([w1])
    partial = extend_three_thread(
        without_w1, lists, (x2, w2, v, w3, x3), inner,
        {u: alpha[u] for u in without_w1.vertices}, {u: beta[u] for u in without_w1.vertices}, depth
    )
    seq = extend_key_lemma(g, lists, w1, partial, alpha, beta, depth)
    _check_caps(seq, {v: 4, w1: 14, w2: 14, w3: 14}, label)
    return seq


def _require_degree_three(g: Graph, vertices: t.Iterable[int], label: str):
    if thin := [w for w in vertices if g.degree(w) != 3]:
        raise ExtensionInapplicableError(f"{label}: vertex {thin[0]} does not have degree 3")


def extend_deg3_two_deg3_neighbors(
        g: Graph,
        lists: ListAssignment,
        v: int,
        w1: int,
        w2: int,
        x: int,
        inner: RecoloringSequence,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        depth: int = 0
) -> RecoloringSequence:
    """
    Re-add a 3-vertex v and two of its 3-neighbours w1, w2; x is the remaining neighbour of v
    """
    label = f"3-vertex {v} with 3-neighbours {w1}, {w2}"
    if g.adjacency[v] != frozenset([w1, w2, x]):
        raise ExtensionInapplicableError(f"{label}: neighbours of {v} are not {w1}, {w2}, {x}")
    _require_degree_three(g, (v, w1, w2), label)
    _require_lists(lists, (v, w1, w2), STAR_LIST_SIZE, label)
    _require_inner_bound(inner, 12, label)

    early = MovePolicy(early_moves=2, window=3, displace=v)
    policies = {w1: early, w2: early, v: MovePolicy()}
    seq = _Extension(g, lists, (v, w1, w2), inner, alpha, beta, policies, hubs=(v,), depth=depth).run()
    _check_caps(seq, {v: 12, w1: 12, w2: 12}, label)
    logger.debug(f"{label}: recolorings v={seq.count(v)}, inner on {x}={inner.count(x)}")
    return seq


def extend_deg4_four_deg3_neighbors(
        g: Graph,
        lists: ListAssignment,
        v: int,
        ws: t.Sequence[int],
        inner: RecoloringSequence,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        depth: int = 0
) -> RecoloringSequence:
    """
    Re-add a 4-vertex v with its four 3-neighbours; v moves at most 10 times, each w at most 12
    """
    label = f"4-vertex {v} with four 3-neighbours"
    if g.adjacency[v] != frozenset(ws) or len(ws) != 4:
        raise ExtensionInapplicableError(f"{label}: {tuple(ws)} are not the neighbours of {v}")
    _require_degree_three(g, ws, label)
    _require_lists(lists, (v, *ws), STAR_LIST_SIZE, label)
    _require_inner_bound(inner, 12, label)

    early = MovePolicy(early_moves=2, window=3, displace=v)
    policies = {**{w: early for w in ws}, v: MovePolicy()}
    seq = _Extension(g, lists, (v, *ws), inner, alpha, beta, policies, hubs=(v,), depth=depth).run()
    _check_caps(seq, {v: 10, **{w: 12 for w in ws}}, label)
    return seq
