from __future__ import annotations

import logging
import dataclasses
import typing as t
from collections import Counter
from functools import cached_property

from .common import MissingVertexError, ImproperColoringError
from .graph import Graph


logger = logging.getLogger(__name__)

Coloring = t.Dict[int, int]


@dataclasses.dataclass(frozen=True)
class ListAssignment:
    lists: t.Mapping[int, t.FrozenSet[int]]

    @classmethod
    def from_mapping(cls, lists: t.Mapping[int, t.Iterable[int]]) -> ListAssignment:
        return cls(lists={v: frozenset(colors) for v, colors in lists.items()})

    @classmethod
    def uniform(cls, vertices: t.Iterable[int], colors: t.Iterable[int]) -> ListAssignment:
        colors = frozenset(colors)
        return cls(lists={v: colors for v in vertices})

    def __getitem__(self, v: int) -> t.FrozenSet[int]:
        return self.lists[v]

    def __contains__(self, v: int) -> bool:
        return v in self.lists

    def sorted(self, v: int) -> t.List[int]:
        return sorted(self.lists[v])

    @property
    def min_size(self) -> int:
        return min((len(colors) for colors in self.lists.values()), default=0)

    def is_k_assignment(self, k: int) -> bool:
        return all(len(colors) == k for colors in self.lists.values())

    def covers(self, vertices: t.Iterable[int]) -> bool:
        return all(v in self.lists for v in vertices)

    def restrict(self, vertices: t.Iterable[int]) -> ListAssignment:
        return ListAssignment(lists={v: self.lists[v] for v in vertices})


@dataclasses.dataclass(frozen=True)
class RecoloringStep:
    vertex: int
    new_color: int
    # Recursion depth of the extension that emitted the step, not part of its identity
    depth: int = dataclasses.field(default=0, compare=False)

    def __str__(self):
        return f"{self.vertex}->{self.new_color}"


@dataclasses.dataclass(frozen=True)
class RecoloringSequence:
    start: t.Mapping[int, int]
    steps: t.Tuple[RecoloringStep, ...] = ()

    @classmethod
    def empty(cls, start: t.Mapping[int, int]) -> RecoloringSequence:
        return cls(start=dict(start), steps=())

    @cached_property
    def counts(self) -> t.Counter[int]:
        return Counter(step.vertex for step in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def max_count(self) -> int:
        return max(self.counts.values(), default=0)

    def count(self, v: int) -> int:
        return self.counts.get(v, 0)

    def final(self) -> Coloring:
        coloring = dict(self.start)
        for step in self.steps:
            coloring[step.vertex] = step.new_color
        return coloring

    def restrict(self, vertices: t.Iterable[int]) -> RecoloringSequence:
        vertices = frozenset(vertices)
        return RecoloringSequence(
            start=restrict(self.start, vertices),
            steps=tuple(step for step in self.steps if step.vertex in vertices)
        )

    def without(self, vertices: t.Iterable[int]) -> RecoloringSequence:
        return self.restrict(frozenset(self.start) - frozenset(vertices))

    def concat(self, other: RecoloringSequence) -> RecoloringSequence:
        """
        Run `other` after this sequence; on shared vertices `other` must start where this one ends
        """
        final = self.final()
        for v, color in other.start.items():
            if v in final and final[v] != color:
                raise ValueError(f"Cannot concatenate: vertex {v} ends at {final[v]} but the next sequence starts at {color}")

        start = dict(self.start)
        for v, color in other.start.items():
            start.setdefault(v, color)
        return RecoloringSequence(start=start, steps=self.steps + other.steps)

    def tagged(self, depth: int) -> RecoloringSequence:
        return RecoloringSequence(
            start=self.start,
            steps=tuple(RecoloringStep(s.vertex, s.new_color, depth) for s in self.steps)
        )


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    valid: bool
    max_count: int
    argmax: t.Optional[int]
    failing_index: t.Optional[int] = None
    reason: t.Optional[str] = None

    def __str__(self):
        if self.valid:
            return f"valid, max recolorings {self.max_count} (vertex {self.argmax})"
        location = "start" if self.failing_index is None else f"step {self.failing_index}"
        return f"invalid at {location}: {self.reason}"


def _require_total(c: t.Mapping[int, int], vertices: t.Iterable[int]):
    if missing := [v for v in vertices if v not in c]:
        raise MissingVertexError(missing)


def is_proper(g: Graph, lists: ListAssignment, c: t.Mapping[int, int]) -> bool:
    _require_total(c, g.vertices)

    if any(c[v] not in lists[v] for v in g.vertices):
        return False
    return all(c[u] != c[v] for u, v in g.edges)


def find_conflict(g: Graph, lists: ListAssignment, c: t.Mapping[int, int]) -> t.Optional[str]:
    """
    Describe the first list or edge violation of a total coloring, `None` if it is proper
    """
    _require_total(c, g.vertices)

    for v in sorted(g.vertices):
        if c[v] not in lists[v]:
            return f"vertex {v} has color {c[v]} outside of its list"
    for u, v in g.edges:
        if c[u] == c[v]:
            return f"edge {u}-{v} has both endpoints colored {c[u]}"
    return None


def require_proper(g: Graph, lists: ListAssignment, c: t.Mapping[int, int], name: str = "coloring"):
    if (conflict := find_conflict(g, lists, c)) is not None:
        raise ImproperColoringError(f"{name} is not a proper L-coloring: {conflict}")


def restrict(c: t.Mapping[int, int], vertices: t.Iterable[int]) -> Coloring:
    vertices = list(vertices)
    _require_total(c, vertices)
    return {v: c[v] for v in vertices}


def validate_sequence(
        g: Graph,
        lists: ListAssignment,
        seq: RecoloringSequence,
        target: t.Mapping[int, int],
        k: t.Optional[int] = None
) -> ValidationReport:
    """
    Replay a sequence and report the first step that breaks a proper L-coloring or the budget `k`
    """
    _require_total(seq.start, g.vertices)
    _require_total(target, g.vertices)

    counts: t.Counter[int] = Counter()

    def report(index: t.Optional[int], reason: t.Optional[str]) -> ValidationReport:
        argmax = min(counts, key=lambda v: (-counts[v], v)) if counts else None
        return ValidationReport(
            valid=reason is None,
            max_count=counts[argmax] if argmax is not None else 0,
            argmax=argmax,
            failing_index=index,
            reason=reason
        )

    current = {v: seq.start[v] for v in g.vertices}
    if (conflict := find_conflict(g, lists, current)) is not None:
        return report(None, f"start coloring is improper: {conflict}")

    for idx, step in enumerate(seq.steps):
        v, color = step.vertex, step.new_color
        if v not in g.vertices:
            return report(idx, f"vertex {v} is not in the graph")
        elif color == current[v]:
            return report(idx, f"no-op step recoloring vertex {v} to its current color {color}")
        elif color not in lists[v]:
            return report(idx, f"color {color} is not in the list of vertex {v}")
        elif clash := sorted(u for u in g.adjacency[v] if current[u] == color):
            return report(idx, f"recoloring vertex {v} to {color} conflicts with neighbour {clash[0]}")

        current[v] = color
        counts[v] += 1
        if k is not None and counts[v] > k:
            return report(idx, f"vertex {v} recolored {counts[v]} times, more than {k}")

    if mismatch := sorted(v for v in g.vertices if current[v] != target[v]):
        return report(len(seq.steps), f"final coloring differs from the target at vertex {mismatch[0]}")

    return report(None, None)
