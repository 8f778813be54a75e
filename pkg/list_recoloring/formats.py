from __future__ import annotations

import logging
import dataclasses
import typing as t

from .common import GraphError, InstanceParseError
from .coloring import Coloring, ListAssignment, RecoloringSequence, RecoloringStep, find_conflict
from .graph import Graph


logger = logging.getLogger(__name__)

KEYWORDS = ("graph", "edge", "rot", "list", "alpha", "beta")


@dataclasses.dataclass(frozen=True)
class Instance:
    """
    A graph with optional lists and start/target colorings, as read from an instance file

    Commands that only look at the graph accept instances without lists or colorings.
    """
    graph: Graph
    lists: t.Optional[ListAssignment] = None
    alpha: t.Optional[Coloring] = None
    beta: t.Optional[Coloring] = None

    @property
    def is_complete(self) -> bool:
        return None not in (self.lists, self.alpha, self.beta)


def _ints(tokens: t.Sequence[str], lineno: int) -> t.List[int]:
    try:
        values = [int(token) for token in tokens]
    except ValueError:
        raise InstanceParseError(f"expected integers, got `{' '.join(tokens)}`", lineno) from None
    if any(value < 0 for value in values):
        raise InstanceParseError("vertices and colors must be non-negative", lineno)
    return values


def _split_labelled(rest: str, keyword: str, lineno: int) -> t.Tuple[int, t.List[int]]:
    """
    Split `<v>: <a> <b> ...` as used by the `rot` and `list` lines
    """
    head, sep, tail = rest.partition(":")
    if not sep:
        raise InstanceParseError(f"`{keyword}` line needs the form `{keyword} <v>: ...`", lineno)
    return _single(head, f"`{keyword}` line names exactly one vertex", lineno), _ints(tail.split(), lineno)


def _single(text: str, message: str, lineno: int) -> int:
    if len(tokens := text.split()) != 1:
        raise InstanceParseError(message, lineno)
    return _ints(tokens, lineno)[0]


class _InstanceReader:
    def __init__(self):
        self.n: t.Optional[int] = None
        self.edges: t.List[t.Tuple[int, int]] = []
        self.edge_set: t.Set[t.FrozenSet[int]] = set()
        self.rotation: t.Dict[int, t.Tuple[int, ...]] = {}
        self.lists: t.Dict[int, t.FrozenSet[int]] = {}
        self.colorings: t.Dict[str, Coloring] = {"alpha": {}, "beta": {}}
        self.first_line: t.Dict[str, int] = {}

    def _vertex(self, v: int, lineno: int) -> int:
        if not v < self.n:
            raise InstanceParseError(f"vertex {v} outside of [0, {self.n})", lineno)
        return v

    def feed(self, keyword: str, rest: str, lineno: int):
        if keyword == "graph":
            if self.n is not None:
                raise InstanceParseError("duplicate `graph` line", lineno)
            self.n = _single(rest, "`graph` line takes exactly the vertex count", lineno)
            return
        elif self.n is None:
            raise InstanceParseError("the first line must be `graph <n>`", lineno)

        self.first_line.setdefault(keyword, lineno)
        if keyword == "edge":
            tokens = rest.split()
            if len(tokens) != 2:
                raise InstanceParseError("`edge` line takes two vertices", lineno)
            u, v = (self._vertex(x, lineno) for x in _ints(tokens, lineno))
            if u == v:
                raise InstanceParseError(f"self-loop at vertex {u}", lineno)
            elif (key := frozenset((u, v))) in self.edge_set:
                raise InstanceParseError(f"duplicate edge {u} {v}", lineno)
            self.edge_set.add(key)
            self.edges.append((u, v))
        elif keyword == "rot":
            v, order = _split_labelled(rest, keyword, lineno)
            if self._vertex(v, lineno) in self.rotation:
                raise InstanceParseError(f"duplicate rotation for vertex {v}", lineno)
            self.rotation[v] = tuple(self._vertex(u, lineno) for u in order)
        elif keyword == "list":
            v, colors = _split_labelled(rest, keyword, lineno)
            if self._vertex(v, lineno) in self.lists:
                raise InstanceParseError(f"duplicate list for vertex {v}", lineno)
            elif not colors or len(set(colors)) != len(colors):
                raise InstanceParseError(f"list of vertex {v} must be non-empty without repeated colors", lineno)
            self.lists[v] = frozenset(colors)
        else:
            tokens = rest.split()
            if len(tokens) != 2:
                raise InstanceParseError(f"`{keyword}` line takes a vertex and a color", lineno)
            v, color = _ints(tokens, lineno)
            coloring = self.colorings[keyword]
            if self._vertex(v, lineno) in coloring:
                raise InstanceParseError(f"vertex {v} colored twice in {keyword}", lineno)
            coloring[v] = color

    def _all_or_none(self, keyword: str, declared: t.Collection[int]) -> bool:
        if not declared:
            return False
        elif len(declared) != self.n:
            missing = min(set(range(self.n)) - set(declared))
            raise InstanceParseError(
                f"`{keyword}` lines must cover every vertex or none, vertex {missing} has none",
                self.first_line[keyword]
            )
        return True

    def build(self) -> Instance:
        if self.n is None:
            raise InstanceParseError("missing `graph <n>` line")
        elif self.n == 0:
            return Instance(graph=Graph.from_edges(0, ()), lists=ListAssignment(lists={}), alpha={}, beta={})

        rotation = self.rotation if self._all_or_none("rot", self.rotation) else None
        try:
            graph = Graph.from_edges(self.n, self.edges, rotation=rotation)
        except GraphError as exc:
            raise InstanceParseError(str(exc), self.first_line.get("rot")) from exc

        lists = ListAssignment(lists=self.lists) if self._all_or_none("list", self.lists) else None
        colorings = {}
        for name, coloring in self.colorings.items():
            if not self._all_or_none(name, coloring):
                colorings[name] = None
                continue
            elif lists is None:
                raise InstanceParseError(f"`{name}` lines need `list` lines", self.first_line[name])
            elif (conflict := find_conflict(graph, lists, coloring)) is not None:
                raise InstanceParseError(f"{name} is not a proper L-coloring: {conflict}", self.first_line[name])
            colorings[name] = coloring

        return Instance(graph=graph, lists=lists, alpha=colorings["alpha"], beta=colorings["beta"])


def parse_instance(text: str) -> Instance:
    """
    Parse the line-oriented instance format

    `graph <n>` comes first and is followed in any order by `edge <u> <v>`, `rot <v>: <n1> ...`,
    `list <v>: <c1> ...`, `alpha <v> <c>` and `beta <v> <c>` lines. Text after `#` is a comment.
    """
    reader = _InstanceReader()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not (line := raw.split("#", 1)[0].strip()):
            continue
        keyword, _, rest = line.partition(" ")
        if keyword not in KEYWORDS:
            raise InstanceParseError(f"unknown keyword `{keyword}`", lineno)
        reader.feed(keyword, rest, lineno)

    instance = reader.build()
    logger.debug(f"Parsed instance with {instance.graph.n} vertices and {instance.graph.m} edges")
    return instance


def emit_instance(instance: Instance) -> str:
    """
    Canonical text of an instance, parsing back to an equal instance
    """
    g = instance.graph
    lines = [f"graph {g.n}"]
    lines += [f"edge {u} {v}" for u, v in g.edges]
    if g.rotation is not None:
        lines += [f"rot {v}: {' '.join(map(str, g.rotation[v]))}".rstrip() for v in sorted(g.vertices)]
    if instance.lists is not None:
        lines += [f"list {v}: {' '.join(map(str, instance.lists.sorted(v)))}" for v in sorted(g.vertices)]
    for name in ("alpha", "beta"):
        if (coloring := getattr(instance, name)) is not None:
            lines += [f"{name} {v} {coloring[v]}" for v in sorted(g.vertices)]
    return "\n".join(lines) + "\n"


def emit_sequence(seq: RecoloringSequence) -> str:
    lines = [f"steps {len(seq)}"]
    lines += [f"recolor {step.vertex} {step.new_color}" for step in seq.steps]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str, start: t.Mapping[int, int]) -> RecoloringSequence:
    """
    Parse `steps <m>` followed by `m` lines of `recolor <v> <c>`, replayed from `start`
    """
    expected: t.Optional[int] = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not (line := raw.split("#", 1)[0].strip()):
            continue
        keyword, *tokens = line.split()
        if expected is None:
            if keyword != "steps":
                raise InstanceParseError("the first line must be `steps <m>`", lineno)
            expected = _single(" ".join(tokens), "`steps` line takes exactly the step count", lineno)
        elif keyword == "recolor" and len(tokens) == 2:
            v, color = _ints(tokens, lineno)
            steps.append(RecoloringStep(v, color))
        else:
            raise InstanceParseError(f"expected `recolor <v> <c>`, got `{line}`", lineno)

    if expected is None:
        raise InstanceParseError("missing `steps <m>` line")
    elif expected != len(steps):
        raise InstanceParseError(f"header announces {expected} steps but {len(steps)} follow")
    return RecoloringSequence(start=dict(start), steps=tuple(steps))
