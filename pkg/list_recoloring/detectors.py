from __future__ import annotations

import logging
import itertools
import dataclasses
import typing as t

from .common import (
    ConfigKind,
    StageKind,
    Theorem,
    EmbeddingInvalidError,
    StructuralClaimViolation,
)
from .coloring import ListAssignment
from .graph import Graph, ThreadEnd, trace_faces, find_threads, incident_threads, classify_three_vertices
from .utils import ceil_div


logger = logging.getLogger(__name__)

Roles = t.Mapping[str, t.Union[int, t.Tuple]]
StageSpec = t.Tuple[StageKind, t.Tuple[int, ...]]

MAX_PATH_LENGTH = 4
TWO_THREAD_MAX_SLACK = 11


@dataclasses.dataclass(frozen=True)
class Stage:
    """
    One re-add step of a reduction; `caps` bounds how often each re-added vertex is recolored
    """
    kind: StageKind
    path: t.Tuple[int, ...]
    caps: t.Mapping[int, int]

    @property
    def added(self) -> t.Tuple[int, ...]:
        return self.kind.added(self.path)


@dataclasses.dataclass(frozen=True)
class ConfigMatch:
    kind: ConfigKind
    roles: Roles
    stages: t.Tuple[Stage, ...] = ()

    @property
    def deletion_set(self) -> t.Tuple[t.FrozenSet[int], ...]:
        """
        Vertex sets in deletion order, the outermost stage first
        """
        return tuple(frozenset(stage.added) for stage in reversed(self.stages))

    @property
    def deleted(self) -> t.FrozenSet[int]:
        return frozenset(v for stage in self.stages for v in stage.added)

    @property
    def caps(self) -> t.Dict[int, int]:
        return {v: cap for stage in self.stages for v, cap in stage.caps.items()}

    def __str__(self):
        roles = ", ".join(f"{name}={value}" for name, value in self.roles.items())
        return f"{self.kind.value}({roles})"


class _Planner:
    """
    Computes the per-vertex caps of a staged reduction and rejects plans whose stages do not fit
    the degree and thread shapes their extenders need
    """
    def __init__(self, h: Graph, theorem: Theorem):
        self.h = h
        self.bound = theorem.bound
        self.list_size = theorem.list_size

    def plan(self, specs: t.Sequence[StageSpec]) -> t.Optional[t.Tuple[Stage, ...]]:
        added_sets = [frozenset(kind.added(path)) for kind, path in specs]
        deleted = frozenset().union(*added_sets)
        if sum(map(len, added_sets)) != len(deleted) or not deleted <= self.h.vertices:
            return None
        elif any(v not in self.h.vertices for _, path in specs for v in path):
            return None

        caps: t.Dict[int, int] = {}
        later = deleted
        stages = []
        for (kind, path), added in zip(specs, added_sets):
            later = later - added
            present = self.h.vertices - later
            stage_caps = self._stage_caps(kind, path, present, present - added, caps)
            if stage_caps is None:
                return None
            caps.update(stage_caps)
            stages.append(Stage(kind=kind, path=tuple(path), caps=stage_caps))
        return tuple(stages)

    def _degree(self, v: int, present: t.AbstractSet[int]) -> int:
        return len(self.h.adjacency[v] & present)

    def _is_path(self, path: t.Sequence[int]) -> bool:
        return all(self.h.has_edge(u, v) for u, v in zip(path, path[1:]))

    def _thread_fits(self, path: t.Sequence[int], present: t.AbstractSet[int], inner: t.AbstractSet[int]) -> bool:
        return (
            self._is_path(path)
            and path[0] in inner
            and path[-1] in inner
            and all(self._degree(v, present) == 2 for v in path[1:-1])
        )

    def _stage_caps(
            self,
            kind: StageKind,
            path: t.Tuple[int, ...],
            present: t.FrozenSet[int],
            inner: t.FrozenSet[int],
            caps: t.Mapping[int, int]
    ) -> t.Optional[t.Dict[int, int]]:
        def bound_of(u: int) -> int:
            return caps.get(u, self.bound)

        if kind is StageKind.KEY:
            v, = path
            s = self.list_size - self._degree(v, present) - 1
            if s < 1:
                return None
            cap = ceil_div(sum(bound_of(u) for u in self.h.adjacency[v] & present), s) + 1
            return {v: cap} if cap <= self.bound else None

        elif kind is StageKind.TWO_THREAD:
            if len(path) != 4 or not self._thread_fits(path, present, inner):
                return None
            if (s := bound_of(path[3])) > TWO_THREAD_MAX_SLACK:
                return None
            return {path[1]: 14, path[2]: s + 3}

        elif kind is StageKind.THREE_THREAD:
            if len(path) != 5 or not self._thread_fits(path, present, inner):
                return None
            return {path[1]: 14, path[2]: 4, path[3]: 14}

        elif kind is StageKind.PENDANT_TRIPLE:
            v, *ws = path
            if self.h.adjacency[v] != frozenset(ws) or any(self._degree(w, present) != 2 for w in ws):
                return None
            if any(self.h.adjacency[w] - {v} - inner for w in ws):
                return None
            return {v: 4, **{w: 14 for w in ws}}

        elif kind is StageKind.DEG3_PAIR:
            v, w1, w2, x = path
            if self.h.adjacency[v] != frozenset([w1, w2, x]) or x not in inner:
                return None
            if any(self._degree(u, present) != 3 for u in (v, w1, w2)):
                return None
            return {v: 12, w1: 12, w2: 12}

        elif kind is StageKind.DEG4_STAR:
            v, *ws = path
            if self.h.adjacency[v] != frozenset(ws) or any(self._degree(w, present) != 3 for w in ws):
                return None
            return {v: 10, **{w: 12 for w in ws}}

        return None


def _match(
        planner: _Planner,
        kind: ConfigKind,
        roles: Roles,
        specs: t.Sequence[StageSpec]
) -> t.Optional[ConfigMatch]:
    if (stages := planner.plan(specs)) is None:
        logger.debug(f"Skipping degenerate {kind.value} candidate {dict(roles)}")
        return None
    return ConfigMatch(kind=kind, roles=dict(roles), stages=stages)


def _key(*vertices: int) -> t.List[StageSpec]:
    return [(StageKind.KEY, (v,)) for v in vertices]


def _low_degree(g: Graph, planner: _Planner, kind: ConfigKind, max_degree: int) -> t.Optional[ConfigMatch]:
    for v in sorted(g.vertices):
        if g.degree(v) <= max_degree:
            if match := _match(planner, kind, {"v": v}, _key(v)):
                return match
    return None


# Re-add order along a path of 2 to 5 vertices, the middle of the path first
_PATH_ORDER = {
    2: (0, 1),
    3: (1, 0, 2),
    4: (1, 2, 0, 3),
    5: (2, 1, 3, 0, 4),
}


def _degree_paths(g: Graph, length: int) -> t.Iterator[t.Tuple[int, ...]]:
    """
    Paths with `length` edges between two 3-vertices through 4-vertices, in lexicographic order
    """
    def extend(path: t.List[int]) -> t.Iterator[t.Tuple[int, ...]]:
        if len(path) == length + 1:
            if g.degree(path[-1]) == 3:
                yield tuple(path)
            return
        for u in sorted(g.adjacency[path[-1]]):
            if u in path:
                continue
            wanted = 3 if len(path) == length else 4
            if g.degree(u) == wanted:
                yield from extend(path + [u])

    for v in sorted(g.vertices):
        if g.degree(v) == 3:
            yield from extend([v])


def _four_faces(g: Graph) -> t.Iterator[t.Tuple[int, int, int, int]]:
    for component in g.components():
        sub = g.subgraph(component)
        if sub.m == 0:
            continue
        for face in trace_faces(sub):
            cycle = face.vertex_incidences
            if len(cycle) == 4 and len(set(cycle)) == 4:
                yield cycle


def search_thm1(g: Graph) -> t.Optional[ConfigMatch]:
    planner = _Planner(g, Theorem.TRIANGLE_FREE_PLANAR)
    if match := _low_degree(g, planner, ConfigKind.DEG2_OR_LESS, 2):
        return match

    for v in sorted(g.vertices):
        threes = sorted(u for u in g.adjacency[v] if g.degree(u) == 3)
        if g.degree(v) == 5 and len(threes) >= 3:
            ws = tuple(threes[:3])
            if match := _match(planner, ConfigKind.T1A_5VERTEX_THREE_3NBRS, {"v": v, "w": ws}, _key(v, *ws)):
                return match

    for length in range(1, MAX_PATH_LENGTH + 1):
        for path in _degree_paths(g, length):
            order = [path[idx] for idx in _PATH_ORDER[len(path)]]
            if match := _match(planner, ConfigKind.T1B_PATH, {"path": path}, _key(*order)):
                return match

    if g.rotation is None:
        raise EmbeddingInvalidError("Face configurations need a rotation system")
    faces = list(_four_faces(g))
    for cycle in faces:
        for x, a, z, b in _face_rotations(cycle):
            if [g.degree(u) for u in (x, a, z, b)] == [3, 4, 4, 4]:
                roles = {"face": (x, a, z, b)}
                if match := _match(planner, ConfigKind.T1C_4FACE_3444, roles, _key(z, a, b, x)):
                    return match

    for cycle in faces:
        for x, a, z, b in _face_rotations(cycle):
            if [g.degree(u) for u in (x, a, z, b)] not in ([3, 4, 5, 4], [3, 4, 4, 5]):
                continue
            five = next(u for u in (a, z, b) if g.degree(u) == 5)
            for w in sorted(g.adjacency[five] - {x, a, z, b}):
                if g.degree(w) != 3:
                    continue
                roles = {"face": (x, a, z, b), "w": w}
                if match := _match(planner, ConfigKind.T1D_4FACE_5WITH3, roles, _key(z, a, b, x, w)):
                    return match

    return None


def _face_rotations(cycle: t.Sequence[int]) -> t.Iterator[t.Tuple[int, int, int, int]]:
    """
    The face read from each of its vertices, in both directions
    """
    for idx in range(4):
        forward = tuple(cycle[(idx + step) % 4] for step in range(4))
        yield forward
        yield (forward[0], forward[3], forward[2], forward[1])


def search_thm2(g: Graph) -> t.Optional[ConfigMatch]:
    planner = _Planner(g, Theorem.MAD_17_5)
    if match := _low_degree(g, planner, ConfigKind.T2I_2MINUS, 2):
        return match

    for v in sorted(g.vertices):
        if g.degree(v) != 3:
            continue
        threes = sorted(u for u in g.adjacency[v] if g.degree(u) == 3)
        for w1, w2 in itertools.combinations(threes, 2):
            x, = g.adjacency[v] - {w1, w2}
            roles = {"v": v, "w": (w1, w2), "x": x}
            if match := _match(planner, ConfigKind.T2II_3V_TWO_3NBRS, roles, [(StageKind.DEG3_PAIR, (v, w1, w2, x))]):
                return match

    for v in sorted(g.vertices):
        if g.degree(v) == 4 and all(g.degree(u) == 3 for u in g.adjacency[v]):
            ws = tuple(sorted(g.adjacency[v]))
            specs = [(StageKind.DEG4_STAR, (v, *ws))]
            if match := _match(planner, ConfigKind.T2III_4V_FOUR_3NBRS, {"v": v, "w": ws}, specs):
                return match

    return None


def _bare_cycle(g: Graph, planner: _Planner) -> t.Optional[ConfigMatch]:
    for component in g.components():
        if len(component) < 3 or any(g.degree(v) != 2 for v in component):
            continue

        start = min(component)
        order = [start, min(g.adjacency[start])]
        while len(order) < min(len(component), 5):
            order.append(next(iter(g.adjacency[order[-1]] - {order[-2]})))

        if len(component) == 3:
            roles = {"cycle": tuple(order)}
            match = _match(planner, ConfigKind.T3_ISOLATED_OR_1VERTEX, roles, _key(*order))
        else:
            thread = tuple(order) if len(order) == 5 else (*order, start)
            match = _match(planner, ConfigKind.T3_3THREAD, {"thread": thread}, [(StageKind.THREE_THREAD, thread)])
        if match:
            return match
    return None


def _distinct_threads(ends: t.Iterable[ThreadEnd]) -> t.List[ThreadEnd]:
    seen = set()
    distinct = []
    for end in ends:
        if end.thread not in seen:
            seen.add(end.thread)
            distinct.append(end)
    return distinct


def _two_thread_spec(end: ThreadEnd) -> StageSpec:
    """
    Re-add a 2-thread hanging off its anchor, the anchor being the low-count end
    """
    anchor, p1, p2, far = end.path
    return StageKind.TWO_THREAD, (far, p2, p1, anchor)


def _one_threads_through(ends: t.Sequence[ThreadEnd], anchor: int) -> t.Tuple[int, ...]:
    first, second = ends
    return first.far_end, first.path[1], anchor, second.path[1], second.far_end


def _high_thread_vertex(g: Graph, planner: _Planner) -> t.Optional[ConfigMatch]:
    for v in sorted(g.vertices):
        d = g.degree(v)
        if d not in (3, 4):
            continue
        ends = incident_threads(g, v)
        twos = [end for end in ends if end.k == 2]
        ones = [end for end in ends if end.k == 1]

        if len(twos) >= d - 1:
            chosen = _distinct_threads(twos[:d - 1])
            roles = {"v": v, "two_threads": tuple(end.path for end in chosen), "one_threads": ()}
            specs = _key(v) + [_two_thread_spec(end) for end in chosen]
            if match := _match(planner, ConfigKind.T3_HIGH_THREAD_VERTEX, roles, specs):
                return match

        if len(ones) >= 2 and len(twos) >= d - 2:
            chosen = _distinct_threads(twos[:d - 2])
            roles = {
                "v": v,
                "two_threads": tuple(end.path for end in chosen),
                "one_threads": tuple(end.path for end in ones[:2]),
            }
            specs = [(StageKind.THREE_THREAD, _one_threads_through(ones[:2], v))]
            specs += [_two_thread_spec(end) for end in chosen]
            if match := _match(planner, ConfigKind.T3_HIGH_THREAD_VERTEX, roles, specs):
                return match
    return None


def _ends_by_length(g: Graph, v: int) -> t.Dict[int, t.List[ThreadEnd]]:
    grouped: t.Dict[int, t.List[ThreadEnd]] = {}
    for end in incident_threads(g, v):
        grouped.setdefault(end.k, []).append(end)
    return grouped


def _rebuild_neighbour(profile: t.Tuple[int, ...], ends: t.Mapping[int, t.List[ThreadEnd]], w: int) -> t.List[StageSpec]:
    """
    Stages that re-add a 3-neighbour w together with its threads so that w ends with a small cap
    """
    if profile == (1, 1, 0):
        return [(StageKind.THREE_THREAD, _one_threads_through(ends[1], w))]

    _, a1, a2, y = ends[2][0].path
    if profile == (2, 1, 0):
        b_end, = ends[1]
        return _key(a2) + [(StageKind.THREE_THREAD, (a2, a1, w, b_end.path[1], b_end.far_end))]
    return _key(w) + [(StageKind.TWO_THREAD, (y, a2, a1, w))]


def _collapsed_321(
        v: int,
        w: int,
        w_ends: t.Sequence[ThreadEnd],
        one_end: ThreadEnd,
        taken: t.AbstractSet[int]
) -> t.List[StageSpec]:
    """
    Stages for a 321-adjacency where some thread of w is also a thread of v

    The threads of w that v does not own are re-added from their far side, then w alone, then
    v's 1-thread. v's 2-thread is appended by the caller.
    """
    specs: t.List[StageSpec] = []
    for end in w_ends:
        if taken.isdisjoint(end.interior):
            specs += _key(*reversed(end.interior))
    specs += _key(w)

    x = one_end.path[1]
    if one_end.far_end == w:
        specs += _key(x, v)
    else:
        specs.append((StageKind.TWO_THREAD, (one_end.far_end, x, v, w)))
    return specs


def _adjacent_321(g: Graph, planner: _Planner, profiles: t.Mapping) -> t.Optional[ConfigMatch]:
    for v in sorted(profiles):
        if profiles[v].profile != (2, 1, 0):
            continue
        ends = _ends_by_length(g, v)
        w = ends[0][0].far_end
        if w not in profiles or profiles[w].profile not in ((1, 1, 0), (2, 0, 0), (2, 1, 0)):
            continue

        one_end, two_end = ends[1][0], ends[2][0]
        taken = {one_end.path[1], *two_end.interior}
        w_ends = incident_threads(g, w)
        if any(not taken.isdisjoint(end.interior) for end in w_ends):
            specs = _collapsed_321(v, w, w_ends, one_end, taken)
        else:
            specs = _rebuild_neighbour(profiles[w].profile, _ends_by_length(g, w), w)
            specs.append((StageKind.TWO_THREAD, (one_end.far_end, one_end.path[1], v, w)))
        specs.append(_two_thread_spec(two_end))
        if match := _match(planner, ConfigKind.T3_321_ADJACENCY, {"v": v, "w": w}, specs):
            return match
    return None


def _weak_111(g: Graph, planner: _Planner, profiles: t.Mapping) -> t.Optional[ConfigMatch]:
    for v in sorted(profiles):
        if profiles[v].profile != (1, 1, 1):
            continue
        v_ends = incident_threads(g, v)
        for shared in v_ends:
            w, x = shared.far_end, shared.path[1]
            if w == v or w not in profiles:
                continue
            rest = [end for end in v_ends if end is not shared]
            specs = [(StageKind.THREE_THREAD, _one_threads_through(rest, v))]

            w_profile = profiles[w].profile
            if w_profile == (1, 1, 1):
                w_rest = [end for end in incident_threads(g, w) if end.path[1] != x]
                if len(w_rest) != 2:
                    continue
                specs.append((StageKind.THREE_THREAD, _one_threads_through(w_rest, w)))
            elif w_profile == (2, 1, 0):
                w_ends = _ends_by_length(g, w)
                if w_ends[1][0].path[1] != x:
                    continue
                _, b1, b2, y = w_ends[2][0].path
                specs += _key(w) + [(StageKind.TWO_THREAD, (y, b2, b1, w))]
            else:
                continue

            specs += _key(x)
            if match := _match(planner, ConfigKind.T3_111_WEAK, {"v": v, "w": w, "x": x}, specs):
                return match
    return None


def search_thm3(g: Graph, allow_conditional: bool = True) -> t.Optional[ConfigMatch]:
    """
    Scan for a sparse-graph configuration in a fixed preference order

    The pendant triple is only reducible when the inner sequence recolors one far end at most
    9 times, so callers can switch it off.
    """
    planner = _Planner(g, Theorem.MAD_22_9)
    if match := _low_degree(g, planner, ConfigKind.T3_ISOLATED_OR_1VERTEX, 1):
        return match
    elif match := _bare_cycle(g, planner):
        return match

    # Bare-cycle components were matched above, every remaining component has a 3+-vertex
    for thread in find_threads(g):
        if thread.k >= 3:
            path = thread.path[:5]
            if match := _match(planner, ConfigKind.T3_3THREAD, {"thread": path}, [(StageKind.THREE_THREAD, path)]):
                return match

    if allow_conditional:
        for v in sorted(g.vertices):
            if g.degree(v) == 3 and all(g.degree(w) == 2 for w in g.adjacency[v]):
                ws = tuple(sorted(g.adjacency[v]))
                specs = [(StageKind.PENDANT_TRIPLE, (v, *ws))]
                if match := _match(planner, ConfigKind.T3_PENDANT_TRIPLE, {"v": v, "w": ws}, specs):
                    return match

    if match := _high_thread_vertex(g, planner):
        return match

    profiles = classify_three_vertices(g)
    if match := _adjacent_321(g, planner, profiles):
        return match
    return _weak_111(g, planner, profiles)


def _require(match: t.Optional[ConfigMatch], theorem: Theorem, g: Graph) -> ConfigMatch:
    if match is None:
        raise StructuralClaimViolation(
            f"No reducible configuration for theorem {theorem.value} in a graph on {g.n} vertices; "
            f"either the graph is outside the theorem's hypothesis or no planned reduction fits it"
        )
    logger.debug(f"Found configuration {match}")
    return match


def find_config_thm1(g: Graph) -> ConfigMatch:
    return _require(search_thm1(g), Theorem.TRIANGLE_FREE_PLANAR, g)


def find_config_thm2(g: Graph) -> ConfigMatch:
    return _require(search_thm2(g), Theorem.MAD_17_5, g)


def find_config_thm3(g: Graph, allow_conditional: bool = True) -> ConfigMatch:
    return _require(search_thm3(g, allow_conditional), Theorem.MAD_22_9, g)


def find_config_baseline(g: Graph, lists: ListAssignment) -> ConfigMatch:
    if lists.min_size < 2 * g.max_degree + 1:
        raise StructuralClaimViolation(
            f"Smallest list has {lists.min_size} colors, at least 2 * {g.max_degree} + 1 are needed"
        )
    return ConfigMatch(kind=ConfigKind.HIGH_DEGREE_BASELINE, roles={"max_degree": g.max_degree})


def find_config(theorem: Theorem, g: Graph, lists: t.Optional[ListAssignment] = None) -> ConfigMatch:
    if theorem is Theorem.TRIANGLE_FREE_PLANAR:
        return find_config_thm1(g)
    elif theorem is Theorem.MAD_17_5:
        return find_config_thm2(g)
    elif theorem is Theorem.MAD_22_9:
        return find_config_thm3(g)
    elif lists is None:
        raise ValueError("The baseline configuration depends on the list assignment")
    return find_config_baseline(g, lists)


# Independent re-check of a match against the host graph. Thread shapes are walked here directly
# rather than through the graph module so that a bug in one does not hide in the other.

def _arm(g: Graph, v: int, first: int) -> t.Tuple[int, ...]:
    arm = [v]
    prev, cur = v, first
    while g.degree(cur) == 2 and cur != v:
        arm.append(cur)
        prev, cur = cur, min(g.adjacency[cur] - {prev})
    arm.append(cur)
    return tuple(arm)


def _profile(g: Graph, v: int) -> t.Tuple[int, ...]:
    return tuple(sorted((len(_arm(g, v, u)) - 2 for u in g.adjacency[v]), reverse=True))


def _is_face(g: Graph, cycle: t.Sequence[int]) -> bool:
    def turn(u: int, v: int) -> int:
        order = g.rotation[v]
        return order[(order.index(u) + 1) % len(order)]

    for walk in (tuple(cycle), tuple(reversed(cycle))):
        u, v = walk[0], walk[1]
        seen = []
        for _ in range(4):
            seen.append(u)
            u, v = v, turn(u, v)
        if seen == list(walk) and (u, v) == (walk[0], walk[1]):
            return True
    return False


def _is_thread(g: Graph, path: t.Sequence[int]) -> bool:
    return all(g.has_edge(u, v) for u, v in zip(path, path[1:])) and all(g.degree(v) == 2 for v in path[1:-1])


def _check_roles(g: Graph, match: ConfigMatch) -> t.Optional[str]:
    kind, roles = match.kind, match.roles
    deg = g.degree

    if kind in (ConfigKind.DEG2_OR_LESS, ConfigKind.T2I_2MINUS):
        return None if deg(roles["v"]) <= 2 else "vertex has degree above 2"

    elif kind is ConfigKind.T1A_5VERTEX_THREE_3NBRS:
        v, ws = roles["v"], roles["w"]
        if deg(v) != 5 or len(set(ws)) != 3:
            return "centre is not a 5-vertex with three distinct neighbours listed"
        return None if all(g.has_edge(v, w) and deg(w) == 3 for w in ws) else "listed neighbour is not a 3-neighbour"

    elif kind is ConfigKind.T1B_PATH:
        path = roles["path"]
        if not 2 <= len(path) <= 5 or len(set(path)) != len(path):
            return "path length out of range"
        if not all(g.has_edge(u, v) for u, v in zip(path, path[1:])):
            return "path edge missing"
        inner_ok = all(deg(v) == 4 for v in path[1:-1])
        return None if deg(path[0]) == deg(path[-1]) == 3 and inner_ok else "path degrees are not 3, 4, ..., 4, 3"

    elif kind in (ConfigKind.T1C_4FACE_3444, ConfigKind.T1D_4FACE_5WITH3):
        face = roles["face"]
        if g.rotation is None or len(set(face)) != 4 or not _is_face(g, face):
            return "vertices do not bound a 4-face"
        degrees = [deg(u) for u in face]
        if kind is ConfigKind.T1C_4FACE_3444:
            return None if degrees == [3, 4, 4, 4] else "face degrees are not (3,4,4,4)"
        if degrees not in ([3, 4, 5, 4], [3, 4, 4, 5]):
            return "face degrees are not (3,4,5,4) or (3,4,4,5)"
        five = face[degrees.index(5)]
        w = roles["w"]
        return None if w not in face and deg(w) == 3 and g.has_edge(five, w) else "5-vertex lacks a 3-neighbour off the face"

    elif kind is ConfigKind.T2II_3V_TWO_3NBRS:
        v, (w1, w2), x = roles["v"], roles["w"], roles["x"]
        if deg(v) != 3 or g.adjacency[v] != frozenset([w1, w2, x]):
            return "roles do not cover the neighbourhood of a 3-vertex"
        return None if deg(w1) == deg(w2) == 3 else "listed neighbours are not 3-vertices"

    elif kind is ConfigKind.T2III_4V_FOUR_3NBRS:
        v, ws = roles["v"], roles["w"]
        if deg(v) != 4 or g.adjacency[v] != frozenset(ws):
            return "roles do not cover the neighbourhood of a 4-vertex"
        return None if all(deg(w) == 3 for w in ws) else "some neighbour is not a 3-vertex"

    elif kind is ConfigKind.T3_ISOLATED_OR_1VERTEX:
        if "cycle" in roles:
            cycle = roles["cycle"]
            closed = all(g.has_edge(cycle[idx], cycle[idx - 1]) for idx in range(len(cycle)))
            return None if len(cycle) == 3 and closed and all(deg(v) == 2 for v in cycle) else "not a bare triangle"
        return None if deg(roles["v"]) <= 1 else "vertex has degree above 1"

    elif kind is ConfigKind.T3_3THREAD:
        path = roles["thread"]
        return None if len(path) == 5 and _is_thread(g, path) else "not a 3-thread"

    elif kind is ConfigKind.T3_PENDANT_TRIPLE:
        v, ws = roles["v"], roles["w"]
        if deg(v) != 3 or g.adjacency[v] != frozenset(ws):
            return "roles do not cover the neighbourhood of a 3-vertex"
        return None if all(deg(w) == 2 for w in ws) else "some neighbour is not a 2-vertex"

    elif kind is ConfigKind.T3_HIGH_THREAD_VERTEX:
        v = roles["v"]
        twos, ones = roles["two_threads"], roles["one_threads"]
        if deg(v) not in (3, 4):
            return "anchor is not a 3- or 4-vertex"
        if not all(len(p) == 4 and p[0] == v and _is_thread(g, p) and deg(p[-1]) >= 3 for p in twos):
            return "listed 2-thread is not a maximal 2-thread at the anchor"
        if not all(len(p) == 3 and p[0] == v and _is_thread(g, p) and deg(p[-1]) >= 3 for p in ones):
            return "listed 1-thread is not a maximal 1-thread at the anchor"
        incidences = sum(2 if p[-1] == v else 1 for p in twos)
        if ones:
            return None if len(ones) == 2 and incidences >= deg(v) - 2 else "too few incident threads"
        return None if incidences >= deg(v) - 1 else "too few incident 2-threads"

    elif kind is ConfigKind.T3_321_ADJACENCY:
        v, w = roles["v"], roles["w"]
        if not g.has_edge(v, w) or deg(v) != 3 or deg(w) != 3:
            return "v and w are not adjacent 3-vertices"
        if _profile(g, v) != (2, 1, 0):
            return "v is not a 3_{2,1,0}-vertex"
        return None if _profile(g, w) in ((1, 1, 0), (2, 0, 0), (2, 1, 0)) else "w has the wrong thread profile"

    elif kind is ConfigKind.T3_111_WEAK:
        v, w, x = roles["v"], roles["w"], roles["x"]
        if deg(x) != 2 or g.adjacency[x] != frozenset([v, w]):
            return "x is not a common 2-neighbour of v and w"
        if deg(v) != 3 or _profile(g, v) != (1, 1, 1):
            return "v is not a 3_{1,1,1}-vertex"
        return None if deg(w) == 3 and _profile(g, w) in ((1, 1, 1), (2, 1, 0)) else "w has the wrong thread profile"

    elif kind is ConfigKind.HIGH_DEGREE_BASELINE:
        return None

    return f"unknown configuration kind {kind}"


def check_match(g: Graph, match: ConfigMatch) -> bool:
    """
    Re-verify that a match's roles satisfy its configuration in `g`
    """
    if reason := _check_roles(g, match):
        logger.debug(f"Match {match} rejected: {reason}")
        return False
    if not match.deleted <= g.vertices:
        logger.debug(f"Match {match} rejected: deletion set leaves the graph")
        return False
    return True
