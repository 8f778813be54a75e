from __future__ import annotations

import time
import logging
import dataclasses
import typing as t
from fractions import Fraction

from .common import (
    Theorem,
    StageKind,
    GraphError,
    HypothesisError,
    ExtensionInapplicableError,
    InternalInvariantError,
)
from .coloring import ListAssignment, RecoloringSequence, RecoloringStep, find_conflict, validate_sequence
from .detectors import ConfigMatch, Stage, check_match, find_config_thm1, find_config_thm2, find_config_thm3
from .extenders import (
    extend_key_lemma,
    extend_two_thread,
    extend_three_thread,
    extend_pendant_triple,
    extend_deg3_two_deg3_neighbors,
    extend_deg4_four_deg3_neighbors,
    pendant_far_ends,
)
from .graph import Graph, check_embedding, is_triangle_free
from .metrics import mad_exact, girth


logger = logging.getLogger(__name__)

MAD_BOUNDS = {
    Theorem.MAD_17_5: Fraction(17, 5),
    Theorem.MAD_22_9: Fraction(22, 9),
}
# Planar graphs of at least this girth have mad below the theorem's bound
PLANAR_GIRTH = {
    Theorem.MAD_17_5: 5,
    Theorem.MAD_22_9: 11,
}
PENDANT_FAR_END_LIMIT = 9


@dataclasses.dataclass(frozen=True)
class Reduction:
    graph: Graph
    match: ConfigMatch


class _ConditionalRejected(ExtensionInapplicableError):
    def __init__(self, level: int):
        self.level = level
        super().__init__(f"Conditional configuration at level {level} is not reducible here")


def _check_colorings(g: Graph, lists: ListAssignment, alpha: t.Mapping[int, int], beta: t.Mapping[int, int]):
    if missing := sorted(v for v in g.vertices if v not in lists):
        raise HypothesisError(f"No list given for vertex {missing[0]}")
    for name, coloring in (("alpha", alpha), ("beta", beta)):
        if missing := sorted(v for v in g.vertices if v not in coloring):
            raise HypothesisError(f"{name} does not color vertex {missing[0]}")
        if (conflict := find_conflict(g, lists, coloring)) is not None:
            raise HypothesisError(f"{name} is not a proper L-coloring: {conflict}")


def _check_list_size(g: Graph, lists: ListAssignment, k: int):
    if wrong := sorted(v for v in g.vertices if len(lists[v]) != k):
        raise HypothesisError(f"Lists must have exactly {k} colors, vertex {wrong[0]} has {len(lists[wrong[0]])}")


def check_hypotheses(theorem: Theorem, g: Graph, lists: ListAssignment, alpha, beta) -> str:
    """
    Validate a theorem's hypothesis on the input, returning how the sparsity part was established
    """
    _check_colorings(g, lists, alpha, beta)

    if theorem is Theorem.BASELINE:
        need = 2 * g.max_degree + 1
        if lists.restrict(g.vertices).min_size < need:
            raise HypothesisError(f"Every list needs at least 2 * {g.max_degree} + 1 = {need} colors")
        return "list size"

    _check_list_size(g, lists, theorem.list_size)
    if g.m == 0:
        return "edgeless graph"

    if theorem is Theorem.TRIANGLE_FREE_PLANAR:
        if g.rotation is None:
            raise HypothesisError("Triangle-free planar instances need a rotation system")
        try:
            check_embedding(g)
        except GraphError as exc:
            raise HypothesisError(f"Rotation is not a planar embedding: {exc}") from exc
        if not is_triangle_free(g):
            raise HypothesisError("Graph contains a triangle")
        return "planar embedding"

    if g.rotation is not None and (g_girth := girth(g)) >= PLANAR_GIRTH[theorem]:
        try:
            check_embedding(g)
            return f"planar embedding with girth {g_girth}"
        except GraphError as exc:
            logger.debug(f"Embedded route rejected, falling back to mad: {exc}")

    density = mad_exact(g)
    if density.mad >= MAD_BOUNDS[theorem]:
        raise HypothesisError(f"{density} is not below {MAD_BOUNDS[theorem]}", report=density)
    return f"mad {density.mad}"


class _Solver:
    def __init__(
            self,
            theorem: Theorem,
            g: Graph,
            lists: ListAssignment,
            alpha: t.Mapping[int, int],
            beta: t.Mapping[int, int]
    ):
        self.theorem = theorem
        self.g = g
        self.lists = lists
        self.alpha = dict(alpha)
        self.beta = dict(beta)
        self.allow_conditional = True

    def solve(self) -> RecoloringSequence:
        route = check_hypotheses(self.theorem, self.g, self.lists, self.alpha, self.beta)
        logger.info(f"Hypothesis of theorem {self.theorem.value} holds via {route}")

        start = time.monotonic()
        seq = RecoloringSequence.empty({})
        for component in self.g.components():
            seq = seq.concat(self._solve_component(self.g.subgraph(component)))

        report = validate_sequence(self.g, self.lists, seq, self.beta, k=self.theorem.bound)
        if not report.valid:
            raise InternalInvariantError(f"Synthesized sequence failed validation: {report}")

        end = time.monotonic()
        logger.debug(f"Solved {self.g.n} vertices with {len(seq)} steps, {report}, in {(end - start):.2f} s")
        return seq

    def _detect(self, h: Graph) -> ConfigMatch:
        if self.theorem is Theorem.TRIANGLE_FREE_PLANAR:
            match = find_config_thm1(h)
        elif self.theorem is Theorem.MAD_17_5:
            match = find_config_thm2(h)
        else:
            match = find_config_thm3(h, allow_conditional=self.allow_conditional)

        if not check_match(h, match):
            raise InternalInvariantError(f"Detector returned a match that fails re-verification: {match}")
        return match

    def _reduce(self, h: Graph) -> t.List[Reduction]:
        reductions = []
        while h.n:
            match = self._detect(h)
            reductions.append(Reduction(graph=h, match=match))
            logger.debug(f"Level {len(reductions) - 1}: {match}, deleting {len(match.deleted)} of {h.n} vertices")
            h = h.remove(match.deleted)
        return reductions

    def _solve_component(self, h: Graph) -> RecoloringSequence:
        reductions = self._reduce(h)
        while True:
            try:
                return self._extend_all(reductions)
            except _ConditionalRejected as exc:
                logger.warning(f"{exc}, re-detecting without conditional configurations")
                self.allow_conditional = False
                reductions = reductions[:exc.level] + self._reduce(reductions[exc.level].graph)

    def _extend_all(self, reductions: t.Sequence[Reduction]) -> RecoloringSequence:
        seq = RecoloringSequence.empty({})
        for level in reversed(range(len(reductions))):
            reduction = reductions[level]
            seq = extend_match(reduction.graph, reduction.match, self.lists, self.alpha, self.beta, seq, level=level)
        return seq


def extend_match(
        h: Graph,
        match: ConfigMatch,
        lists: ListAssignment,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        inner: RecoloringSequence,
        level: int = 0
) -> RecoloringSequence:
    """
    Re-add the vertices `match` deletes from `h`, innermost stage first

    `inner` recolors `h` minus the deleted vertices. Every stage's caps are checked on the way out,
    a conditional stage that does not apply raises `ExtensionInapplicableError`.
    """
    later = match.deleted
    for stage in match.stages:
        later = later - frozenset(stage.added)
        stage_graph = h.remove(later)
        inner = _apply_stage(stage, stage_graph, lists, alpha, beta, inner, level)
        for v, cap in stage.caps.items():
            if inner.count(v) > cap:
                raise InternalInvariantError(
                    f"{match.kind.value}: vertex {v} recolored {inner.count(v)} times, stage cap is {cap}"
                )
    return inner


def _apply_stage(
        stage: Stage,
        h: Graph,
        lists: ListAssignment,
        alpha: t.Mapping[int, int],
        beta: t.Mapping[int, int],
        inner: RecoloringSequence,
        level: int
) -> RecoloringSequence:
    path = stage.path
    if stage.kind is StageKind.KEY:
        return extend_key_lemma(h, lists, path[0], inner, alpha, beta, depth=level)
    elif stage.kind is StageKind.TWO_THREAD:
        return extend_two_thread(h, lists, path, inner, alpha, beta, s=stage.caps[path[2]] - 3, depth=level)
    elif stage.kind is StageKind.THREE_THREAD:
        return extend_three_thread(h, lists, path, inner, alpha, beta, depth=level)
    elif stage.kind is StageKind.DEG3_PAIR:
        v, w1, w2, x = path
        return extend_deg3_two_deg3_neighbors(h, lists, v, w1, w2, x, inner, alpha, beta, depth=level)
    elif stage.kind is StageKind.DEG4_STAR:
        return extend_deg4_four_deg3_neighbors(h, lists, path[0], path[1:], inner, alpha, beta, depth=level)

    v, ws = path[0], path[1:]
    far = dict(zip(ws, pendant_far_ends(h, v, ws)))
    w1 = min(ws, key=lambda w: (inner.count(far[w]), w))
    if inner.count(far[w1]) > PENDANT_FAR_END_LIMIT:
        raise _ConditionalRejected(level)
    ordered = (w1, *(w for w in ws if w != w1))
    try:
        return extend_pendant_triple(h, lists, v, ordered, inner, alpha, beta, depth=level)
    except ExtensionInapplicableError as exc:
        logger.debug(f"Pendant triple at {v} rejected: {exc}")
        raise _ConditionalRejected(level) from exc


def solve_thm1(g: Graph, lists: ListAssignment, alpha, beta) -> RecoloringSequence:
    """
    30-good recoloring of a triangle-free planar graph with 7-lists
    """
    return _Solver(Theorem.TRIANGLE_FREE_PLANAR, g, lists, alpha, beta).solve()


def solve_thm2(g: Graph, lists: ListAssignment, alpha, beta) -> RecoloringSequence:
    """
    12-good recoloring of a graph with mad < 17/5 and 6-lists
    """
    return _Solver(Theorem.MAD_17_5, g, lists, alpha, beta).solve()


def solve_thm3(g: Graph, lists: ListAssignment, alpha, beta) -> RecoloringSequence:
    """
    14-good recoloring of a graph with mad < 22/9 and 4-lists
    """
    return _Solver(Theorem.MAD_22_9, g, lists, alpha, beta).solve()


def solve_high_degree(g: Graph, lists: ListAssignment, alpha, beta) -> RecoloringSequence:
    """
    Recolor every vertex at most twice when each list has at least 2 * max degree + 1 colors

    The first pass moves each vertex whose color some neighbour wants in beta to a color that
    no neighbour has now or wants later. The second pass then sets every vertex to beta.
    """
    check_hypotheses(Theorem.BASELINE, g, lists, alpha, beta)

    current = {v: alpha[v] for v in g.vertices}
    steps: t.List[RecoloringStep] = []
    for v in sorted(g.vertices):
        wanted = {beta[u] for u in g.adjacency[v]}
        if current[v] not in wanted:
            continue
        blocked = wanted | {current[u] for u in g.adjacency[v]} | {current[v]}
        color = min(lists[v] - blocked)
        current[v] = color
        steps.append(RecoloringStep(v, color))

    for v in sorted(g.vertices):
        if current[v] != beta[v]:
            current[v] = beta[v]
            steps.append(RecoloringStep(v, beta[v]))

    seq = RecoloringSequence(start={v: alpha[v] for v in g.vertices}, steps=tuple(steps))
    report = validate_sequence(g, lists, seq, beta, k=Theorem.BASELINE.bound)
    if not report.valid or len(seq) > 2 * g.n:
        raise InternalInvariantError(f"Baseline sequence failed validation: {report}")
    return seq


def solve(theorem: Theorem, g: Graph, lists: ListAssignment, alpha, beta) -> RecoloringSequence:
    if theorem is Theorem.BASELINE:
        return solve_high_degree(g, lists, alpha, beta)
    return _Solver(theorem, g, lists, alpha, beta).solve()
