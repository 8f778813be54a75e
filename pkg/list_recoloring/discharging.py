from __future__ import annotations

import enum
import logging
import dataclasses
import typing as t
from collections import Counter
from fractions import Fraction

from .common import HypothesisError, ConfigurationPresentError, InternalInvariantError
from .detectors import search_thm1, search_thm2, search_thm3
from .graph import Graph, Face, check_embedding, is_triangle_free, incident_threads, classify_three_vertices
from .utils import format_fraction


logger = logging.getLogger(__name__)


@enum.unique
class ElementKind(enum.Enum):
    VERTEX = "vertex"
    FACE = "face"


Element = t.Tuple[ElementKind, int]


def vertex(v: int) -> Element:
    return ElementKind.VERTEX, v


def face(idx: int) -> Element:
    return ElementKind.FACE, idx


@dataclasses.dataclass(frozen=True)
class Transfer:
    source: Element
    target: Element
    amount: Fraction
    rule: str


@dataclasses.dataclass
class ChargeLedger:
    """
    Initial charges, every transfer made by the rules, and the resulting final charges
    """
    name: str
    bound: Fraction
    initial: t.Dict[Element, Fraction]
    transfers: t.List[Transfer] = dataclasses.field(default_factory=list)
    notes: t.List[str] = dataclasses.field(default_factory=list)

    def send(self, source: Element, target: Element, amount: Fraction, rule: str):
        if amount:
            self.transfers.append(Transfer(source, target, Fraction(amount), rule))

    def charge(self, element: Element) -> Fraction:
        """
        Charge of one element given the transfers recorded so far
        """
        total = self.initial[element]
        for transfer in self.transfers:
            if transfer.target == element:
                total += transfer.amount
            if transfer.source == element:
                total -= transfer.amount
        return total

    @property
    def final(self) -> t.Dict[Element, Fraction]:
        final = dict(self.initial)
        for transfer in self.transfers:
            final[transfer.source] -= transfer.amount
            final[transfer.target] += transfer.amount
        return final

    @property
    def conserved(self) -> bool:
        known = self.initial.keys()
        if any(tr.source not in known or tr.target not in known for tr in self.transfers):
            return False
        return sum(self.final.values()) == sum(self.initial.values())

    @property
    def violations(self) -> t.List[Element]:
        final = self.final
        return sorted((e for e, charge in final.items() if charge < self.bound), key=_element_key)

    @property
    def minimum(self) -> t.Optional[Fraction]:
        return min(self.final.values(), default=None)

    @property
    def holds(self) -> bool:
        return not self.violations and not self.notes

    def to_text(self) -> str:
        final = self.final
        lines = [
            f"element {kind.value} {idx} {format_fraction(self.initial[(kind, idx)])} {format_fraction(final[(kind, idx)])}"
            for kind, idx in sorted(self.initial, key=_element_key)
        ]
        lines += [
            f"transfer {tr.source[0].value} {tr.source[1]} {tr.target[0].value} {tr.target[1]} "
            f"{format_fraction(tr.amount)} {tr.rule}"
            for tr in self.transfers
        ]
        return "\n".join(lines) + "\n"


def _element_key(element: Element) -> t.Tuple[str, int]:
    return element[0].value, element[1]


def _finish(ledger: ChargeLedger) -> ChargeLedger:
    if not ledger.conserved:
        raise InternalInvariantError(f"Charge is not conserved by the {ledger.name} rules")
    logger.debug(f"{ledger.name}: minimum final charge {ledger.minimum}, {len(ledger.violations)} below {ledger.bound}")
    return ledger


# Degrees after the 5-vertex, going around the face, for the 4-faces taking more than 1/2 from it
_NEEDY_FACE_PATTERNS = (
    (1, lambda d1, d2, d3: d1 == 3 and d3 == 3 and d2 >= 5),
    (2, lambda d1, d2, d3: (d1, d2, d3) == (4, 3, 4)),
    (3, lambda d1, d2, d3: (d1, d2, d3) == (4, 4, 3)),
    (4, lambda d1, d2, d3: (d1, d2, d3) == (4, 5, 3)),
    (5, lambda d1, d2, d3: (d1, d2, d3) == (5, 4, 3)),
    (6, lambda d1, d2, d3: (d1, d2, d3) == (5, 5, 3)),
)
NEEDY_FACE_TAKES = {
    1: Fraction(1),
    2: Fraction(1),
    3: Fraction(1),
    4: Fraction(3, 4),
    5: Fraction(3, 4),
    6: Fraction(2, 3),
}


def needy_face_type(degrees: t.Sequence[int]) -> t.Optional[int]:
    """
    Type of a 4-face from its cyclic degree sequence starting at a 5-vertex, up to reflection
    """
    if len(degrees) != 4 or degrees[0] != 5:
        return None
    _, d1, d2, d3 = degrees
    for face_type, pattern in _NEEDY_FACE_PATTERNS:
        if pattern(d1, d2, d3) or pattern(d3, d2, d1):
            return face_type
    return None


def _face_gift(degree: int) -> Fraction:
    if degree == 4:
        return Fraction(1, 2)
    elif degree >= 6:
        return Fraction(1)
    return Fraction(0)


def face_take(degrees: t.Sequence[int]) -> t.Optional[Fraction]:
    """
    What a face with these incidence degrees takes from each incident 5-vertex

    `None` when the face still needs charge but has no incident 5-vertex.
    """
    need = max(Fraction(0), 6 - len(degrees) - sum(_face_gift(d) for d in degrees))
    if not need:
        return Fraction(0)
    elif not (fives := sum(1 for d in degrees if d == 5)):
        return None
    return need / fives


def audit_girth4(g: Graph, require_config_free: bool = True) -> ChargeLedger:
    """
    Vertex and face charges 2d(v) - 6 and l(f) - 6 on an embedded triangle-free graph
    """
    components = check_embedding(g)
    if require_config_free:
        if not is_triangle_free(g):
            raise HypothesisError("Graph contains a triangle")
        if (match := search_thm1(g)) is not None:
            raise ConfigurationPresentError(match)

    faces: t.List[Face] = [f for traced in components for f in traced]
    initial = {vertex(v): Fraction(2 * g.degree(v) - 6) for v in g.vertices}
    initial.update({face(idx): Fraction(f.length - 6) for idx, f in enumerate(faces)})
    ledger = ChargeLedger(name="girth4", bound=Fraction(0), initial=initial)

    for idx, f in enumerate(faces):
        for v in f.vertex_incidences:
            if g.degree(v) == 4:
                ledger.send(vertex(v), face(idx), Fraction(1, 2), "R1")
    for idx, f in enumerate(faces):
        for v in f.vertex_incidences:
            if g.degree(v) >= 6:
                ledger.send(vertex(v), face(idx), Fraction(1), "R2")

    for idx, f in enumerate(faces):
        degrees = [g.degree(v) for v in f.vertex_incidences]
        if (take := face_take(degrees)) is None:
            ledger.notes.append(f"face {idx} still needs {format_fraction(-ledger.charge(face(idx)))} "
                                f"and has no incident 5-vertex")
            continue
        for v in f.vertex_incidences:
            if g.degree(v) == 5:
                ledger.send(vertex(v), face(idx), take, "R3")

    return _finish(ledger)


def audit_mad175(g: Graph, require_config_free: bool = True) -> ChargeLedger:
    """
    Vertex charge d(v); each 3-vertex takes 1/5 from each 4+-neighbour
    """
    if require_config_free and (match := search_thm2(g)) is not None:
        raise ConfigurationPresentError(match)

    ledger = ChargeLedger(
        name="mad175",
        bound=Fraction(17, 5),
        initial={vertex(v): Fraction(g.degree(v)) for v in g.vertices}
    )
    for v in sorted(g.vertices):
        if g.degree(v) == 3:
            for u in sorted(g.adjacency[v]):
                if g.degree(u) >= 4:
                    ledger.send(vertex(u), vertex(v), Fraction(1, 5), "R1")
    return _finish(ledger)


def _weak_three_neighbors(g: Graph, v: int) -> t.List[int]:
    """
    3-vertices at the far end of a 1-thread from v, one entry per such thread
    """
    return [
        end.far_end for end in incident_threads(g, v)
        if end.k == 1 and end.far_end != v and g.degree(end.far_end) == 3
    ]


def audit_mad229(g: Graph, require_config_free: bool = True) -> ChargeLedger:
    """
    Vertex charge d(v) moved by three rules towards 2-vertices and weak 3-vertices
    """
    if require_config_free and (match := search_thm3(g, allow_conditional=False)) is not None:
        raise ConfigurationPresentError(match)
    if g.n and g.min_degree < 2:
        raise HypothesisError("Thread-based discharging needs minimum degree at least 2")

    profiles = classify_three_vertices(g)
    ledger = ChargeLedger(
        name="mad229",
        bound=Fraction(22, 9),
        initial={vertex(v): Fraction(g.degree(v)) for v in g.vertices}
    )

    for v in sorted(g.vertices):
        if g.degree(v) >= 3:
            for end in incident_threads(g, v):
                for u in end.interior:
                    ledger.send(vertex(v), vertex(u), Fraction(2, 9), "R1")

    strong = {(0, 0, 0), (1, 0, 0)}
    for v in sorted(g.vertices):
        if g.degree(v) >= 4 or (v in profiles and profiles[v].profile in strong):
            for u in sorted(g.adjacency[v]):
                if g.degree(u) == 3:
                    ledger.send(vertex(v), vertex(u), Fraction(1, 9), "R2")
            for u in _weak_three_neighbors(g, v):
                ledger.send(vertex(v), vertex(u), Fraction(1, 18), "R2")
        elif v in profiles and profiles[v].profile == (1, 1, 0):
            for u in _weak_three_neighbors(g, v):
                ledger.send(vertex(v), vertex(u), Fraction(1, 18), "R3")

    return _finish(ledger)


AUDITS = {
    "girth4": audit_girth4,
    "mad175": audit_mad175,
    "mad229": audit_mad229,
}


def face_profile(g: Graph) -> t.Counter[int]:
    """
    Number of faces of each length over all components
    """
    return Counter(f.length for traced in check_embedding(g) for f in traced)
