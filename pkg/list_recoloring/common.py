from __future__ import annotations

import enum
import typing as t


class RecoloringError(Exception):
    """
    Base class for every error raised by the library
    """


class GraphError(RecoloringError, ValueError):
    pass


class EmbeddingInvalidError(GraphError):
    pass


class NoAnchorError(GraphError):
    pass


class UndefinedMeasureError(RecoloringError, ValueError):
    pass


class MissingVertexError(RecoloringError, ValueError):
    def __init__(self, vertices: t.Iterable[int]):
        self.vertices = tuple(sorted(vertices))
        super().__init__(f"Coloring is missing vertices: {', '.join(map(str, self.vertices))}")


class ImproperColoringError(RecoloringError, ValueError):
    pass


class ExtensionInapplicableError(RecoloringError, ValueError):
    pass


class ContractBreachError(RecoloringError, RuntimeError):
    pass


class InternalInvariantError(RecoloringError, RuntimeError):
    pass


class StructuralClaimViolation(RecoloringError, RuntimeError):
    pass


class HypothesisError(RecoloringError, ValueError):
    def __init__(self, message: str, report: t.Any = None):
        self.report = report
        super().__init__(message)


class ConfigurationPresentError(HypothesisError):
    """
    Raised by the discharging auditors when a reducible configuration is found in the input
    """
    def __init__(self, match):
        self.match = match
        super().__init__(f"Graph contains a reducible configuration: {match}", report=match)


class StateCapExceeded(RecoloringError, ValueError):
    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"State space has up to {estimate} states which exceeds the cap of {cap}")


class InstanceParseError(RecoloringError, ValueError):
    def __init__(self, message: str, line: t.Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GeneratorError(RecoloringError, ValueError):
    pass


@enum.unique
class Theorem(enum.Enum):
    TRIANGLE_FREE_PLANAR = "1"
    MAD_17_5 = "2"
    MAD_22_9 = "3"
    BASELINE = "baseline"

    @staticmethod
    def detect(name: str) -> t.Optional[Theorem]:
        for theorem in Theorem:
            if theorem.value == name.lower():
                return theorem
        return None

    @property
    def list_size(self) -> t.Optional[int]:
        return {"1": 7, "2": 6, "3": 4}.get(self.value)

    @property
    def bound(self) -> int:
        return {"1": 30, "2": 12, "3": 14, "baseline": 2}[self.value]


@enum.unique
class ConfigKind(enum.Enum):
    DEG2_OR_LESS = "Deg2OrLess"
    T1A_5VERTEX_THREE_3NBRS = "T1a_5vertex_three_3nbrs"
    T1B_PATH = "T1b_path"
    T1C_4FACE_3444 = "T1c_4face_3444"
    T1D_4FACE_5WITH3 = "T1d_4face_5with3"
    T2I_2MINUS = "T2i_2minus"
    T2II_3V_TWO_3NBRS = "T2ii_3v_two_3nbrs"
    T2III_4V_FOUR_3NBRS = "T2iii_4v_four_3nbrs"
    T3_ISOLATED_OR_1VERTEX = "T3_isolated_or_1vertex"
    T3_3THREAD = "T3_3thread"
    T3_PENDANT_TRIPLE = "T3_pendant_triple"
    T3_HIGH_THREAD_VERTEX = "T3_high_thread_vertex"
    T3_321_ADJACENCY = "T3_321_adjacency"
    T3_111_WEAK = "T3_111_weak"
    HIGH_DEGREE_BASELINE = "HighDegreeBaseline"

    @property
    def conditional(self) -> bool:
        """
        Conditional configurations are only reducible when the inner sequence meets an extra budget
        """
        return self is ConfigKind.T3_PENDANT_TRIPLE


@enum.unique
class StageKind(enum.Enum):
    KEY = "key"
    TWO_THREAD = "two-thread"
    THREE_THREAD = "three-thread"
    PENDANT_TRIPLE = "pendant-triple"
    DEG3_PAIR = "deg3-pair"
    DEG4_STAR = "deg4-star"

    def added(self, path: t.Sequence[int]) -> t.Tuple[int, ...]:
        """
        Vertices re-added by a stage of this kind, given the stage's role tuple
        """
        if self is StageKind.TWO_THREAD:
            return tuple(path[1:3])
        elif self is StageKind.THREE_THREAD:
            return tuple(path[1:4])
        elif self is StageKind.PENDANT_TRIPLE:
            return tuple(path[:4])
        elif self is StageKind.DEG3_PAIR:
            return tuple(path[:3])
        else:
            return tuple(path)
