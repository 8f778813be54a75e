import itertools
from fractions import Fraction

import pytest

from list_recoloring.common import HypothesisError, ConfigurationPresentError, EmbeddingInvalidError, InternalInvariantError
from list_recoloring.discharging import (
    AUDITS,
    ChargeLedger,
    _finish,
    ElementKind,
    audit_girth4,
    audit_mad175,
    audit_mad229,
    face,
    face_profile,
    face_take,
    needy_face_type,
    vertex,
)
from list_recoloring.generators import build_graph
from list_recoloring.graph import Graph

from conftest import path_graph


def _k5_minus_edge() -> Graph:
    return Graph.from_edges(5, [pair for pair in itertools.combinations(range(5), 2) if pair != (0, 1)])


def _k4_with_subdivided_edge() -> Graph:
    # The edge 0-1 of K4 runs through the 2-vertex 4
    return Graph.from_edges(5, [(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.mark.parametrize("degrees,expected", [
    ((5, 3, 5, 3), 1),
    ((5, 3, 6, 3), 1),
    ((5, 4, 3, 4), 2),
    ((5, 4, 4, 3), 3),
    ((5, 3, 4, 4), 3),
    ((5, 4, 5, 3), 4),
    ((5, 3, 5, 4), 4),
    ((5, 5, 4, 3), 5),
    ((5, 5, 5, 3), 6),
    ((5, 4, 4, 4), None),
    ((4, 3, 5, 3), None),
    ((5, 3, 3), None),
])
def test_needy_face_types(degrees, expected):
    assert needy_face_type(degrees) == expected


@pytest.mark.parametrize("degrees,expected", [
    ((5, 3, 5, 3), Fraction(1)),
    ((5, 4, 3, 4), Fraction(1)),
    ((5, 4, 5, 3), Fraction(3, 4)),
    ((5, 5, 5, 3), Fraction(2, 3)),
    ((5, 4, 5, 4), Fraction(1, 2)),
    ((4, 4, 4, 4), Fraction(0)),
    ((3, 3, 3, 3, 3, 3), Fraction(0)),
    ((3, 3, 3, 3), None),
    ((6, 3, 3, 3), None),
])
def test_face_takes(degrees, expected):
    assert face_take(degrees) == expected


def test_needy_types_take_what_the_table_says():
    assert face_take((5, 4, 4, 3)) == 1
    assert face_take((5, 5, 4, 3)) == Fraction(3, 4)


def test_cube_charges():
    g = build_graph("cube")
    with pytest.raises(ConfigurationPresentError):
        audit_girth4(g)

    ledger = audit_girth4(g, require_config_free=False)
    assert ledger.conserved
    assert sum(ledger.initial.values()) == -12
    assert not ledger.transfers
    # Six 4-faces of 3-vertices have nothing to take from
    assert len(ledger.notes) == 6
    assert ledger.minimum == -2
    assert not ledger.holds


def test_grid_centre_gives_to_its_faces():
    g = build_graph("grid", rows=3, cols=3)
    ledger = audit_girth4(g, require_config_free=False)
    centre = next(v for v in g.vertices if g.degree(v) == 4)

    assert ledger.conserved
    assert ledger.final[vertex(centre)] == 0
    assert [tr.rule for tr in ledger.transfers] == ["R1"] * 4
    assert len(ledger.notes) == 4
    assert sum(ledger.initial.values()) == -12


def test_girth4_needs_an_embedding(k4, petersen):
    with pytest.raises(HypothesisError):
        audit_girth4(k4)
    with pytest.raises(EmbeddingInvalidError):
        audit_girth4(petersen, require_config_free=False)


def test_mad175_on_k5_minus_an_edge():
    ledger = audit_mad175(_k5_minus_edge())
    assert ledger.minimum == Fraction(18, 5)
    assert all(charge == Fraction(18, 5) for charge in ledger.final.values())
    assert ledger.holds


def test_mad175_finds_configurations(petersen):
    with pytest.raises(ConfigurationPresentError) as info:
        audit_mad175(petersen)
    assert info.value.match.kind.value == "T2ii_3v_two_3nbrs"

    ledger = audit_mad175(petersen, require_config_free=False)
    assert ledger.minimum == 3
    assert ledger.violations == [vertex(v) for v in range(10)]


def test_mad229_rules():
    ledger = audit_mad229(_k4_with_subdivided_edge())
    final = ledger.final
    assert final[vertex(4)] == Fraction(22, 9)
    assert final[vertex(0)] == final[vertex(1)] == Fraction(25, 9)
    assert final[vertex(2)] == final[vertex(3)] == 3
    assert ledger.minimum == Fraction(22, 9)
    assert ledger.holds
    assert {tr.rule for tr in ledger.transfers} == {"R1", "R2"}
    assert ledger.charge(vertex(4)) == final[vertex(4)]


def test_mad229_preconditions():
    with pytest.raises(ConfigurationPresentError):
        audit_mad229(path_graph(3))
    with pytest.raises(HypothesisError):
        audit_mad229(path_graph(3), require_config_free=False)


def test_ledger_text():
    text = audit_mad175(_k5_minus_edge()).to_text()
    lines = text.splitlines()
    assert lines[0] == "element vertex 0 3/1 18/5"
    assert "transfer vertex 2 vertex 0 1/5 R1" in lines
    assert sum(1 for line in lines if line.startswith("transfer")) == 6


def test_elements():
    assert vertex(3) == (ElementKind.VERTEX, 3)
    assert face(0) == (ElementKind.FACE, 0)
    assert set(AUDITS) == {"girth4", "mad175", "mad229"}


def test_face_profile():
    assert face_profile(build_graph("grid", rows=3, cols=3)) == {4: 4, 8: 1}


def test_leaking_ledger_is_an_internal_error():
    ledger = ChargeLedger(name="leaky", bound=Fraction(0), initial={vertex(0): Fraction(1), vertex(1): Fraction(1)})
    ledger.send(vertex(0), vertex(1), Fraction(1, 2), "R1")
    assert ledger.conserved
    assert _finish(ledger) is ledger

    ledger.send(vertex(1), face(0), Fraction(1, 3), "R2")
    assert not ledger.conserved
    with pytest.raises(InternalInvariantError, match="not conserved by the leaky rules"):
        _finish(ledger)
