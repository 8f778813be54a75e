from fractions import Fraction

import pytest

from list_recoloring.utils import format_fraction, parse_fraction, ceil_div, state_cap_from_env, DEFAULT_STATE_CAP


def test_fractions():
    assert format_fraction(Fraction(44, 18)) == "22/9"
    assert format_fraction(3) == "3/1"
    assert format_fraction(Fraction(-2)) == "-2/1"
    assert parse_fraction(" 17/5 ") == Fraction(17, 5)
    with pytest.raises(ValueError):
        parse_fraction("seventeen")


@pytest.mark.parametrize("a,b,expected", [(0, 3, 0), (7, 7, 1), (8, 7, 2), (60, 4, 15)])
def test_ceil_div(a, b, expected):
    assert ceil_div(a, b) == expected


def test_state_cap_env(monkeypatch):
    monkeypatch.delenv("RECOLOR_STATE_CAP", raising=False)
    assert state_cap_from_env() == DEFAULT_STATE_CAP

    monkeypatch.setenv("RECOLOR_STATE_CAP", "50")
    assert state_cap_from_env() == 50

    monkeypatch.setenv("RECOLOR_STATE_CAP", "lots")
    assert state_cap_from_env() == DEFAULT_STATE_CAP
