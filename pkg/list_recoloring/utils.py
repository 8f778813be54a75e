import os
import logging
import typing as t
from fractions import Fraction


DEFAULT_STATE_CAP = 2_000_000
STATE_CAP_ENV = "RECOLOR_STATE_CAP"

logger = logging.getLogger(__name__)


def format_fraction(value: t.Union[Fraction, int]) -> str:
    """
    Exact rational in the `p/q` form used by every numeric output, integers included
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def state_cap_from_env() -> int:
    if not (raw := os.environ.get(STATE_CAP_ENV)):
        return DEFAULT_STATE_CAP

    try:
        cap = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer `{STATE_CAP_ENV}` value `{raw}`")
        return DEFAULT_STATE_CAP

    logger.info(f"State cap overridden to {cap} by `{STATE_CAP_ENV}`")
    return cap
