"""Exact evaluation of the erasure Singleton bounds for entanglement-assisted
classical codes, with admissibility checking and regime analysis.

All arithmetic is exact rational; saturation claims are equalities of
fractions, so floats never enter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "REGIME_RICH",
    "REGIME_POOR",
    "REGIME_BOUNDARY",
    "BoundValue",
    "admissible",
    "admissibility_error",
    "require_admissible",
    "eacc_singleton",
    "separate_singleton",
]

REGIME_RICH = "entanglement-rich"
REGIME_POOR = "entanglement-poor"
REGIME_BOUNDARY = "boundary"


@dataclass(frozen=True)
class BoundValue:
    """An exact bound value, with a regime tag where the bound has cases."""

    value: Fraction
    regime: str | None = None

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"bound value {self.value} is negative")


def admissibility_error(n: int, d: int, c: int) -> str | None:
    """Reason the parameters are inadmissible, or None when they are fine."""
    if n < 1:
        return f"n = {n} < 1"
    if d < 1:
        return f"d = {d} < 1"
    if c < 0:
        return f"c = {c} < 0"
    if c > n:
        return f"c > n ({c} > {n})"
    if d > n + 1:
        return f"d > n + 1 ({d} > {n + 1})"
    return None


def admissible(n: int, d: int, c: int) -> bool:
    """n >= 1, d >= 1, 0 <= c <= n, and d <= n + 1."""
    return admissibility_error(n, d, c) is None


def require_admissible(n: int, d: int, c: int) -> None:
    reason = admissibility_error(n, d, c)
    if reason is not None:
        raise ValueError(f"inadmissible: {reason}")


def eacc_singleton(n: int, d: int, c: int) -> BoundValue:
    """The rate cap (1 + c/n)(n - d + 1) for jointly encoded codes."""
    require_admissible(n, d, c)
    return BoundValue(Fraction(n + c, n) * (n - d + 1))


def separate_singleton(n: int, d: int, c: int) -> BoundValue:
    """The rate cap max(n + c - 2d + 2, n - d + 1) for separate encoders.

    The two branches meet at c = d - 1, tagged as the boundary regime.
    """
    require_admissible(n, d, c)
    rich = n + c - 2 * d + 2
    poor = n - d + 1
    if c == d - 1:
        regime = REGIME_BOUNDARY
    elif d - 1 < c:
        regime = REGIME_RICH
    else:
        regime = REGIME_POOR
    return BoundValue(Fraction(max(rich, poor)), regime)
