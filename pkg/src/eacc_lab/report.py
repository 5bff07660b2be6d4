"""Shared report plumbing: the schema version string, fraction rendering, and
plain-text table layout used by the JSON/table outputs."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["SCHEMA_VERSION", "fraction_str", "render_table"]

#: Version tag stamped into every serialized document.
SCHEMA_VERSION = "eacc-lab/1"


def fraction_str(value: Fraction) -> str:
    """Render an exact rational as 'p/q', or plain 'p' when integral."""
    return str(value)


def render_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Fixed-width text table with a header rule; cells are str()-ed."""
    cells = [[str(h) for h in headers]] + [[str(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(cells):
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
