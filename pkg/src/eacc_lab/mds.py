"""Classical MDS codes over finite fields: Reed-Solomon generators, encoding,
and erasure decoding.

Codewords and messages are tuples of integer field representatives; the
generator matrix carries the field.  Erasure decoding always solves the linear
system over the first k surviving columns, which keeps the decoder free of
tie-breaking ambiguity.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

from eacc_lab.gf import FieldSpec, field_new

__all__ = [
    "DecodingError",
    "ERASED",
    "GeneratorMatrix",
    "ErasedWord",
    "rs_generator",
    "identity_generator",
    "empty_generator",
    "BINARY_PARITY_G",
    "mds_encode",
    "mds_erasure_decode",
    "is_mds",
]


class DecodingError(Exception):
    """Raised when an erasure pattern leaves too little information to decode."""


class _Erased:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ERASED"


#: Marker placed at erased word positions.
ERASED = _Erased()


@dataclass(frozen=True)
class GeneratorMatrix:
    """A k x n generator over a finite field, rows of integer reps.

    ``n_cols`` is explicit so the degenerate k = 0 code still knows its block
    length.
    """

    spec: FieldSpec
    rows: tuple[tuple[int, ...], ...]
    n_cols: int

    def __post_init__(self) -> None:
        order = self.spec.order
        for row in self.rows:
            if len(row) != self.n_cols:
                raise ValueError("inconsistent row length")
            for v in row:
                if not 0 <= v < order:
                    raise ValueError(f"entry {v} outside GF({order})")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.n_cols


def rs_generator(n: int, k: int, spec: FieldSpec) -> GeneratorMatrix:
    """Vandermonde Reed-Solomon generator: row i, column j holds (e_j)^i.

    Evaluation points are the canonical first n field elements (reps
    0..n-1, with 0^0 = 1), so the same (n, k, field) always produces the same
    codewords.  Requires 1 <= k <= n <= field order.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > spec.order:
        raise ValueError(f"block length {n} exceeds field order {spec.order}")
    rows = tuple(tuple(spec.pow_(j, i) for j in range(n)) for i in range(k))
    return GeneratorMatrix(spec, rows, n)


def identity_generator(n: int, spec: FieldSpec) -> GeneratorMatrix:
    """The [n, n, 1] identity encoding; valid over any field and any n."""
    rows = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return GeneratorMatrix(spec, rows, n)


def empty_generator(n: int, spec: FieldSpec) -> GeneratorMatrix:
    """The zero-message [n, 0] code (used by distance-(n+1) constructions)."""
    return GeneratorMatrix(spec, (), n)


#: The 2x3 single-parity-check generator over GF(2); the smallest nontrivial
#: binary MDS matrix, and the one the worked binary constructions are built on.
BINARY_PARITY_G = GeneratorMatrix(field_new(2), ((1, 0, 1), (0, 1, 1)), 3)


@dataclass(frozen=True)
class ErasedWord:
    """A length-n received word whose positions are symbols or ERASED."""

    symbols: tuple
    erased_count: int

    def __post_init__(self) -> None:
        actual = sum(1 for s in self.symbols if s is ERASED)
        if actual != self.erased_count:
            raise ValueError(
                f"erased_count {self.erased_count} disagrees with markers ({actual})"
            )

    @classmethod
    def build(cls, values: Sequence, erased_positions: Sequence[int] = ()) -> "ErasedWord":
        erased = set(erased_positions)
        symbols = tuple(
            ERASED if (i in erased or v is ERASED) else v for i, v in enumerate(values)
        )
        return cls(symbols, sum(1 for s in symbols if s is ERASED))

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def surviving_columns(self) -> tuple[int, ...]:
        return tuple(j for j, s in enumerate(self.symbols) if s is not ERASED)


def mds_encode(msg: Sequence[int], g: GeneratorMatrix) -> tuple[int, ...]:
    """Return msg . G as a tuple of field reps."""
    if len(msg) != g.k:
        raise ValueError(f"message length {len(msg)} != k = {g.k}")
    spec = g.spec
    add = spec.add_fn
    mul = spec.mul_fn
    out = [0] * g.n
    for u, row in zip(msg, g.rows):
        if u:
            for j, gij in enumerate(row):
                if gij:
                    out[j] = add(out[j], mul(u, gij))
    return tuple(out)


def _invert(rows: list[list[int]], spec: FieldSpec) -> tuple[tuple[int, ...], ...]:
    """Invert a square matrix over the field by Gauss-Jordan elimination."""
    k = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(k)] for i in range(k)]
    sub, mul, div = spec.sub_fn, spec.mul_fn, spec.div
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            raise DecodingError("singular system: generator is not MDS on these columns")
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        if pv != 1:
            aug[col] = [div(v, pv) for v in aug[col]]
        prow = aug[col]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [sub(v, mul(f, pv2)) for v, pv2 in zip(aug[r], prow)]
    return tuple(tuple(row[k:]) for row in aug)


@functools.lru_cache(maxsize=65536)
def _decode_solver(g: GeneratorMatrix, cols: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Inverse of the k x k column submatrix G[:, cols]; cached per pattern."""
    sub = [[g.rows[i][j] for j in cols] for i in range(g.k)]
    return _invert(sub, g.spec)


def mds_erasure_decode(word: ErasedWord, g: GeneratorMatrix) -> tuple[int, ...]:
    """Recover the unique message agreeing with the word's surviving symbols.

    Solves over the first k surviving columns.  Raises DecodingError when
    fewer than k symbols survive or the column system is singular (the latter
    cannot happen for an MDS generator).
    """
    if len(word) != g.n:
        raise ValueError(f"word length {len(word)} != n = {g.n}")
    k = g.k
    if k == 0:
        return ()
    cols = word.surviving_columns[:k]
    if len(cols) < k:
        raise DecodingError(
            f"only {len(cols)} symbols survive, need {k} to decode"
        )
    inv = _decode_solver(g, cols)
    add, mul = g.spec.add_fn, g.spec.mul_fn
    received = [word.symbols[j] for j in cols]
    out = [0] * k
    for j, x in enumerate(received):
        if x:
            inv_row = inv[j]
            for t in range(k):
                v = inv_row[t]
                if v:
                    out[t] = add(out[t], mul(x, v))
    return tuple(out)


def _nonsingular(rows: list[list[int]], spec: FieldSpec) -> bool:
    k = len(rows)
    mat = [list(r) for r in rows]
    sub, mul, div = spec.sub_fn, spec.mul_fn, spec.div
    for col in range(k):
        pivot = next((r for r in range(col, k) if mat[r][col] != 0), None)
        if pivot is None:
            return False
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
        pv = mat[col][col]
        prow = mat[col]
        for r in range(col + 1, k):
            if mat[r][col] != 0:
                f = div(mat[r][col], pv)
                mat[r] = [sub(v, mul(f, pv2)) for v, pv2 in zip(mat[r], prow)]
    return True


def is_mds(g: GeneratorMatrix) -> bool:
    """True iff every k x k column submatrix is nonsingular (checked exhaustively)."""
    k = g.k
    if k == 0:
        return True
    for cols in itertools.combinations(range(g.n), k):
        sub = [[g.rows[i][j] for j in cols] for i in range(k)]
        if not _nonsingular(sub, g.spec):
            return False
    return True
