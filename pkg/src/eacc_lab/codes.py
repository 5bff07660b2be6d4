"""Entanglement-assisted classical erasure code constructions.

Four families are built here, all sharing one runtime representation:

* ``unassisted``  - one MDS codeword written into computational-basis slots.
* ``superdense``  - two parallel MDS codewords carried as displacements on one
  pre-shared pair per position (two dits per transmitted qudit).
* ``spaceshared`` - the rate-optimal combiner: each channel position is split
  into r sub-slots; some sub-slot columns run unassisted subcodes, the rest
  run superdense subcodes wired through a rearrangement schedule that spreads
  the pre-shared pairs uniformly across positions.
* ``separate``    - a construction whose position encoders touch only the
  message and their own memory block: one long MDS codeword laid out two
  coordinates per entangled position and one per plain position.

A code object owns its encoder and decoder.  Messages are tuples of base-qbar
dits; the decoder consumes the post-erasure state (Bell measurements are
destructive) and must succeed for every erasure pattern of size d - 1.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import IO, Sequence

from eacc_lab.bounds import require_admissible
from eacc_lab.gf import FieldSpec, field_new, prime_power
from eacc_lab.mds import (
    BINARY_PARITY_G,
    ERASED,
    DecodingError,
    ErasedWord,
    GeneratorMatrix,
    empty_generator,
    identity_generator,
    mds_encode,
    mds_erasure_decode,
    rs_generator,
)
from eacc_lab.qsym import ALICE, BOB, CHANNEL, Slot, SlotLayout, SymbolicState
from eacc_lab.report import SCHEMA_VERSION, fraction_str

__all__ = [
    "CodeParams",
    "SpaceShareParams",
    "RearrangeSchedule",
    "Subcode",
    "EaccCode",
    "AsymptoticReport",
    "spaceshare_params",
    "rearrange_schedule",
    "build_unassisted",
    "build_superdense",
    "build_spaceshared",
    "build_separate",
    "build_asymptotic",
    "separate_from_generator",
    "smallest_pow2_at_least",
    "default_qbar",
    "code_from_dict",
    "load_code",
]


def q_label(i: int, j: int) -> str:
    return f"Q{i}.{j}"


def b_label(s: int, t: int) -> str:
    return f"B{s}.{t}"


def a_label(i: int) -> str:
    return f"A{i}.1"


def smallest_pow2_at_least(x: int) -> int:
    """Smallest power of two >= max(x, 2)."""
    if x <= 2:
        return 2
    return 1 << (x - 1).bit_length()


def default_qbar(n: int, c: int = 0, separate: bool = False) -> int:
    """Default base field order: smallest power of two large enough for the
    construction's MDS codes (block length n, or n + c for separate encoders)."""
    return smallest_pow2_at_least(n + c if separate else n)


@dataclass(frozen=True)
class CodeParams:
    """The parameter tuple [n, k, d; c]_q with k an exact rational."""

    n: int
    d: int
    c: int
    qbar: int
    r: int
    q: int
    k: Fraction

    def __post_init__(self) -> None:
        require_admissible(self.n, self.d, self.c)
        if self.q != self.qbar**self.r:
            raise ValueError(f"q = {self.q} != qbar^r = {self.qbar**self.r}")

    def label(self) -> str:
        return f"[{self.n},{fraction_str(self.k)},{self.d};{self.c}]_{self.q}"

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "c": self.c,
            "qbar": self.qbar,
            "r": self.r,
            "q": self.q,
            "k": fraction_str(self.k),
        }


@dataclass(frozen=True)
class SpaceShareParams:
    """The space-sharing split for admissible (n, d, c).

    ``subslots`` positions-per-qudit split r, ``plain_columns`` unassisted
    sub-slot columns, ``paired_columns`` superdense columns, and the per-column
    message sizes in base-qbar dits.
    """

    n: int
    d: int
    c: int
    subslots: int
    plain_columns: int
    paired_columns: int
    plain_dits: int
    superdense_dits: int
    qbar: int
    q: int
    k: Fraction


def spaceshare_params(n: int, d: int, c: int, qbar: int | None = None) -> SpaceShareParams:
    """Compute the sub-slot split and exact rate of the space-shared code.

    The rate (plain_dits * plain_columns + superdense_dits * paired_columns)/r
    is verified to equal (1 + c/n)(n - d + 1) as rationals before returning.
    """
    require_admissible(n, d, c)
    r = n // gcd(n, c) if c else 1
    paired = c * r // n
    plain = r - paired
    k1 = n - d + 1
    k2 = 2 * k1
    if qbar is None:
        qbar = default_qbar(n)
    prime_power(qbar)  # raises for non-prime-powers
    k = Fraction(k1 * plain + k2 * paired, r)
    if k != Fraction(n + c, n) * k1:
        raise AssertionError("space-sharing rate identity failed")
    return SpaceShareParams(
        n=n,
        d=d,
        c=c,
        subslots=r,
        plain_columns=plain,
        paired_columns=paired,
        plain_dits=k1,
        superdense_dits=k2,
        qbar=qbar,
        q=qbar**r,
        k=k,
    )


@dataclass(frozen=True)
class RearrangeSchedule:
    """Assignment of transmitter memory sub-slots to channel sub-slots.

    Each edge maps memory sub-slot (s, t) onto channel sub-slot (i, j); the
    pre-shared pair (s, t) then lives between channel slot Q(i, j) and the
    receiver's memory slot B(s, t).
    """

    edges: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    def channel_to_memory(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {chan: mem for mem, chan in self.edges}

    def __len__(self) -> int:
        return len(self.edges)


def rearrange_schedule(n: int, c: int, r: int) -> RearrangeSchedule:
    """Uniformly spread c memory blocks of r sub-slots over n channel positions.

    Memory sub-slots are enumerated row-major (block by block) and assigned to
    channel sub-slots column-major over positions within the entangled sub-slot
    rows, so each position receives exactly c*r/n entangled sub-slots.
    """
    if (c * r) % n:
        raise ValueError(f"n = {n} must divide c*r = {c * r}")
    paired = c * r // n
    plain = r - paired
    memory = [(s, t) for s in range(1, c + 1) for t in range(1, r + 1)]
    channel = [(i, j) for i in range(1, n + 1) for j in range(plain + 1, r + 1)]
    return RearrangeSchedule(tuple(zip(memory, channel)))


@dataclass(frozen=True)
class Subcode:
    """One sub-slot column's code: its kind, column index, and generator."""

    kind: str  # "unassisted" | "superdense"
    column: int
    generator: GeneratorMatrix

    def __post_init__(self) -> None:
        if self.kind not in ("unassisted", "superdense"):
            raise ValueError(f"unknown subcode kind {self.kind!r}")

    @property
    def dits(self) -> int:
        return self.generator.k * (2 if self.kind == "superdense" else 1)


@functools.lru_cache(maxsize=65536)
def _xor_row_tables(rows: tuple, spec: FieldSpec) -> tuple:
    """Packed scalar-multiple tables for characteristic-2 matrix rows.

    ``table[l][u]`` is the codeword u * rows[l] with symbol j packed at bit
    offset j*m, so a matrix-vector product over GF(2^m) collapses to one XOR
    per nonzero input symbol.
    """
    if spec.p != 2:
        raise ValueError("packed tables require characteristic 2")
    mbits = spec.m
    qbar = spec.order
    mul = spec.mul_fn
    tables = []
    for row in rows:
        per_u = [0] * qbar
        for u in range(1, qbar):
            acc = 0
            for j, gij in enumerate(row):
                if gij:
                    acc |= mul(u, gij) << (j * mbits)
            per_u[u] = acc
        tables.append(tuple(per_u))
    return tuple(tables)


def _matvec(vec, rows, width: int, add, mul) -> list[int]:
    """vec . rows over the field: the generic (any characteristic) kernel."""
    out = [0] * width
    for u, row in zip(vec, rows):
        if u:
            for j in range(width):
                gij = row[j]
                if gij:
                    out[j] = add(out[j], mul(u, gij))
    return out


def _plain_generator(n: int, k: int, spec: FieldSpec) -> GeneratorMatrix:
    """MDS generator for an [n, k] erasure subcode, degenerate rates included.

    k = 0 is the empty code, k = n the identity encoding (valid over any
    field); otherwise a Reed-Solomon generator, except for the one binary case
    (n, k) = (3, 2) where the parity-check literal is MDS although n exceeds
    the field order.
    """
    if k == 0:
        return empty_generator(n, spec)
    if k == n:
        return identity_generator(n, spec)
    if n <= spec.order:
        return rs_generator(n, k, spec)
    if (n, k, spec.order) == (3, 2, 2):
        return BINARY_PARITY_G
    raise ValueError(
        f"no [{n},{k}] MDS generator over GF({spec.order}): need field order >= {n}"
    )


class EaccCode:
    """A concrete coding scheme: parameters, register layout, encoder, decoder.

    Construct through the ``build_*`` functions; the raw constructor wires an
    arbitrary structure and is also the deserialization target.
    """

    def __init__(
        self,
        kind: str,
        params: CodeParams,
        field: FieldSpec,
        subcodes: tuple[Subcode, ...] = (),
        schedule: RearrangeSchedule = RearrangeSchedule(()),
        generator: GeneratorMatrix | None = None,
        entangled_used: bool = True,
    ):
        if kind not in ("unassisted", "superdense", "spaceshared", "separate"):
            raise ValueError(f"unknown code kind {kind!r}")
        if field.order != params.qbar:
            raise ValueError("field order disagrees with params.qbar")
        self.kind = kind
        self.params = params
        self.field = field
        self.subcodes = subcodes
        self.schedule = schedule
        self.generator = generator
        self.entangled_used = entangled_used

        if kind == "separate":
            if generator is None:
                raise ValueError("separate codes need a coordinate generator")
            expected = params.n + params.c if entangled_used else params.n
            if generator.n != expected:
                raise ValueError(
                    f"coordinate generator has {generator.n} columns, expected {expected}"
                )
            self.message_dits = generator.k
        else:
            if generator is not None:
                raise ValueError(f"{kind} codes carry per-column subcodes, not a coordinate generator")
            self.message_dits = sum(sub.dits for sub in subcodes)
            slices = []
            at = 0
            for sub in subcodes:
                slices.append((at, at + sub.dits))
                at += sub.dits
            self._slices = slices

        total_dits = self.message_dits
        if Fraction(total_dits, params.r) != params.k:
            raise ValueError(
                f"message dits {total_dits} inconsistent with k = {params.k} over r = {params.r}"
            )

        self._build_layout()

    # -- layout and template state -------------------------------------------

    def _build_layout(self) -> None:
        p = self.params
        slots = []
        if self.kind == "separate":
            for i in range(1, p.n + 1):
                slots.append(Slot(q_label(i, 1), p.qbar, CHANNEL))
            for i in range(1, p.c + 1):
                slots.append(Slot(b_label(i, 1), p.qbar, BOB))
            if not self.entangled_used:
                for i in range(1, p.c + 1):
                    slots.append(Slot(a_label(i), p.qbar, ALICE))
        else:
            for i in range(1, p.n + 1):
                for j in range(1, p.r + 1):
                    slots.append(Slot(q_label(i, j), p.qbar, CHANNEL))
            for s in range(1, p.c + 1):
                for t in range(1, p.r + 1):
                    slots.append(Slot(b_label(s, t), p.qbar, BOB))
        self.layout = SlotLayout(slots)

        template = SymbolicState(self.layout)
        self._partner: dict[tuple[int, int], str] = {}
        if self.kind == "separate":
            for i in range(1, p.c + 1):
                if self.entangled_used:
                    template.make_bell_pair(q_label(i, 1), b_label(i, 1))
                    self._partner[(i, 1)] = b_label(i, 1)
                else:
                    template.make_bell_pair(a_label(i), b_label(i, 1))
        else:
            for (s, t), (i, j) in self.schedule.edges:
                template.make_bell_pair(q_label(i, j), b_label(s, t))
                self._partner[(i, j)] = b_label(s, t)
        self._template = template

    # -- message plumbing -----------------------------------------------------

    @property
    def message_space_size(self) -> int:
        return self.params.qbar**self.message_dits

    def int_to_message(self, x: int) -> tuple[int, ...]:
        """Dits of x base qbar, most significant first (a fixed convention)."""
        if not 0 <= x < self.message_space_size:
            raise ValueError(f"message index {x} out of range")
        qbar = self.params.qbar
        out = [0] * self.message_dits
        for pos in range(self.message_dits - 1, -1, -1):
            out[pos] = x % qbar
            x //= qbar
        return tuple(out)

    def message_to_int(self, m: Sequence[int]) -> int:
        qbar = self.params.qbar
        x = 0
        for v in m:
            x = x * qbar + v
        return x

    def zero_message(self) -> tuple[int, ...]:
        return (0,) * self.message_dits

    def max_message(self) -> tuple[int, ...]:
        return (self.params.qbar - 1,) * self.message_dits

    def random_message(self, rng) -> tuple[int, ...]:
        qbar = self.params.qbar
        return tuple(rng.randrange(qbar) for _ in range(self.message_dits))

    def channel_labels(self, position: int) -> tuple[str, ...]:
        """All channel sub-slot labels of one position (what an erasure hits)."""
        if self.kind == "separate":
            return (q_label(position, 1),)
        return tuple(q_label(position, j) for j in range(1, self.params.r + 1))

    def bob_labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.layout if s.owner == BOB)

    # -- encoding ---------------------------------------------------------------

    def encode(self, m: Sequence[int]) -> SymbolicState:
        """Prepare the joint channel/receiver-memory state for message m."""
        qbar = self.params.qbar
        if len(m) != self.message_dits:
            raise ValueError(f"message length {len(m)} != {self.message_dits}")
        if m and (min(m) < 0 or max(m) >= qbar):
            raise ValueError(f"message dits must lie in [0, {qbar})")
        st = self._template.copy()
        if self.kind == "separate":
            self._encode_separate(st, m)
        else:
            self._encode_columns(st, m)
        return st

    def _encode_columns(self, st: SymbolicState, m: Sequence[int]) -> None:
        n = self.params.n
        for sub, (lo, hi) in zip(self.subcodes, self._slices):
            seg = m[lo:hi]
            col = sub.column
            if sub.kind == "unassisted":
                word = mds_encode(seg, sub.generator)
                for i in range(1, n + 1):
                    st.set_classical(q_label(i, col), word[i - 1])
            else:
                half = sub.generator.k
                shifts = mds_encode(seg[:half], sub.generator)
                phases = mds_encode(seg[half:], sub.generator)
                for i in range(1, n + 1):
                    st.apply_displacement(q_label(i, col), shifts[i - 1], phases[i - 1])

    def _encode_separate(self, st: SymbolicState, m: Sequence[int]) -> None:
        p = self.params
        word = mds_encode(m, self.generator)
        if self.entangled_used:
            for i in range(1, p.c + 1):
                st.apply_displacement(q_label(i, 1), word[2 * i - 2], word[2 * i - 1])
            for i in range(p.c + 1, p.n + 1):
                st.set_classical(q_label(i, 1), word[p.c + i - 1])
        else:
            for i in range(1, p.n + 1):
                st.set_classical(q_label(i, 1), word[i - 1])

    # -- decoding ----------------------------------------------------------------

    def _effective_erased(self, pattern: Sequence[int]) -> frozenset[int]:
        p = self.params
        erased = set()
        for i in pattern:
            if not 1 <= i <= p.n:
                raise ValueError(f"erased position {i} outside 1..{p.n}")
            if i in erased:
                raise ValueError(f"duplicate erased position {i}")
            erased.add(i)
        # fewer erasures than the design distance: discard surplus survivors
        # (always valid for erasure codes) so the decoder sees exactly d - 1
        i = 1
        while len(erased) < p.d - 1:
            if i not in erased:
                erased.add(i)
            i += 1
        return frozenset(erased)

    def decode(self, st: SymbolicState, pattern: Sequence[int]) -> tuple[int, ...]:
        """Recover the message from the post-erasure state.

        ``pattern`` is the set of erased positions the channel reported.  Bell
        measurements consume the receiver's pairs, so the state is used up.
        Raises DecodingError when the erasures exceed what the code tolerates.
        """
        erased = self._effective_erased(pattern)
        if self.kind == "separate":
            return self._decode_separate(st, erased)
        return self._decode_columns(st, erased)

    def _decode_columns(self, st: SymbolicState, erased: frozenset[int]) -> tuple[int, ...]:
        n = self.params.n
        out: list[int] = []
        for sub in self.subcodes:
            col = sub.column
            if sub.kind == "unassisted":
                symbols = [
                    ERASED if i in erased else st.computational_measure(q_label(i, col))
                    for i in range(1, n + 1)
                ]
                word = ErasedWord.build(symbols)
                out.extend(mds_erasure_decode(word, sub.generator))
            else:
                shifts: list = [ERASED] * n
                phases: list = [ERASED] * n
                for i in range(1, n + 1):
                    if i not in erased:
                        x, z = st.bell_measure(q_label(i, col), self._partner[(i, col)])
                        shifts[i - 1] = x
                        phases[i - 1] = z
                out.extend(mds_erasure_decode(ErasedWord.build(shifts), sub.generator))
                out.extend(mds_erasure_decode(ErasedWord.build(phases), sub.generator))
        return tuple(out)

    def _decode_separate(self, st: SymbolicState, erased: frozenset[int]) -> tuple[int, ...]:
        p = self.params
        symbols: list = [ERASED] * self.generator.n
        for i in range(1, p.n + 1):
            if i in erased:
                continue
            if self.entangled_used and i <= p.c:
                x, z = st.bell_measure(q_label(i, 1), self._partner[(i, 1)])
                symbols[2 * i - 2] = x
                symbols[2 * i - 1] = z
            elif self.entangled_used:
                symbols[p.c + i - 1] = st.computational_measure(q_label(i, 1))
            else:
                symbols[i - 1] = st.computational_measure(q_label(i, 1))
        return mds_erasure_decode(ErasedWord.build(symbols), self.generator)

    # -- bulk verification fast path ------------------------------------------

    def pattern_runner(self, pattern: Sequence[int]):
        """The encode -> erase -> decode pipeline for one fixed pattern,
        resolved down to slot indices and cached column solvers.

        Returns ``run(message) -> decoded tuple or None`` (None standing for a
        decoding failure) with results identical to the public methods; the
        verifier calls this once per pattern so per-message work is only field
        arithmetic and array reads.  Erased slots are simply never read, which
        matches physical erasure because all operations act on disjoint slots.
        Characteristic-2 fields additionally use precomputed packed-codeword
        tables, turning each encode/decode into a few integer XORs.
        """
        erased = self._effective_erased(pattern)
        if self.kind == "separate":
            return self._runner_separate(erased)
        return self._runner_columns(erased)

    def _column_plan(self, erased: frozenset[int]):
        """Per-subcode wiring for a fixed pattern, or None when undecodable.

        Entries: (kind_tag, generator rows, write targets, read sources,
        column-solver inverse rows, message slice, k).
        """
        from eacc_lab.mds import _decode_solver  # shared solver cache

        p = self.params
        n = p.n
        surv = [i for i in range(1, n + 1) if i not in erased]
        lay = self.layout
        t = self._template
        plan = []
        for sub, (lo, hi) in zip(self.subcodes, self._slices):
            g = sub.generator
            k = g.k
            col = sub.column
            if k == 0:
                continue  # zero-dit subcode: nothing to write or read
            if len(surv) < k:
                return None
            chan = [lay.index(q_label(i, col)) for i in range(1, n + 1)]
            cols = tuple(i - 1 for i in surv[:k])
            try:
                inv = _decode_solver(g, cols)
            except DecodingError:
                return None
            if sub.kind == "unassisted":
                reads = [chan[c] for c in cols]
                plan.append(("u", g.rows, chan, reads, inv, lo, hi, k))
            else:
                pids = []
                for ix in chan:
                    pid = t._val[ix]
                    if t._kind[ix] != 1 or t._pair_slots[pid][0] != ix:
                        raise AssertionError("template pair wiring is inconsistent")
                    pids.append(pid)
                reads = [pids[c] for c in cols]
                plan.append(("s", g.rows, pids, reads, inv, lo, hi, k))
        return plan

    def _runner_columns(self, erased: frozenset[int]):
        plan = self._column_plan(erased)
        if plan is None:
            return lambda m: None
        t = self._template
        tv = t._val
        tpx = t._pair_x
        tpz = t._pair_z
        n = self.params.n
        dits = self.message_dits
        spec = self.field

        if spec.p == 2:
            mbits = spec.m
            mask = spec.order - 1
            xplan = [
                (tag, _xor_row_tables(rows, spec), targets, reads,
                 _xor_row_tables(inv, spec), lo, hi, k)
                for tag, rows, targets, reads, inv, lo, hi, k in plan
            ]

            def run(m):
                if len(m) != dits:
                    raise ValueError(f"message length {len(m)} != {dits}")
                val = tv.copy()
                px = tpx.copy()
                pz = tpz.copy()
                out = []
                for tag, enc_t, targets, reads, dec_t, lo, hi, k in xplan:
                    if tag == "u":
                        acc = 0
                        for l in range(k):
                            u = m[lo + l]
                            if u:
                                acc ^= enc_t[l][u]
                        for j in range(n):
                            val[targets[j]] = (acc >> (j * mbits)) & mask
                        dacc = 0
                        for j in range(k):
                            x = val[reads[j]]
                            if x:
                                dacc ^= dec_t[j][x]
                        for u in range(k):
                            out.append((dacc >> (u * mbits)) & mask)
                    else:
                        mid = lo + k
                        accx = 0
                        accz = 0
                        for l in range(k):
                            u = m[lo + l]
                            if u:
                                accx ^= enc_t[l][u]
                            u = m[mid + l]
                            if u:
                                accz ^= enc_t[l][u]
                        for j in range(n):
                            pid = targets[j]
                            sh = j * mbits
                            px[pid] = (accx >> sh) & mask
                            pz[pid] = (accz >> sh) & mask
                        daccx = 0
                        daccz = 0
                        for j in range(k):
                            pid = reads[j]
                            x = px[pid]
                            if x:
                                daccx ^= dec_t[j][x]
                            z = pz[pid]
                            if z:
                                daccz ^= dec_t[j][z]
                        for u in range(k):
                            out.append((daccx >> (u * mbits)) & mask)
                        for u in range(k):
                            out.append((daccz >> (u * mbits)) & mask)
                return tuple(out)

            return run

        add = spec.add_fn
        mul = spec.mul_fn

        def run(m):
            if len(m) != dits:
                raise ValueError(f"message length {len(m)} != {dits}")
            val = tv.copy()
            px = tpx.copy()
            pz = tpz.copy()
            out = []
            for tag, rows, targets, reads, inv, lo, hi, k in plan:
                if tag == "u":
                    word = _matvec(m[lo:hi], rows, n, add, mul)
                    for j in range(n):
                        val[targets[j]] = word[j]
                    got = [val[ix] for ix in reads]
                    out.extend(_matvec(got, inv, k, add, mul))
                else:
                    mid = lo + k
                    wx = _matvec(m[lo:mid], rows, n, add, mul)
                    wz = _matvec(m[mid:hi], rows, n, add, mul)
                    for j in range(n):
                        pid = targets[j]
                        px[pid] = wx[j]
                        pz[pid] = wz[j]
                    out.extend(_matvec([px[pid] for pid in reads], inv, k, add, mul))
                    out.extend(_matvec([pz[pid] for pid in reads], inv, k, add, mul))
            return tuple(out)

        return run

    def _separate_plan(self, erased: frozenset[int]):
        """(write_plan, reads, inverse) for one pattern, or None when undecodable."""
        from eacc_lab.mds import _decode_solver

        p = self.params
        g = self.generator
        k = g.k
        lay = self.layout
        t = self._template

        coord_source: list[tuple[str, int] | None] = [None] * g.n
        write_plan: list[tuple[str, int, int]] = []  # (mode, target, coord)
        for i in range(1, p.n + 1):
            ix = lay.index(q_label(i, 1))
            if self.entangled_used and i <= p.c:
                pid = t._val[ix]
                if t._kind[ix] != 1 or t._pair_slots[pid][0] != ix:
                    raise AssertionError("template pair wiring is inconsistent")
                write_plan.append(("x", pid, 2 * i - 2))
                write_plan.append(("z", pid, 2 * i - 1))
                if i not in erased:
                    coord_source[2 * i - 2] = ("x", pid)
                    coord_source[2 * i - 1] = ("z", pid)
            else:
                coord = (p.c + i - 1) if self.entangled_used else (i - 1)
                write_plan.append(("v", ix, coord))
                if i not in erased:
                    coord_source[coord] = ("v", ix)

        surviving = [c for c in range(g.n) if coord_source[c] is not None]
        if len(surviving) < k:
            return None
        cols = tuple(surviving[:k])
        try:
            inv = _decode_solver(g, cols)
        except DecodingError:
            return None
        return write_plan, [coord_source[c] for c in cols], inv

    def _runner_separate(self, erased: frozenset[int]):
        g = self.generator
        k = g.k
        if k == 0:
            return lambda m: ()
        resolved = self._separate_plan(erased)
        if resolved is None:
            return lambda m: None
        write_plan, reads, inv = resolved
        t = self._template
        tv = t._val
        tpx = t._pair_x
        tpz = t._pair_z
        rows = g.rows
        total = g.n
        dits = self.message_dits
        spec = self.field

        if spec.p == 2:
            mbits = spec.m
            mask = spec.order - 1
            enc_t = _xor_row_tables(rows, spec)
            dec_t = _xor_row_tables(inv, spec)

            def run(m):
                if len(m) != dits:
                    raise ValueError(f"message length {len(m)} != {dits}")
                val = tv.copy()
                px = tpx.copy()
                pz = tpz.copy()
                acc = 0
                for l in range(k):
                    u = m[l]
                    if u:
                        acc ^= enc_t[l][u]
                for mode, target, coord in write_plan:
                    sym = (acc >> (coord * mbits)) & mask
                    if mode == "x":
                        px[target] = sym
                    elif mode == "z":
                        pz[target] = sym
                    else:
                        val[target] = sym
                dacc = 0
                for j in range(k):
                    mode, target = reads[j]
                    x = px[target] if mode == "x" else pz[target] if mode == "z" else val[target]
                    if x:
                        dacc ^= dec_t[j][x]
                return tuple((dacc >> (u * mbits)) & mask for u in range(k))

            return run

        add = spec.add_fn
        mul = spec.mul_fn

        def run(m):
            if len(m) != dits:
                raise ValueError(f"message length {len(m)} != {dits}")
            val = tv.copy()
            px = tpx.copy()
            pz = tpz.copy()
            word = _matvec(m, rows, total, add, mul)
            for mode, target, coord in write_plan:
                if mode == "x":
                    px[target] = word[coord]
                elif mode == "z":
                    pz[target] = word[coord]
                else:
                    val[target] = word[coord]
            got = [
                px[target] if mode == "x" else pz[target] if mode == "z" else val[target]
                for mode, target in reads
            ]
            return tuple(_matvec(got, inv, k, add, mul))

        return run

    # -- serialization --------------------------------------------------------------

    def to_dict(self) -> dict:
        doc = {
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "params": self.params.as_dict(),
            "field": {
                "p": self.field.p,
                "m": self.field.m,
                "primitive_poly": list(self.field.primitive_poly),
            },
            "schedule": [[s, t, i, j] for (s, t), (i, j) in self.schedule.edges],
            "subcodes": [
                {
                    "kind": sub.kind,
                    "column": sub.column,
                    "generator": [list(row) for row in sub.generator.rows],
                    "n_cols": sub.generator.n,
                }
                for sub in self.subcodes
            ],
            "generator": None
            if self.generator is None
            else {
                "rows": [list(row) for row in self.generator.rows],
                "n_cols": self.generator.n,
            },
            "entangled_used": self.entangled_used,
        }
        return doc

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def dump(self, fp: IO[str]) -> None:
        fp.write(self.dumps())
        fp.write("\n")

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"EaccCode({self.kind}, {self.params.label()})"


def code_from_dict(doc: dict) -> EaccCode:
    """Rebuild a code from its serialized form (inverse of ``to_dict``)."""
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    f = doc["field"]
    field = FieldSpec(f["p"], f["m"], tuple(f["primitive_poly"]))
    pd = doc["params"]
    params = CodeParams(
        n=pd["n"],
        d=pd["d"],
        c=pd["c"],
        qbar=pd["qbar"],
        r=pd["r"],
        q=pd["q"],
        k=Fraction(pd["k"]),
    )
    schedule = RearrangeSchedule(
        tuple(((s, t), (i, j)) for s, t, i, j in doc["schedule"])
    )
    subcodes = tuple(
        Subcode(
            sc["kind"],
            sc["column"],
            GeneratorMatrix(field, tuple(tuple(row) for row in sc["generator"]), sc["n_cols"]),
        )
        for sc in doc["subcodes"]
    )
    generator = None
    if doc["generator"] is not None:
        g = doc["generator"]
        generator = GeneratorMatrix(field, tuple(tuple(row) for row in g["rows"]), g["n_cols"])
    return EaccCode(
        kind=doc["kind"],
        params=params,
        field=field,
        subcodes=subcodes,
        schedule=schedule,
        generator=generator,
        entangled_used=doc["entangled_used"],
    )


def load_code(fp_or_str) -> EaccCode:
    """Load a code from a JSON string or an open text file."""
    if isinstance(fp_or_str, str):
        return code_from_dict(json.loads(fp_or_str))
    return code_from_dict(json.load(fp_or_str))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_unassisted(n: int, d: int, spec: FieldSpec) -> EaccCode:
    """An [n, n-d+1, d; 0] code: one MDS codeword in computational-basis slots."""
    require_admissible(n, d, 0)
    k1 = n - d + 1
    gen = _plain_generator(n, k1, spec)
    params = CodeParams(n=n, d=d, c=0, qbar=spec.order, r=1, q=spec.order, k=Fraction(k1))
    return EaccCode(
        "unassisted",
        params,
        spec,
        subcodes=(Subcode("unassisted", 1, gen),),
    )


def build_superdense(n: int, d: int, spec: FieldSpec) -> EaccCode:
    """An [n, 2(n-d+1), d; n] code: two MDS codewords ride each position's pair.

    Position i applies the displacement (y_i, y'_i) to its own pre-shared
    pair; the receiver measures surviving pairs in the displaced-pair basis
    and runs two erasure decodes.
    """
    require_admissible(n, d, n)
    k1 = n - d + 1
    gen = _plain_generator(n, k1, spec)
    params = CodeParams(
        n=n, d=d, c=n, qbar=spec.order, r=1, q=spec.order, k=Fraction(2 * k1)
    )
    schedule = RearrangeSchedule(tuple(((i, 1), (i, 1)) for i in range(1, n + 1)))
    return EaccCode(
        "superdense",
        params,
        spec,
        subcodes=(Subcode("superdense", 1, gen),),
        schedule=schedule,
    )


def build_spaceshared(n: int, d: int, c: int, qbar: int | None = None) -> EaccCode:
    """The rate-optimal combined code for any admissible (n, d, c).

    Splits each position into r sub-slots, stacks plain and superdense subcode
    columns, and wires entanglement through the uniform rearrangement
    schedule.  The exact rate equals (1 + c/n)(n - d + 1).
    """
    sp = spaceshare_params(n, d, c, qbar)
    p, m = prime_power(sp.qbar)
    spec = field_new(p, m)
    gen = _plain_generator(n, sp.plain_dits, spec)
    subcodes = tuple(
        Subcode("unassisted" if j <= sp.plain_columns else "superdense", j, gen)
        for j in range(1, sp.subslots + 1)
    )
    schedule = rearrange_schedule(n, c, sp.subslots)
    params = CodeParams(n=n, d=d, c=c, qbar=sp.qbar, r=sp.subslots, q=sp.q, k=sp.k)
    return EaccCode("spaceshared", params, spec, subcodes=subcodes, schedule=schedule)


def build_separate(n: int, d: int, c: int, spec: FieldSpec) -> EaccCode:
    """The bound-saturating construction under the separate-encoder constraint.

    With d - 1 <= c, a single [n+c, n+c-2d+2] MDS codeword is laid out two
    coordinates per entangled position (via the superdense trick on that
    position's own pair) and one per plain position, so each position encoder
    reads only the message and its own memory block.  Otherwise the
    entanglement cannot help a separate encoder reach further: a plain MDS
    code achieves the bound n - d + 1 and the pairs sit idle.
    """
    require_admissible(n, d, c)
    if spec.order < n + c:
        raise ValueError(
            f"field order {spec.order} too small: separate construction needs >= n + c = {n + c}"
        )
    rich = d - 1 <= c
    if rich:
        total = n + c
        kdits = total - 2 * (d - 1)
        gen = _plain_generator(total, kdits, spec)
        schedule = RearrangeSchedule(tuple(((i, 1), (i, 1)) for i in range(1, c + 1)))
    else:
        kdits = n - d + 1
        gen = _plain_generator(n, kdits, spec)
        schedule = RearrangeSchedule(())
    params = CodeParams(
        n=n, d=d, c=c, qbar=spec.order, r=1, q=spec.order, k=Fraction(kdits)
    )
    return EaccCode(
        "separate",
        params,
        spec,
        schedule=schedule,
        generator=gen,
        entangled_used=rich,
    )


def separate_from_generator(n: int, d: int, c: int, generator: GeneratorMatrix) -> EaccCode:
    """Separate-encoder layout around a caller-supplied coordinate generator.

    The generator must have n + c columns (two per entangled position, one per
    plain position) and need not be MDS; it only has to be decodable for every
    position-level erasure pattern, which ``verify_code`` will certify.  Used
    for small-field stand-ins where no MDS code of length n + c exists.
    """
    require_admissible(n, d, c)
    if d - 1 > c:
        raise ValueError("coordinate layout requires d - 1 <= c")
    if generator.n != n + c:
        raise ValueError(f"generator has {generator.n} columns, expected {n + c}")
    qbar = generator.spec.order
    params = CodeParams(
        n=n, d=d, c=c, qbar=qbar, r=1, q=qbar, k=Fraction(generator.k)
    )
    schedule = RearrangeSchedule(tuple(((i, 1), (i, 1)) for i in range(1, c + 1)))
    return EaccCode(
        "separate",
        params,
        generator.spec,
        schedule=schedule,
        generator=generator,
        entangled_used=True,
    )


@dataclass(frozen=True)
class AsymptoticReport:
    """Outcome of fitting the space-shared construction under a channel
    dimension q that need not be a power the construction can hit exactly."""

    code: EaccCode
    q_target: int
    qbar: int
    q_tilde: int
    k_at_qtilde: Fraction
    k_achieved: float
    k_achieved_exact: Fraction | None
    k_lower_bound: float


def build_asymptotic(n: int, d: int, c: int, q: int) -> AsymptoticReport:
    """Largest power-of-two base field whose r-th power fits inside q.

    Builds the space-shared code at dimension q_tilde = qbar^r <= q (unused
    dimensions of the channel stay idle) and reports the rate in base-q dits
    together with the analytic floor (1 - r log_q 2)(1 + c/n)(n - d + 1).
    """
    require_admissible(n, d, c)
    if q < 2:
        raise ValueError(f"channel dimension q = {q} must be >= 2")
    r = n // gcd(n, c) if c else 1
    t = 0
    while 2 ** ((t + 1) * r) <= q:
        t += 1
    if t == 0 or (1 << t) < n:
        raise ValueError(
            f"q = {q} too small: no power of two qbar with qbar >= {n} and qbar^{r} <= q"
        )
    qbar = 1 << t
    code = build_spaceshared(n, d, c, qbar=qbar)
    q_tilde = qbar**r
    k_q = code.params.k
    if q_tilde == q:
        exact: Fraction | None = k_q
        k_ach = float(k_q)
    else:
        exact = None
        a = q.bit_length() - 1
        if q == 1 << a:  # q a power of two: log ratio is rational
            exact = k_q * Fraction(t * r, a)
        k_ach = float(k_q) * math.log(q_tilde) / math.log(q)
    k_lb = (1.0 - r * math.log(2) / math.log(q)) * float(Fraction(n + c, n) * (n - d + 1))
    if k_ach < k_lb - 1e-12:
        raise AssertionError(
            f"achieved rate {k_ach} fell below the analytic floor {k_lb}"
        )
    return AsymptoticReport(
        code=code,
        q_target=q,
        qbar=qbar,
        q_tilde=q_tilde,
        k_at_qtilde=k_q,
        k_achieved=k_ach,
        k_achieved_exact=exact,
        k_lower_bound=k_lb,
    )
