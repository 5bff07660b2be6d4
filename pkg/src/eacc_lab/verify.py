"""Certification engine: exhaustive/sampled erasure-decoding checks,
separate-encoder structural analysis, and bound-gap reporting.

The decoding check is an end-to-end simulation: encode, erase channel
positions, decode, compare.  Message spaces explode combinatorially, so the
policy is: exhaustive when the space has at most 2^16 messages, otherwise a
seeded uniform sample of combined messages (plus the all-zeros and all-max
corners) together with an exhaustive check of each constituent sub-slot
column.  Sub-slot columns never interact in encoding or decoding, so
per-column exhaustiveness certifies the combination.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from eacc_lab.bounds import eacc_singleton, separate_singleton
from eacc_lab.codes import CodeParams, EaccCode, Subcode
from eacc_lab.mds import DecodingError, GeneratorMatrix
from eacc_lab.report import SCHEMA_VERSION, fraction_str, render_table

__all__ = [
    "EXHAUSTIVE_CAP",
    "RNG_NAME",
    "VerifyReport",
    "SeparateCheck",
    "GapReport",
    "verify_code",
    "check_separate_encoders",
    "check_rate_against_bounds",
]

log = logging.getLogger(__name__)

#: Largest message space that is enumerated exhaustively.
EXHAUSTIVE_CAP = 1 << 16
#: The sampling generator recorded in reports (Python's seeded Mersenne Twister).
RNG_NAME = "python-random-mt19937"
#: At most this many failures are kept verbatim; the count is always exact.
FAILURE_KEEP = 64


@dataclass
class VerifyReport:
    """Outcome of an erasure-decoding certification run."""

    params: CodeParams
    kind: str
    pattern_size: int
    patterns_checked: int
    messages_per_pattern: int
    policy: dict
    failure_count: int
    failures: list  # up to FAILURE_KEEP of (message, pattern, decoded-or-None)
    subcode_checks: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and all(
            sc["failure_count"] == 0 for sc in self.subcode_checks
        )

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "report": "verify",
            "params": self.params.as_dict(),
            "kind": self.kind,
            "pattern_size": self.pattern_size,
            "patterns_checked": self.patterns_checked,
            "messages_per_pattern": self.messages_per_pattern,
            "policy": self.policy,
            "failure_count": self.failure_count,
            "failures": [
                {
                    "message": list(m),
                    "pattern": list(pat),
                    "decoded": None if got is None else list(got),
                }
                for m, pat, got in self.failures
            ],
            "subcode_checks": self.subcode_checks,
            "passed": self.passed,
        }

    def to_table(self) -> str:
        rows = [
            ("code", self.params.label()),
            ("kind", self.kind),
            ("patterns", str(self.patterns_checked)),
            ("messages/pattern", str(self.messages_per_pattern)),
            ("policy", self.policy["mode"]),
            ("failures", str(self.failure_count)),
            ("subcode checks", str(len(self.subcode_checks))),
            ("result", "PASS" if self.passed else "FAIL"),
        ]
        return render_table(["field", "value"], rows)


def _run_messages(code: EaccCode, patterns, message_factory) -> tuple[int, list]:
    """Simulate every (pattern, message) pair; return (count, failures).

    ``message_factory`` yields the message iterable afresh per pattern.  The
    per-pattern runner is the public encode/erase/decode pipeline with slot
    indices and column solvers resolved once (see EaccCode.pattern_runner).
    """
    failures: list = []
    count = 0
    for pattern in patterns:
        run = code.pattern_runner(pattern)
        for m in message_factory():
            got = run(m)
            if got != m:
                count += 1
                if len(failures) < FAILURE_KEEP:
                    failures.append((m, pattern, got))
    return count, failures


def _exhaustive_factory(code: EaccCode):
    qbar = code.params.qbar
    dits = code.message_dits
    return lambda: itertools.product(range(qbar), repeat=dits)


def _sampled_messages(code: EaccCode, seed: int, samples: int) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    msgs = [code.zero_message(), code.max_message()]
    msgs.extend(code.random_message(rng) for _ in range(samples))
    return msgs


def _single_column_code(sub: Subcode, d: int) -> EaccCode:
    """A standalone code running just this sub-slot column's scheme."""
    from eacc_lab.codes import RearrangeSchedule  # local to avoid cycles in doc order

    g = sub.generator
    n = g.n
    if sub.kind == "unassisted":
        params = CodeParams(n=n, d=d, c=0, qbar=g.spec.order, r=1, q=g.spec.order, k=Fraction(g.k))
        return EaccCode("unassisted", params, g.spec, subcodes=(Subcode("unassisted", 1, g),))
    params = CodeParams(n=n, d=d, c=n, qbar=g.spec.order, r=1, q=g.spec.order, k=Fraction(2 * g.k))
    schedule = RearrangeSchedule(tuple(((i, 1), (i, 1)) for i in range(1, n + 1)))
    return EaccCode(
        "superdense", params, g.spec, subcodes=(Subcode("superdense", 1, g),), schedule=schedule
    )


# one entry per distinct (kind, generator, d, seed, samples): sub-slot columns
# repeat across columns and across sweep triples, so this saves real time
_SUBCODE_MEMO: dict[tuple, dict] = {}


def _check_subcode(sub: Subcode, d: int, seed: int, samples: int) -> dict:
    key = (sub.kind, sub.generator, d, seed, samples)
    cached = _SUBCODE_MEMO.get(key)
    if cached is not None:
        return dict(cached)
    rep = _single_column_code(sub, d)
    patterns = list(itertools.combinations(range(1, rep.params.n + 1), d - 1))
    exhaustive = rep.message_space_size <= EXHAUSTIVE_CAP
    if exhaustive:
        factory = _exhaustive_factory(rep)
        n_messages = rep.message_space_size
    else:
        messages = _sampled_messages(rep, seed, samples)
        factory = lambda: messages
        n_messages = len(messages)
    count, _ = _run_messages(rep, patterns, factory)
    result = {
        "kind": sub.kind,
        "n": rep.params.n,
        "dits": rep.message_dits,
        "exhaustive": exhaustive,
        "messages": n_messages,
        "patterns": len(patterns),
        "failure_count": count,
    }
    _SUBCODE_MEMO[key] = dict(result)
    return result


def verify_code(
    code: EaccCode,
    policy: str = "auto",
    seed: int = 0,
    samples: int = 1024,
    pattern_size: int | None = None,
) -> VerifyReport:
    """Certify perfect erasure decoding over every pattern of the given size.

    ``policy`` is "auto" (exhaustive up to 2^16 messages, sampled beyond),
    "exhaustive", or "sampled".  ``pattern_size`` defaults to d - 1; passing a
    larger size is the standard negative control - failures are recorded as
    data, never raised.
    """
    p = code.params
    if pattern_size is None:
        pattern_size = p.d - 1
    if not 0 <= pattern_size <= p.n:
        raise ValueError(f"pattern size {pattern_size} outside 0..{p.n}")
    patterns = list(itertools.combinations(range(1, p.n + 1), pattern_size))

    space = code.message_space_size
    if policy == "auto":
        mode = "exhaustive" if space <= EXHAUSTIVE_CAP else "sampled"
    elif policy in ("exhaustive", "sampled"):
        mode = policy
    else:
        raise ValueError(f"unknown policy {policy!r}")

    if mode == "exhaustive":
        factory = _exhaustive_factory(code)
        n_messages = space
    else:
        messages = _sampled_messages(code, seed, samples)
        factory = lambda: messages
        n_messages = len(messages)
    log.info(
        "verifying %s: %d patterns x %d messages (%s)",
        p.label(), len(patterns), n_messages, mode,
    )

    count, failures = _run_messages(code, patterns, factory)

    subcode_checks: list[dict] = []
    if mode == "sampled" and len(code.subcodes) > 1 and pattern_size == p.d - 1:
        seen: set[tuple] = set()
        for sub in code.subcodes:
            fingerprint = (sub.kind, sub.generator)
            if fingerprint in seen:
                continue
            seen.add(fingerprint)
            subcode_checks.append(_check_subcode(sub, p.d, seed, samples))

    return VerifyReport(
        params=p,
        kind=code.kind,
        pattern_size=pattern_size,
        patterns_checked=len(patterns),
        messages_per_pattern=n_messages,
        policy={
            "mode": mode,
            "rng": RNG_NAME if mode == "sampled" else None,
            "seed": seed if mode == "sampled" else None,
            "samples": samples if mode == "sampled" else None,
            "corner_messages": mode == "sampled",
            "exhaustive_cap": EXHAUSTIVE_CAP,
        },
        failure_count=count,
        failures=failures,
        subcode_checks=subcode_checks,
    )


@dataclass(frozen=True)
class SeparateCheck:
    """Structural verdict: does each position consume only its own memory block?"""

    separate: bool
    witness: dict | None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "report": "separate-encoders",
            "separate": self.separate,
            "witness": self.witness,
        }


def check_separate_encoders(code: EaccCode) -> SeparateCheck:
    """Decide separateness by wiring analysis of the rearrangement schedule.

    The scheme is separate iff every entangled sub-slot feeding position i
    comes from memory block i with i <= c; the witness names the first
    crossing edge otherwise.
    """
    c = code.params.c
    for (s, t), (i, j) in code.schedule.edges:
        if i > c or s != i:
            return SeparateCheck(
                separate=False,
                witness={"memory": [s, t], "channel": [i, j]},
            )
    return SeparateCheck(separate=True, witness=None)


@dataclass(frozen=True)
class GapReport:
    """Exact comparison of an achieved rate against both rate caps."""

    k_achieved: Fraction
    eacc_bound: Fraction
    separate_bound: Fraction
    saturates_eacc: bool
    saturates_separate: bool

    def __post_init__(self) -> None:
        if self.k_achieved > self.eacc_bound:
            raise ValueError(
                f"rate {self.k_achieved} exceeds the joint-encoder cap {self.eacc_bound}"
            )

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "report": "bound-gap",
            "k_achieved": fraction_str(self.k_achieved),
            "eacc_bound": fraction_str(self.eacc_bound),
            "separate_bound": fraction_str(self.separate_bound),
            "saturates_eacc": self.saturates_eacc,
            "saturates_separate": self.saturates_separate,
        }


def check_rate_against_bounds(code: EaccCode) -> GapReport:
    """Exact rational rate-versus-bounds comparison with saturation flags."""
    p = code.params
    eacc = eacc_singleton(p.n, p.d, p.c).value
    sep = separate_singleton(p.n, p.d, p.c).value
    return GapReport(
        k_achieved=p.k,
        eacc_bound=eacc,
        separate_bound=sep,
        saturates_eacc=p.k == eacc,
        saturates_separate=p.k == sep,
    )
