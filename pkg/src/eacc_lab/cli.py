"""Command-line surface tying construction, verification, bound evaluation,
entropy auditing, and parameter sweeps into reproducible reports.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
parameter errors.  Given the same inputs and seed, outputs are byte-identical.
Set EACC_LOG to error/info/debug to adjust logging.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from eacc_lab.bounds import (
    admissibility_error,
    eacc_singleton,
    separate_singleton,
)
from eacc_lab.codes import (
    EaccCode,
    build_asymptotic,
    build_separate,
    build_spaceshared,
    build_superdense,
    build_unassisted,
    default_qbar,
    load_code,
)
from eacc_lab.entropy_audit import AuditInstance, audit_code, audit_regime1, audit_regime2
from eacc_lab.gf import field_new, prime_power
from eacc_lab.report import SCHEMA_VERSION, fraction_str, render_table
from eacc_lab.verify import check_rate_against_bounds, check_separate_encoders, verify_code

__all__ = ["main", "run_sweep", "SweepRow"]

log = logging.getLogger(__name__)


def _configure_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("EACC_LOG", "error").lower(), logging.ERROR
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _field_for(qbar: int):
    p, m = prime_power(qbar)
    return field_new(p, m)


def _build_code(args) -> EaccCode:
    n, d, c = args.n, args.d, args.c
    kind = args.kind
    if kind == "spaceshared":
        return build_spaceshared(n, d, c, qbar=args.qbar)
    if kind == "unassisted":
        if c != 0:
            raise ValueError("unassisted codes have c = 0")
        return build_unassisted(n, d, _field_for(args.qbar or default_qbar(n)))
    if kind == "superdense":
        if c != n:
            raise ValueError("superdense codes have c = n")
        return build_superdense(n, d, _field_for(args.qbar or default_qbar(n)))
    if kind == "separate":
        return build_separate(
            n, d, c, _field_for(args.qbar or default_qbar(n, c, separate=True))
        )
    if kind == "asymptotic":
        if args.q is None:
            raise ValueError("--kind asymptotic requires --q")
        return build_asymptotic(n, d, c, args.q).code
    raise ValueError(f"unknown kind {kind!r}")


def cmd_construct(args) -> int:
    reason = admissibility_error(args.n, args.d, args.c)
    if reason is not None:
        print(f"inadmissible: {reason}", file=sys.stderr)
        return 2
    try:
        code = _build_code(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    label = code.params.label()
    if args.out is None:
        print(label)
    elif args.out == "-":
        print(label, file=sys.stderr)
        print(code.dumps())
    else:
        with open(args.out, "w", encoding="utf-8") as fp:
            code.dump(fp)
        print(label)
    return 0


def _load_or_build(args) -> EaccCode:
    if args.file:
        with open(args.file, "r", encoding="utf-8") as fp:
            return load_code(fp)
    if args.n is None or args.d is None or args.c is None:
        raise ValueError("give --file, or all of --n/--d/--c")
    reason = admissibility_error(args.n, args.d, args.c)
    if reason is not None:
        raise ValueError(f"inadmissible: {reason}")
    return _build_code(args)


def cmd_verify(args) -> int:
    try:
        code = _load_or_build(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = verify_code(
        code,
        policy=args.policy,
        seed=args.seed,
        samples=args.samples,
        pattern_size=args.pattern_size,
    )
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_table())
        print(
            f"{report.patterns_checked} patterns x {report.messages_per_pattern} messages: "
            + ("PASS" if report.passed else "FAIL")
        )
    return 0 if report.passed else 1


def cmd_bounds(args) -> int:
    reason = admissibility_error(args.n, args.d, args.c)
    if reason is not None:
        print(f"inadmissible: {reason}", file=sys.stderr)
        return 2
    joint = eacc_singleton(args.n, args.d, args.c)
    sep = separate_singleton(args.n, args.d, args.c)
    if args.format == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "report": "bounds",
            "n": args.n,
            "d": args.d,
            "c": args.c,
            "eacc_bound": fraction_str(joint.value),
            "separate_bound": fraction_str(sep.value),
            "separate_regime": sep.regime,
        }
        print(json.dumps(doc, indent=2))
    else:
        rows = [
            ("joint encoders", fraction_str(joint.value), ""),
            ("separate encoders", fraction_str(sep.value), sep.regime),
        ]
        print(render_table(["bound", "value", "regime"], rows))
    return 0


def cmd_audit(args) -> int:
    try:
        if args.file:
            with open(args.file, "r", encoding="utf-8") as fp:
                code = load_code(fp)
        else:
            if args.n is None or args.d is None or args.c is None:
                raise ValueError("give --file, or all of --n/--d/--c")
            code = audit_code(args.n, args.d, args.c, args.regime)
        inst = AuditInstance.canonical(code, args.regime)
        report = audit_regime1(inst) if args.regime == 1 else audit_regime2(inst)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(f"code {report.params_label}  regime {report.regime}")
        print(report.to_table())
        print("ALL HOLD" if report.overall else "VIOLATIONS FOUND")
    return 0 if report.overall else 1


@dataclass(frozen=True)
class SweepRow:
    """One admissible triple's construction, verification, and bound gaps."""

    n: int
    d: int
    c: int
    qbar: int
    q: int
    k_achieved: Fraction
    eacc_bound: Fraction
    separate_bound: Fraction
    verified: bool
    separate: bool
    saturates_target: bool

    def as_record(self, with_float: bool = False) -> dict:
        rec = {
            "n": self.n,
            "d": self.d,
            "c": self.c,
            "qbar": self.qbar,
            "q": self.q,
            "k_achieved": fraction_str(self.k_achieved),
            "eacc_bound": fraction_str(self.eacc_bound),
            "separate_bound": fraction_str(self.separate_bound),
            "verified": self.verified,
            "separate": self.separate,
        }
        if with_float:
            rec["k_float"] = float(self.k_achieved)
        return rec


def run_sweep(
    nmax: int = 6,
    kind: str = "spaceshared",
    seed: int = 0,
    samples: int = 1024,
) -> list[SweepRow]:
    """Construct and verify every admissible triple with n <= nmax.

    For the space-shared kind the target bound is the joint-encoder cap; for
    the separate kind it is the separate-encoder cap.  Rows come out sorted by
    (n, d, c).
    """
    if kind not in ("spaceshared", "separate"):
        raise ValueError(f"sweep kind must be spaceshared or separate, got {kind!r}")
    rows: list[SweepRow] = []
    for n in range(1, nmax + 1):
        for d in range(1, n + 2):
            for c in range(0, n + 1):
                if kind == "spaceshared":
                    code = build_spaceshared(n, d, c)
                else:
                    code = build_separate(
                        n, d, c, _field_for(default_qbar(n, c, separate=True))
                    )
                report = verify_code(code, policy="auto", seed=seed, samples=samples)
                gap = check_rate_against_bounds(code)
                sep = check_separate_encoders(code)
                target_ok = (
                    gap.saturates_eacc if kind == "spaceshared" else gap.saturates_separate
                )
                rows.append(
                    SweepRow(
                        n=n,
                        d=d,
                        c=c,
                        qbar=code.params.qbar,
                        q=code.params.q,
                        k_achieved=code.params.k,
                        eacc_bound=gap.eacc_bound,
                        separate_bound=gap.separate_bound,
                        verified=report.passed,
                        separate=sep.separate,
                        saturates_target=target_ok,
                    )
                )
                log.info("sweep row (%d,%d,%d): verified=%s", n, d, c, report.passed)
    return rows


_SWEEP_HEADERS = [
    "n", "d", "c", "qbar", "q",
    "k_achieved", "eacc_bound", "separate_bound", "verified", "separate",
]


def cmd_sweep(args) -> int:
    try:
        rows = run_sweep(nmax=args.nmax, kind=args.kind, seed=args.seed, samples=args.samples)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    headers = list(_SWEEP_HEADERS) + (["k_float"] if args.float else [])
    records = [r.as_record(with_float=args.float) for r in rows]
    if args.format == "json":
        doc = {"schema": SCHEMA_VERSION, "report": "sweep", "kind": args.kind, "rows": records}
        text = json.dumps(doc, indent=2)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(headers)
        for rec in records:
            writer.writerow(
                [str(rec[h]).lower() if isinstance(rec[h], bool) else rec[h] for h in headers]
            )
        text = buf.getvalue().rstrip("\n")
    else:
        text = render_table(headers, [[rec[h] for h in headers] for rec in records])
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fp:
            fp.write(text)
            fp.write("\n")
    else:
        print(text)
    ok = all(r.verified and r.saturates_target for r in rows)
    return 0 if ok else 1


def _add_params(sub, required: bool = True) -> None:
    sub.add_argument("--n", type=int, required=required, help="block length")
    sub.add_argument("--d", type=int, required=required, help="distance (tolerates d-1 erasures)")
    sub.add_argument("--c", type=int, required=required, help="pre-shared pairs")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eacc-lab",
        description="Entanglement-assisted classical erasure codes: build, certify, audit.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("construct", help="build a code and print its parameters")
    _add_params(p)
    p.add_argument("--qbar", type=int, default=None, help="base field order override")
    p.add_argument(
        "--kind",
        choices=["spaceshared", "unassisted", "superdense", "separate", "asymptotic"],
        default="spaceshared",
    )
    p.add_argument("--q", type=int, default=None, help="channel dimension (asymptotic kind)")
    p.add_argument("--out", default=None, help="write code JSON here ('-' for stdout)")
    p.set_defaults(func=cmd_construct)

    p = subs.add_parser("verify", help="run the erasure-decoding certification")
    p.add_argument("--file", default=None, help="code JSON to verify")
    _add_params(p, required=False)
    p.add_argument("--qbar", type=int, default=None)
    p.add_argument(
        "--kind",
        choices=["spaceshared", "unassisted", "superdense", "separate", "asymptotic"],
        default="spaceshared",
    )
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--policy", choices=["auto", "exhaustive", "sampled"], default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument(
        "--pattern-size",
        type=int,
        default=None,
        help="erasure pattern size (default d-1; larger is the negative control)",
    )
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("bounds", help="evaluate both rate caps exactly")
    _add_params(p)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_bounds)

    p = subs.add_parser("audit", help="replay the separate-encoder bound's entropy chain")
    p.add_argument("--file", default=None, help="code JSON to audit")
    _add_params(p, required=False)
    p.add_argument("--regime", type=int, choices=[1, 2], required=True)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_audit)

    p = subs.add_parser("sweep", help="construct+verify every admissible triple")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--kind", choices=["spaceshared", "separate"], default="spaceshared")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--float", action="store_true", help="add a float rate column")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
