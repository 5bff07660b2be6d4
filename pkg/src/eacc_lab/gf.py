"""Exact arithmetic over prime-power finite fields GF(p^m).

A field element is represented as a canonical integer in ``[0, p^m)``: the
base-p digits of the integer are the coefficients of the residue polynomial,
lowest degree first.  This makes equality and serialization trivial and keeps
all arithmetic exact.

Reduction moduli come from a fixed, versioned rule (see
:func:`primitive_polynomial`), so the same ``(p, m)`` always produces the same
field, bit for bit.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Iterator

__all__ = [
    "MAX_ORDER",
    "FieldSpec",
    "FieldElem",
    "field_new",
    "field_arith",
    "primitive_polynomial",
    "prime_power",
    "digit_ops",
    "is_prime",
]

#: Largest field order covered by the built-in polynomial rule.
MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (adequate below 2^16)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@functools.lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def prime_power(n: int) -> tuple[int, int]:
    """Decompose ``n = p^m`` with p prime, or raise ValueError."""
    if n < 2:
        raise ValueError(f"{n} is not a prime power")
    fs = _prime_factors(n)
    if len(fs) != 1:
        raise ValueError(f"{n} is not a prime power")
    p = fs[0]
    m = 0
    q = n
    while q > 1:
        q //= p
        m += 1
    if p**m != n:
        raise ValueError(f"{n} is not a prime power")
    return p, m


def _digits(x: int, p: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        out.append(x % p)
        x //= p
    return tuple(out)


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(p), used only to pin reduction moduli.
# Polynomials are coefficient tuples, lowest degree first.
# ---------------------------------------------------------------------------


def _poly_mulmod(a: tuple, b: tuple, mod: tuple, p: int) -> tuple:
    deg_mod = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, deg_mod - 1, -1):
        coef = res[i]
        if coef:
            res[i] = 0
            off = i - deg_mod
            for j in range(deg_mod):
                res[off + j] = (res[off + j] - coef * mod[j]) % p
    while len(res) > 1 and res[-1] == 0:
        res.pop()
    return tuple(res)


def _poly_powmod(base: tuple, e: int, mod: tuple, p: int) -> tuple:
    result = (1,)
    acc = base
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, mod, p)
        acc = _poly_mulmod(acc, acc, mod, p)
        e >>= 1
    return result


@functools.lru_cache(maxsize=None)
def primitive_polynomial(p: int, m: int) -> tuple[int, ...]:
    """Canonical monic reduction polynomial for GF(p^m), low degree first.

    The rule (version 1, frozen): for m = 1 the polynomial is ``x``; for
    m >= 2 it is the monic degree-m polynomial with the smallest integer
    encoding (coefficients as base-p digits) whose root generates the full
    multiplicative group of order ``p^m - 1``.  The rule is deterministic, so
    every construction built on top of it is reproducible.
    """
    if m == 1:
        return (0, 1)
    order = p**m
    group = order - 1
    factors = _prime_factors(group)
    x = (0, 1)
    for low in range(1, order):
        if low % p == 0:
            continue  # zero constant term: x divides the candidate
        coeffs = _digits(low, p, m) + (1,)
        if _poly_powmod(x, group, coeffs, p) != (1,):
            continue
        if any(_poly_powmod(x, group // f, coeffs, p) == (1,) for f in factors):
            continue
        return coeffs
    raise AssertionError(f"no primitive polynomial found for GF({p}^{m})")


# ---------------------------------------------------------------------------
# Field specification and element arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A concrete finite field GF(p^m) with its reduction polynomial.

    Elements are integers in ``[0, order)``.  The methods ``add``, ``sub``,
    ``mul``, ``div``, ``inv`` and ``pow_`` operate directly on these integer
    representatives; :class:`FieldElem` wraps them with operator syntax.
    """

    p: int
    m: int
    primitive_poly: tuple[int, ...]

    @functools.cached_property
    def order(self) -> int:
        return self.p**self.m

    # -- construction ------------------------------------------------------

    def elem(self, rep: int) -> "FieldElem":
        return FieldElem(self, rep)

    def elements(self) -> Iterator["FieldElem"]:
        for rep in range(self.order):
            yield FieldElem(self, rep)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    # -- raw arithmetic (table-free), used to bootstrap the log tables ------

    def _raw_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return (a * b) % p
        # digit convolution followed by reduction
        ad = _digits(a, p, m)
        bd = _digits(b, p, m)
        res = [0] * (2 * m - 1)
        for i, ai in enumerate(ad):
            if ai:
                for j, bj in enumerate(bd):
                    if bj:
                        res[i + j] = (res[i + j] + ai * bj) % p
        mod = self.primitive_poly
        for i in range(2 * m - 2, m - 1, -1):
            coef = res[i]
            if coef:
                res[i] = 0
                off = i - m
                for j in range(m):
                    res[off + j] = (res[off + j] - coef * mod[j]) % p
        out = 0
        for d in reversed(res[:m]):
            out = out * p + d
        return out

    @functools.cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        """(exp, log) tables for the multiplicative group.

        ``exp`` has length ``2 (order - 1) + 1`` so sums/differences of two
        logs index it without a modulo.  The generator is ``x`` itself for
        extension fields (primitive by construction of the modulus) and the
        smallest primitive root for prime fields.
        """
        order = self.order
        group = order - 1
        if self.m == 1:
            g = self._smallest_primitive_root()
        else:
            g = self.p  # the class of x
        exp = [0] * (2 * group + 1)
        log = [0] * order
        cur = 1
        for i in range(group):
            exp[i] = cur
            log[cur] = i
            cur = self._raw_mul(cur, g)
        if cur != 1:
            raise AssertionError("generator does not have full order")
        for i in range(group, 2 * group + 1):
            exp[i] = exp[i - group]
        return exp, log

    def _smallest_primitive_root(self) -> int:
        p = self.p
        if p == 2:
            return 1
        group = p - 1
        factors = _prime_factors(group)
        for g in range(2, p):
            if all(pow(g, group // f, p) != 1 for f in factors):
                return g
        raise AssertionError(f"no primitive root modulo {p}")

    # -- arithmetic on integer representatives ------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % p
        out = 0
        mult = 1
        for _ in range(self.m):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.m == 1:
            return (a - b) % p
        out = 0
        mult = 1
        for _ in range(self.m):
            out += ((a % p - b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        exp, log = self._tables
        return exp[self.order - 1 - log[a]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in a finite field")
        if a == 0:
            return 0
        exp, log = self._tables
        return exp[log[a] - log[b] + self.order - 1]

    def pow_(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        exp, log = self._tables
        return exp[(log[a] * e) % (self.order - 1)]

    # -- hot-loop accessors --------------------------------------------------

    @functools.cached_property
    def add_fn(self) -> Callable[[int, int], int]:
        if self.p == 2:
            return lambda a, b: a ^ b
        if self.m == 1:
            p = self.p
            return lambda a, b: (a + b) % p
        return self.add

    @functools.cached_property
    def sub_fn(self) -> Callable[[int, int], int]:
        if self.p == 2:
            return lambda a, b: a ^ b
        if self.m == 1:
            p = self.p
            return lambda a, b: (a - b) % p
        return self.sub

    @functools.cached_property
    def mul_fn(self) -> Callable[[int, int], int]:
        exp, log = self._tables
        def mul(a: int, b: int, _exp=exp, _log=log) -> int:
            if a == 0 or b == 0:
                return 0
            return _exp[_log[a] + _log[b]]
        return mul

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"FieldSpec(GF({self.p}^{self.m})={self.order})"


@dataclass(frozen=True)
class FieldElem:
    """An element of a finite field: a spec plus a canonical integer rep."""

    spec: FieldSpec
    rep: int

    def __post_init__(self) -> None:
        if not 0 <= self.rep < self.spec.order:
            raise ValueError(f"rep {self.rep} out of range for order {self.spec.order}")

    def _coerced(self, other: "FieldElem") -> int:
        if not isinstance(other, FieldElem):
            raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")
        if other.spec != self.spec:
            raise ValueError("field elements from different fields")
        return other.rep

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return FieldElem(self.spec, self.spec.add(self.rep, self._coerced(other)))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return FieldElem(self.spec, self.spec.sub(self.rep, self._coerced(other)))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return FieldElem(self.spec, self.spec.mul(self.rep, self._coerced(other)))

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return FieldElem(self.spec, self.spec.div(self.rep, self._coerced(other)))

    def __pow__(self, e: int) -> "FieldElem":
        return FieldElem(self.spec, self.spec.pow_(self.rep, e))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.spec, self.spec.neg(self.rep))

    def __int__(self) -> int:
        return self.rep

    def __bool__(self) -> bool:
        return self.rep != 0


@functools.lru_cache(maxsize=None)
def field_new(p: int, m: int = 1) -> FieldSpec:
    """Build (or fetch) the canonical GF(p^m).

    Raises ValueError for non-prime p, m < 1, or orders beyond the built-in
    polynomial rule's range (2^16).
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if m < 1:
        raise ValueError(f"extension degree m = {m} must be >= 1")
    order = p**m
    if order > MAX_ORDER:
        raise ValueError(
            f"GF({p}^{m}) has order {order} > {MAX_ORDER}, outside the built-in table"
        )
    return FieldSpec(p, m, primitive_polynomial(p, m))


_ARITH = {
    "add": lambda s, a, b: s.add(a, b),
    "sub": lambda s, a, b: s.sub(a, b),
    "mul": lambda s, a, b: s.mul(a, b),
    "div": lambda s, a, b: s.div(a, b),
}


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """Apply one of {add, sub, mul, div} to two elements of the same field."""
    if op not in _ARITH:
        raise ValueError(f"unknown op {op!r}")
    if a.spec != b.spec:
        raise ValueError("field elements from different fields")
    return FieldElem(a.spec, _ARITH[op](a.spec, a.rep, b.rep))


@functools.lru_cache(maxsize=None)
def digit_ops(dim: int) -> tuple[Callable[[int, int], int], Callable[[int, int], int]]:
    """(add, sub) acting digit-wise base p on integers below ``dim = p^m``.

    This is the displacement-composition rule for qudit registers: a
    dimension-``p^m`` system is treated as m independent p-dimensional ones.
    """
    p, m = prime_power(dim)
    if p == 2:
        xor = lambda a, b: a ^ b
        return xor, xor
    if m == 1:
        return (lambda a, b: (a + b) % p), (lambda a, b: (a - b) % p)

    def add(a: int, b: int) -> int:
        out, mult = 0, 1
        for _ in range(m):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def sub(a: int, b: int) -> int:
        out, mult = 0, 1
        for _ in range(m):
            out += ((a % p - b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    return add, sub
