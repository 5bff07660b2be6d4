"""Field arithmetic: construction, canonical polynomials, and the field laws
checked exhaustively for every built-in field of order <= 64."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eacc_lab.gf import (
    MAX_ORDER,
    FieldElem,
    digit_ops,
    field_arith,
    field_new,
    is_prime,
    prime_power,
    primitive_polynomial,
)

SMALL_FIELDS = [
    (2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6),
    (3, 1), (3, 2), (3, 3),
    (5, 1), (5, 2),
    (7, 1), (7, 2),
    (11, 1), (13, 1), (17, 1), (19, 1), (23, 1), (29, 1), (31, 1),
    (37, 1), (41, 1), (43, 1), (47, 1), (53, 1), (59, 1), (61, 1),
]


def test_prime_field_construction():
    f2 = field_new(2, 1)
    assert f2.order == 2
    assert f2.primitive_poly == (0, 1)  # the polynomial x
    f7 = field_new(7)
    assert f7.order == 7
    assert f7.primitive_poly == (0, 1)


def test_extension_field_polynomials_are_canonical():
    assert field_new(2, 2).primitive_poly == (1, 1, 1)  # x^2 + x + 1
    assert field_new(2, 3).primitive_poly == (1, 1, 0, 1)  # x^3 + x + 1
    # same (p, m) always yields the same spec
    assert field_new(2, 3) is field_new(2, 3)
    assert primitive_polynomial(2, 8) == primitive_polynomial(2, 8)


@pytest.mark.parametrize("p,m", [(2, 4), (3, 2), (5, 2), (7, 2), (2, 8)])
def test_polynomial_invariants(p, m):
    poly = primitive_polynomial(p, m)
    assert len(poly) == m + 1
    assert poly[-1] == 1  # monic
    assert poly[0] != 0  # irreducible implies nonzero constant term


def test_field_new_rejects_bad_input():
    with pytest.raises(ValueError):
        field_new(4)
    with pytest.raises(ValueError):
        field_new(1)
    with pytest.raises(ValueError):
        field_new(2, 0)
    with pytest.raises(ValueError):
        field_new(2, 17)  # 2^17 > MAX_ORDER
    assert field_new(2, 16).order == MAX_ORDER


def test_arith_examples():
    f2 = field_new(2)
    assert f2.mul(1, 1) == 1
    f4 = field_new(2, 2)
    # x * x = x + 1 under x^2 + x + 1
    assert f4.mul(2, 2) == 3
    for p, m in [(2, 3), (5, 1), (3, 2)]:
        spec = field_new(p, m)
        for a in range(1, spec.order):
            assert spec.div(a, a) == 1


def test_field_elem_operators():
    f4 = field_new(2, 2)
    a = f4.elem(2)
    b = f4.elem(3)
    assert (a * a).rep == 3
    assert (a + b).rep == 1
    assert (a - b).rep == 1
    assert (a / a).rep == 1
    assert (a**3).rep == 1  # multiplicative group has order 3
    assert (-a).rep == 2  # characteristic 2
    assert int(b) == 3
    with pytest.raises(ZeroDivisionError):
        a / f4.zero
    with pytest.raises(ValueError):
        a + field_new(3).elem(1)


def test_field_arith_dispatch():
    f5 = field_new(5)
    a, b = f5.elem(3), f5.elem(4)
    assert field_arith(a, b, "add").rep == 2
    assert field_arith(a, b, "sub").rep == 4
    assert field_arith(a, b, "mul").rep == 2
    assert field_arith(a, b, "div").rep == 2  # 3 * 4^-1 = 3 * 4 = 12 = 2
    with pytest.raises(ValueError):
        field_arith(a, b, "mod")
    with pytest.raises(ValueError):
        field_arith(a, field_new(7).elem(1), "add")
    with pytest.raises(ZeroDivisionError):
        field_arith(a, f5.zero, "div")


def _tables(spec):
    q = spec.order
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = spec.add(a, b)
            mul[a, b] = spec.mul(a, b)
    return add, mul


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_field_laws_exhaustive(p, m):
    """All the field axioms, exhaustively, for every built-in field <= 64."""
    spec = field_new(p, m)
    q = spec.order
    add, mul = _tables(spec)
    idx = np.arange(q)
    a = idx[:, None, None]
    b = idx[None, :, None]
    c = idx[None, None, :]
    # commutativity
    assert (add == add.T).all()
    assert (mul == mul.T).all()
    # associativity
    assert (add[add[a, b], c] == add[a, add[b, c]]).all()
    assert (mul[mul[a, b], c] == mul[a, mul[b, c]]).all()
    # distributivity
    assert (mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all()
    # identities and inverses
    assert (add[idx, 0] == idx).all()
    assert (mul[idx, 1] == idx).all()
    ones_per_row = (mul[1:, :] == 1).sum(axis=1)
    assert (ones_per_row == 1).all()  # unique multiplicative inverses
    for x in range(1, q):
        assert spec.mul(x, spec.inv(x)) == 1
        assert spec.pow_(x, q - 1) == 1  # multiplicative group has order q - 1
        assert spec.sub(x, x) == 0


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 1)])
def test_fast_accessors_match(p, m):
    spec = field_new(p, m)
    for a in range(spec.order):
        for b in range(spec.order):
            assert spec.add_fn(a, b) == spec.add(a, b)
            assert spec.sub_fn(a, b) == spec.sub(a, b)
            assert spec.mul_fn(a, b) == spec.mul(a, b)


@given(
    pm=st.sampled_from([(2, 4), (3, 3), (5, 2), (13, 1)]),
    reps=st.tuples(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6)),
)
@settings(max_examples=60, deadline=None)
def test_algebra_properties(pm, reps):
    spec = field_new(*pm)
    a, b, c = (spec.elem(r % spec.order) for r in reps)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - b == a + (-b)
    if b.rep != 0:
        assert (a / b) * b == a


def test_digit_ops():
    add4, sub4 = digit_ops(4)
    assert add4(3, 1) == 2  # (1,1) + (1,0) digit-wise mod 2
    assert sub4(2, 3) == 1
    add9, sub9 = digit_ops(9)
    assert add9(4, 4) == 8  # (1,1) + (1,1) mod 3 = (2,2)
    assert add9(8, 4) == 0  # (2,2) + (1,1) mod 3 = (0,0), no carries
    for x in range(9):
        for y in range(9):
            assert sub9(add9(x, y), y) == x
    with pytest.raises(ValueError):
        digit_ops(12)
    with pytest.raises(ValueError):
        digit_ops(1)


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(49) == (7, 2)
    assert prime_power(13) == (13, 1)
    for bad in (1, 6, 12, 100):
        with pytest.raises(ValueError):
            prime_power(bad)


def test_is_prime():
    assert [x for x in range(20) if is_prime(x)] == [2, 3, 5, 7, 11, 13, 17, 19]
