"""Reed-Solomon generators, encoding, and erasure decoding, with the decode
round-trip checked exhaustively on small fields."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eacc_lab.gf import field_new
from eacc_lab.mds import (
    BINARY_PARITY_G,
    ERASED,
    DecodingError,
    ErasedWord,
    GeneratorMatrix,
    empty_generator,
    identity_generator,
    is_mds,
    mds_encode,
    mds_erasure_decode,
    rs_generator,
)


def test_rs_generator_rejects_long_blocks():
    with pytest.raises(ValueError):
        rs_generator(3, 2, field_new(2))  # 3 > field order 2
    with pytest.raises(ValueError):
        rs_generator(4, 5, field_new(5))  # k > n
    with pytest.raises(ValueError):
        rs_generator(3, 0, field_new(5))


def test_rs_generator_repetition():
    g = rs_generator(3, 1, field_new(3))
    assert g.rows == ((1, 1, 1),)


def test_rs_generator_gf5_vandermonde():
    spec = field_new(5)
    g = rs_generator(4, 2, spec)
    assert g.rows == ((1, 1, 1, 1), (0, 1, 2, 3))
    # oracle: 2x2 minor over columns (i, j) is e_j - e_i, nonzero for i != j
    for i, j in itertools.combinations(range(4), 2):
        det = spec.sub(
            spec.mul(g.rows[0][i], g.rows[1][j]), spec.mul(g.rows[0][j], g.rows[1][i])
        )
        assert det == spec.sub(j, i) != 0
    assert is_mds(g)


def test_parity_literal():
    assert BINARY_PARITY_G.rows == ((1, 0, 1), (0, 1, 1))
    assert BINARY_PARITY_G.k == 2
    assert BINARY_PARITY_G.n == 3
    assert is_mds(BINARY_PARITY_G)


def test_encode_examples():
    assert mds_encode([1, 0], BINARY_PARITY_G) == (1, 0, 1)
    assert mds_encode([1, 1], BINARY_PARITY_G) == (1, 1, 0)
    assert mds_encode([0, 0], BINARY_PARITY_G) == (0, 0, 0)
    with pytest.raises(ValueError):
        mds_encode([1], BINARY_PARITY_G)


def test_decode_examples():
    word = ErasedWord.build([1, 0, ERASED])
    assert mds_erasure_decode(word, BINARY_PARITY_G) == (1, 0)
    # survivors give x2 = 1 and x1 + x2 = 1, hence (0, 1)
    word = ErasedWord.build([ERASED, 1, 1])
    assert mds_erasure_decode(word, BINARY_PARITY_G) == (0, 1)
    with pytest.raises(DecodingError):
        mds_erasure_decode(ErasedWord.build([ERASED, ERASED, 1]), BINARY_PARITY_G)


def test_decode_singular_system():
    spec = field_new(2)
    bad = GeneratorMatrix(spec, ((1, 0, 0), (0, 1, 1)), 3)
    assert not is_mds(bad)
    with pytest.raises(DecodingError):
        mds_erasure_decode(ErasedWord.build([ERASED, 1, 1]), bad)


def test_erased_word_invariants():
    w = ErasedWord.build([1, 2, 3], erased_positions=[1])
    assert w.erased_count == 1
    assert w.surviving_columns == (0, 2)
    with pytest.raises(ValueError):
        ErasedWord((1, ERASED), erased_count=0)


def test_is_mds_examples():
    assert is_mds(identity_generator(4, field_new(2)))
    assert is_mds(empty_generator(5, field_new(2)))
    assert not is_mds(GeneratorMatrix(field_new(2), ((1, 0, 0), (0, 1, 1)), 3))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (11, 1)])
def test_rs_generators_are_mds_exhaustively(p, m):
    spec = field_new(p, m)
    for n in range(1, min(8, spec.order) + 1):
        for k in range(1, n + 1):
            assert is_mds(rs_generator(n, k, spec)), (n, k, spec.order)


@pytest.mark.parametrize(
    "p,m,n,k",
    [(2, 2, 4, 2), (2, 3, 6, 2), (5, 1, 5, 3), (2, 3, 4, 4)],
)
def test_roundtrip_exhaustive(p, m, n, k):
    """Decode(erase(encode)) identity for every message and pattern <= n - k."""
    spec = field_new(p, m)
    g = rs_generator(n, k, spec)
    q = spec.order
    assert q**k <= 1 << 16
    for msg in itertools.product(range(q), repeat=k):
        word = mds_encode(msg, g)
        for size in range(n - k + 1):
            for pattern in itertools.combinations(range(n), size):
                got = mds_erasure_decode(ErasedWord.build(word, pattern), g)
                assert got == msg


def test_generator_matrix_validation():
    spec = field_new(2)
    with pytest.raises(ValueError):
        GeneratorMatrix(spec, ((1, 0), (0, 1, 1)), 3)
    with pytest.raises(ValueError):
        GeneratorMatrix(spec, ((2, 0, 0),), 3)


@given(
    data=st.data(),
    pm=st.sampled_from([(2, 2), (2, 3), (7, 1)]),
)
@settings(max_examples=60, deadline=None)
def test_roundtrip_property(data, pm):
    spec = field_new(*pm)
    q = spec.order
    n = data.draw(st.integers(2, min(8, q)))
    k = data.draw(st.integers(1, n))
    g = rs_generator(n, k, spec)
    msg = tuple(data.draw(st.integers(0, q - 1)) for _ in range(k))
    size = data.draw(st.integers(0, n - k))
    pattern = data.draw(
        st.lists(st.integers(0, n - 1), min_size=size, max_size=size, unique=True)
    )
    word = mds_encode(msg, g)
    assert mds_erasure_decode(ErasedWord.build(word, pattern), g) == msg
