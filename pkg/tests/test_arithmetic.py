import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liouville.arithmetic import (
    CoverageError,
    MemoryCapError,
    MobiusTable,
    SieveConfig,
    SignTable,
    factorize,
    linear_sieve,
    liouville_point,
    mobius_point,
    sieve_liouville,
    sieve_mobius,
)


@pytest.mark.parametrize("n, expected", [(1, 1), (2, -1), (12, -1), (9, 1), (10**5, 1), (999_983 * 1_000_003, 1), (2**62, 1)])
def test_liouville_point(n, expected):
    assert liouville_point(n) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (4, 0), (6, 1), (30, -1), (2, -1), (18, 0)])
def test_mobius_point(n, expected):
    assert mobius_point(n) == expected


@pytest.mark.parametrize("bad", [0, -3])
def test_point_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        liouville_point(bad)
    with pytest.raises(ValueError):
        mobius_point(bad)


def test_point_rejects_beyond_64_bits():
    with pytest.raises(ValueError):
        liouville_point(2**63)


def test_factorize_roundtrip():
    for n in (1, 2, 360, 9973, 2**10 * 3**5 * 7, 999_983 * 1_000_003):
        prod = 1
        for p, e in factorize(n):
            prod *= p**e
        assert prod == n


def test_linear_sieve_parity_matches_points():
    primes, parity = linear_sieve(2000)
    assert primes[:10] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes) == 303
    assert all(1 - 2 * parity[n] == liouville_point(n) for n in range(1, 2001))


def test_sieve_small_examples():
    assert sieve_liouville(1, 10).signs(1, 10).tolist() == [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]
    assert sieve_liouville(1, 1).signs(1, 1).tolist() == [1]
    single = sieve_liouville(10**5, 10**5)
    assert single.signs(10**5, 10**5).tolist() == [liouville_point(10**5)] == [1]


def test_sieve_mobius_examples(mu_list):
    assert sieve_mobius(1, 4).values(1, 4).tolist() == [1, -1, -1, 0]
    assert sieve_mobius(1, 1).values(1, 1).tolist() == [1]
    assert sieve_mobius(2, 10).values(2, 10).tolist() == mu_list[2:11]


def test_sieve_agrees_with_points_on_1e4(small_table, lam, mobius_small, mu_list):
    assert small_table.signs(1, 10_000).tolist() == lam[1:10_001]
    assert mobius_small.values(1, 10_000).tolist() == mu_list[1:10_001]


def test_sieve_random_sample_large_range():
    lo, hi = 10**9, 10**9 + 50_000
    table = sieve_liouville(lo, hi, SieveConfig(segment_length=7919))
    rng = random.Random(20240501)
    for n in rng.sample(range(lo, hi + 1), 200):
        assert table[n] == liouville_point(n)
    mt = sieve_mobius(lo, hi)
    for n in rng.sample(range(lo, hi + 1), 200):
        assert mt[n] == mobius_point(n)


@pytest.mark.parametrize("seg", [2, 3, 64, 1000, 1 << 22])
@pytest.mark.parametrize("workers", [1, 3, 8])
def test_sieve_independent_of_segmentation(seg, workers):
    cfg = SieveConfig(segment_length=seg, worker_count=workers)
    ref = sieve_liouville(5, 5000)
    assert sieve_liouville(5, 5000, cfg) == ref
    assert sieve_mobius(5, 5000, cfg) == sieve_mobius(5, 5000)


def test_completely_multiplicative():
    rng = random.Random(7)
    for _ in range(200):
        m, n = rng.randint(1, 10**6), rng.randint(1, 10**6)
        assert liouville_point(m * n) == liouville_point(m) * liouville_point(n)


@given(st.integers(min_value=1, max_value=10**6))
@settings(max_examples=100, deadline=None)
def test_squares_are_positive(n):
    assert liouville_point(n * n) == 1


def test_squares_in_table(small_table):
    assert all(small_table[n * n] == 1 for n in range(1, 142))


def test_sieve_errors():
    with pytest.raises(ValueError):
        sieve_liouville(10, 9)
    with pytest.raises(ValueError):
        sieve_liouville(0, 9)
    with pytest.raises(MemoryCapError):
        sieve_liouville(1, 10**6, SieveConfig(memory_cap=1000))
    with pytest.raises(ValueError):
        SieveConfig(segment_length=1)


def test_memory_cap_env(monkeypatch):
    monkeypatch.setenv("LIOUVILLE_MEMORY_CAP", "64")
    with pytest.raises(MemoryCapError):
        sieve_liouville(1, 1000)
    assert sieve_liouville(1, 500).hi == 500


def test_table_is_immutable(small_table):
    with pytest.raises(ValueError):
        small_table.bits[0] = 0
    with pytest.raises(AttributeError):
        small_table.lo = 3


def test_coverage_errors(small_table):
    with pytest.raises(CoverageError):
        small_table.signs(1, 10**6)
    t = sieve_liouville(100, 200)
    with pytest.raises(CoverageError):
        t[99]


def test_words_realignment(small_table, lam):
    for a in (1, 2, 7, 8, 9, 63, 64, 65, 1000):
        for length in (1, 5, 63, 64, 65, 200):
            w = small_table.words(a, length)
            bits = np.unpackbits(w.view(np.uint8), bitorder="little")
            assert bits[:length].tolist() == [(1 + lam[n]) // 2 for n in range(a, a + length)]
            assert not bits[length:].any()


def test_dump_roundtrip(tmp_path):
    table = sieve_liouville(3, 1000)
    path = tmp_path / "t.liou"
    table.save(path)
    data = path.read_bytes()
    assert data[:4] == b"LIOU"
    assert int.from_bytes(data[4:6], "little") == 1
    assert int.from_bytes(data[8:16], "little") == 3
    assert int.from_bytes(data[16:24], "little") == 1000
    # entry for lo sits at bit 0 of the first body byte
    assert data[24] & 1 == (1 + liouville_point(3)) // 2
    assert (data[24] >> 1) & 1 == (1 + liouville_point(4)) // 2
    assert SignTable.load(path) == table


def test_dump_rejects_bad_magic():
    with pytest.raises(ValueError):
        SignTable.from_bytes(b"NOPE" + bytes(40))


def test_mobius_table_packing():
    vals = [1, -1, -1, 0, -1, 1, -1]
    t = MobiusTable.from_values(1, vals)
    assert t.codes.size == 2
    assert t.values(1, 7).tolist() == vals
    assert t.values(3, 5).tolist() == [-1, 0, -1]
