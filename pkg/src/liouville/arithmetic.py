"""Exact values of the Liouville and Moebius functions.

Point values come from trial-division factorization.  Ranges are produced by a
segmented sieve: the primes up to sqrt(hi) come from a linear (Euler) sieve,
then each segment of [lo, hi] is swept once per prime power, flipping a parity
bit and dividing out the prime.  Whatever survives the division is a single
prime above sqrt(hi) and contributes one more factor.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

MAX_POINT = 2**63 - 1
MEMORY_CAP_ENV = "LIOUVILLE_MEMORY_CAP"
DEFAULT_MEMORY_CAP = 2 * 1024**3

DUMP_MAGIC = b"LIOU"
DUMP_VERSION = 1
_DUMP_HEADER = struct.Struct("<4sHHQQ")


class CoverageError(ValueError):
    """A table does not contain every index an operation needs."""


class MemoryCapError(ValueError):
    """A table would exceed the configured storage cap."""


def _default_memory_cap() -> int:
    raw = os.environ.get(MEMORY_CAP_ENV)
    if raw is None:
        return DEFAULT_MEMORY_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{MEMORY_CAP_ENV} must be an integer byte count, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{MEMORY_CAP_ENV} must be positive")
    return cap


@dataclass(frozen=True)
class SieveConfig:
    segment_length: int = 1 << 22
    worker_count: int = 1
    memory_cap: int = field(default_factory=_default_memory_cap)

    def __post_init__(self):
        if self.segment_length < 2:
            raise ValueError("segment_length must be at least 2")
        if self.worker_count < 1:
            raise ValueError("worker_count must be at least 1")
        if self.memory_cap < 1:
            raise ValueError("memory_cap must be positive")


# ---------------------------------------------------------------------------
# point evaluation


def _check_point(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"expected an integer, got {type(n).__name__}")
    n = int(n)
    if n < 1:
        raise ValueError(f"argument must be a positive integer, got {n}")
    if n > MAX_POINT:
        raise ValueError(f"argument exceeds 2**63 - 1: {n}")
    return n


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ``[(p, e), ...]`` with ascending p.

    Plain trial division by 2, 3 and then 6k +- 1; deterministic, intended for
    inputs up to roughly 10**12.
    """
    n = _check_point(n)
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
        d += 6
    if n > 1:
        out.append((n, 1))
    return out


def big_omega(n: int) -> int:
    return sum(e for _, e in factorize(n))


def liouville_point(n: int) -> int:
    """lambda(n) = (-1)**Omega(n), by trial division."""
    return -1 if big_omega(n) & 1 else 1


def mobius_point(n: int) -> int:
    """mu(n) by trial division: 0 unless squarefree, else (-1)**omega(n)."""
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) & 1 else 1


# ---------------------------------------------------------------------------
# base primes


def linear_sieve(limit: int) -> tuple[list[int], bytearray]:
    """Euler's linear sieve on [0, limit].

    Returns the primes up to ``limit`` and the parity of Omega(n) for every
    n <= limit, propagated through smallest prime factors:
    Omega(i * p) = Omega(i) + 1 whenever p <= spf(i).
    """
    parity = bytearray(limit + 1)
    spf = [0] * (limit + 1)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
            parity[i] = 1
        si = spf[i]
        pi = parity[i] ^ 1
        for p in primes:
            if p > si or i * p > limit:
                break
            spf[i * p] = p
            parity[i * p] = pi
    return primes, parity


@lru_cache(maxsize=8)
def base_primes(limit: int) -> tuple[int, ...]:
    return tuple(linear_sieve(max(limit, 1))[0])


# ---------------------------------------------------------------------------
# segment kernels


def liouville_segment(start: int, stop: int, primes) -> np.ndarray:
    """Boolean mask over [start, stop): True where lambda(n) = +1."""
    size = stop - start
    rem = np.arange(start, stop, dtype=np.int64)
    odd = np.zeros(size, dtype=bool)
    top = stop - 1
    for p in primes:
        if p * p > top:
            break
        pk = p
        while pk <= top:
            first = (-start) % pk
            if first >= size:
                break
            odd[first::pk] ^= True
            rem[first::pk] //= p
            pk *= p
    odd ^= rem > 1
    return ~odd


def mobius_segment(start: int, stop: int, primes) -> np.ndarray:
    """int8 array of mu(n) over [start, stop)."""
    size = stop - start
    rem = np.arange(start, stop, dtype=np.int64)
    odd = np.zeros(size, dtype=bool)
    square = np.zeros(size, dtype=bool)
    top = stop - 1
    for p in primes:
        p2 = p * p
        if p2 > top:
            break
        first = (-start) % p
        if first >= size:
            continue
        odd[first::p] ^= True
        rem[first::p] //= p
        first = (-start) % p2
        square[first::p2] = True
    odd ^= rem > 1
    mu = np.where(odd, np.int8(-1), np.int8(1))
    mu[square] = 0
    return mu


def _segment_bounds(lo: int, hi: int, length: int) -> Iterator[tuple[int, int]]:
    s = lo
    while s <= hi:
        e = min(s + length, hi + 1)
        yield s, e
        s = e


def _validate_range(lo, hi) -> tuple[int, int]:
    lo, hi = _check_point(lo), _check_point(hi)
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    return lo, hi


def iter_segments(
    lo: int, hi: int, cfg: SieveConfig, kernel: Callable[[int, int, tuple], np.ndarray]
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(start, values)`` for consecutive segments of [lo, hi] in order.

    Segments are computed ``worker_count`` at a time on a thread pool; results
    are yielded in ascending order so consumers never see scheduling effects.
    """
    lo, hi = _validate_range(lo, hi)
    primes = base_primes(math.isqrt(hi))
    bounds = list(_segment_bounds(lo, hi, cfg.segment_length))
    if cfg.worker_count == 1 or len(bounds) == 1:
        for s, e in bounds:
            yield s, kernel(s, e, primes)
        return
    with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
        for i in range(0, len(bounds), cfg.worker_count):
            batch = bounds[i : i + cfg.worker_count]
            futures = [pool.submit(kernel, s, e, primes) for s, e in batch]
            for (s, _), fut in zip(batch, futures):
                yield s, fut.result()


def iter_liouville_segments(lo: int, hi: int, cfg: SieveConfig | None = None):
    return iter_segments(lo, hi, cfg or SieveConfig(), liouville_segment)


def iter_mobius_segments(lo: int, hi: int, cfg: SieveConfig | None = None):
    return iter_segments(lo, hi, cfg or SieveConfig(), mobius_segment)


# ---------------------------------------------------------------------------
# tables


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SignTable:
    """lambda(n) for n in [lo, hi], one bit per entry.

    Bit ``n - lo`` (LSB-first within bytes) is 1 when lambda(n) = +1, so a
    popcount over a bit range is the number of +1 values in it.
    """

    lo: int
    hi: int
    bits: np.ndarray

    def __post_init__(self):
        if self.lo < 1 or self.lo > self.hi:
            raise ValueError(f"invalid table range [{self.lo}, {self.hi}]")
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.size != (len(self) + 7) // 8:
            raise ValueError("bit buffer length does not match the range")
        object.__setattr__(self, "bits", _readonly(bits))

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __eq__(self, other):
        if not isinstance(other, SignTable):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi and np.array_equal(self.bits, other.bits)

    def __getitem__(self, n: int) -> int:
        self.require(n, n)
        i = n - self.lo
        return 1 if (int(self.bits[i >> 3]) >> (i & 7)) & 1 else -1

    def covers(self, a: int, b: int) -> bool:
        return self.lo <= a and b <= self.hi

    def require(self, a: int, b: int) -> None:
        if a > b:
            return
        if not self.covers(a, b):
            raise CoverageError(f"table covers [{self.lo}, {self.hi}], need [{a}, {b}]")

    @classmethod
    def from_mask(cls, lo: int, plus: np.ndarray) -> "SignTable":
        plus = np.asarray(plus, dtype=bool)
        return cls(lo, lo + plus.size - 1, np.packbits(plus, bitorder="little"))

    @classmethod
    def from_signs(cls, lo: int, signs) -> "SignTable":
        return cls.from_mask(lo, np.asarray(signs) > 0)

    def bit_array(self, a: int, b: int) -> np.ndarray:
        """uint8 array of (1 + lambda(n)) / 2 for n in [a, b]."""
        self.require(a, b)
        if a > b:
            return np.zeros(0, dtype=np.uint8)
        i, j = a - self.lo, b - self.lo
        chunk = np.unpackbits(self.bits[i >> 3 : (j >> 3) + 1], bitorder="little")
        return chunk[i & 7 : (i & 7) + (j - i + 1)]

    def signs(self, a: int, b: int) -> np.ndarray:
        """int8 array of lambda(n) for n in [a, b]."""
        return self.bit_array(a, b).astype(np.int8) * 2 - 1

    def words(self, a: int, length: int) -> np.ndarray:
        """The bits for n in [a, a + length) re-aligned to start at bit 0.

        Returned as little-endian uint64 words; bits past ``length`` are zero.
        """
        if length <= 0:
            return np.zeros(0, dtype=np.uint64)
        self.require(a, a + length - 1)
        byte0, shift = divmod(a - self.lo, 8)
        nwords = (length + 63) // 64
        raw = np.zeros((nwords + 1) * 8, dtype=np.uint8)
        chunk = self.bits[byte0 : byte0 + (shift + length + 7) // 8]
        raw[: chunk.size] = chunk
        w = raw.view("<u8")
        if shift:
            out = (w[:-1] >> np.uint64(shift)) | (w[1:] << np.uint64(64 - shift))
        else:
            out = w[:-1].copy()
        tail = length % 64
        if tail:
            out[-1] &= np.uint64((1 << tail) - 1)
        return out

    def popcount(self, a: int, b: int) -> int:
        """Number of n in [a, b] with lambda(n) = +1."""
        return popcount(self.words(a, b - a + 1))

    def with_flipped(self, n: int) -> "SignTable":
        """Copy with the sign at ``n`` inverted (fault injection)."""
        self.require(n, n)
        bits = self.bits.copy()
        i = n - self.lo
        bits[i >> 3] ^= np.uint8(1 << (i & 7))
        return SignTable(self.lo, self.hi, bits)

    # binary dump ---------------------------------------------------------

    def to_bytes(self) -> bytes:
        return _DUMP_HEADER.pack(DUMP_MAGIC, DUMP_VERSION, 0, self.lo, self.hi) + self.bits.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SignTable":
        if len(data) < _DUMP_HEADER.size:
            raise ValueError("truncated SignTable header")
        magic, version, _, lo, hi = _DUMP_HEADER.unpack_from(data)
        if magic != DUMP_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        if version != DUMP_VERSION:
            raise ValueError(f"unsupported SignTable dump version {version}")
        body = np.frombuffer(data, dtype=np.uint8, offset=_DUMP_HEADER.size).copy()
        return cls(lo, hi, body)

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "SignTable":
        return cls.from_bytes(Path(path).read_bytes())


_MU_DECODE = np.array([0, 1, -1, 0], dtype=np.int8)


@dataclass(frozen=True, eq=False)
class MobiusTable:
    """mu(n) for n in [lo, hi], 2 bits per entry (codes 0 -> 0, 1 -> +1, 2 -> -1)."""

    lo: int
    hi: int
    codes: np.ndarray

    def __post_init__(self):
        if self.lo < 1 or self.lo > self.hi:
            raise ValueError(f"invalid table range [{self.lo}, {self.hi}]")
        codes = np.ascontiguousarray(self.codes, dtype=np.uint8)
        if codes.size != (len(self) + 3) // 4:
            raise ValueError("code buffer length does not match the range")
        object.__setattr__(self, "codes", _readonly(codes))

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __eq__(self, other):
        if not isinstance(other, MobiusTable):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi and np.array_equal(self.codes, other.codes)

    def __getitem__(self, n: int) -> int:
        return int(self.values(n, n)[0])

    def covers(self, a: int, b: int) -> bool:
        return self.lo <= a and b <= self.hi

    def require(self, a: int, b: int) -> None:
        if a <= b and not self.covers(a, b):
            raise CoverageError(f"table covers [{self.lo}, {self.hi}], need [{a}, {b}]")

    @classmethod
    def from_values(cls, lo: int, values) -> "MobiusTable":
        values = np.asarray(values, dtype=np.int8)
        return cls(lo, lo + values.size - 1, _pack_mu(values))

    def values(self, a: int, b: int) -> np.ndarray:
        self.require(a, b)
        if a > b:
            return np.zeros(0, dtype=np.int8)
        i, j = a - self.lo, b - self.lo
        block = self.codes[i >> 2 : (j >> 2) + 1]
        unpacked = (block[:, None] >> np.array([0, 2, 4, 6], dtype=np.uint8)) & 3
        return _MU_DECODE[unpacked.ravel()][i & 3 : (i & 3) + (j - i + 1)]


def _pack_mu(values: np.ndarray) -> np.ndarray:
    codes = (values.astype(np.int16) % 3).astype(np.uint8)
    pad = (-codes.size) % 4
    if pad:
        codes = np.concatenate([codes, np.zeros(pad, dtype=np.uint8)])
    c = codes.reshape(-1, 4)
    return c[:, 0] | (c[:, 1] << 2) | (c[:, 2] << 4) | (c[:, 3] << 6)


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum(dtype=np.int64))


def _check_cap(nbytes: int, cfg: SieveConfig) -> None:
    if nbytes > cfg.memory_cap:
        raise MemoryCapError(
            f"table needs {nbytes} bytes, above the cap of {cfg.memory_cap} "
            f"(raise it via {MEMORY_CAP_ENV} or stream the range)"
        )


def sieve_liouville(lo: int, hi: int, cfg: SieveConfig | None = None) -> SignTable:
    cfg = cfg or SieveConfig()
    lo, hi = _validate_range(lo, hi)
    _check_cap((hi - lo + 8) // 8, cfg)
    parts = []
    carry = np.zeros(0, dtype=bool)
    for _, plus in iter_liouville_segments(lo, hi, cfg):
        if carry.size:
            plus = np.concatenate([carry, plus])
        cut = plus.size - plus.size % 8
        parts.append(np.packbits(plus[:cut], bitorder="little"))
        carry = plus[cut:]
    if carry.size:
        parts.append(np.packbits(carry, bitorder="little"))
    return SignTable(lo, hi, np.concatenate(parts))


def sieve_mobius(lo: int, hi: int, cfg: SieveConfig | None = None) -> MobiusTable:
    cfg = cfg or SieveConfig()
    lo, hi = _validate_range(lo, hi)
    _check_cap((hi - lo + 4) // 4, cfg)
    parts = []
    carry = np.zeros(0, dtype=np.int8)
    for _, mu in iter_mobius_segments(lo, hi, cfg):
        if carry.size:
            mu = np.concatenate([carry, mu])
        cut = mu.size - mu.size % 4
        parts.append(_pack_mu(mu[:cut]))
        carry = mu[cut:]
    if carry.size:
        parts.append(_pack_mu(carry))
    return MobiusTable(lo, hi, np.concatenate(parts))
