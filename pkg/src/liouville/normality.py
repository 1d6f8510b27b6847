"""Digit streams driven by lambda and the constant beta = sum (1 + lambda(n)) / 2**n.

With b_n = (1 + lambda(n)) / 2 the constant is sum b_n 2**-(n-1): the integer
part is b_1 = 1 and binary fractional digit m is b_{m+1}.  Digits in base 2**k
are read high bit first.  Two windowings are offered:

overlapping  digit n is built from b_n .. b_{n+k-1}, n = 1, 2, ...
paired       digit m is built from b_{(m-1)k+2} .. b_{mk+1}; these are the true
             radix-2**k fractional digits of beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import CoverageError, SignTable

MODES = ("overlapping", "paired")
_START = {"overlapping": 1, "paired": 2}
MAX_K = 32

# 95% quantiles of the chi-square distribution, dof 1..31
CHI2_95 = {
    1: 3.841, 2: 5.991, 3: 7.815, 4: 9.488, 5: 11.070, 6: 12.592, 7: 14.067,
    8: 15.507, 9: 16.919, 10: 18.307, 11: 19.675, 12: 21.026, 13: 22.362,
    14: 23.685, 15: 24.996, 16: 26.296, 17: 27.587, 18: 28.869, 19: 30.144,
    20: 31.410, 21: 32.671, 22: 33.924, 23: 35.172, 24: 36.415, 25: 37.652,
    26: 38.885, 27: 40.113, 28: 41.337, 29: 42.557, 30: 43.773, 31: 44.985,
}  # fmt: skip


@dataclass(frozen=True, eq=False)
class DigitStream:
    base: int
    mode: str
    start_n: int
    digits: np.ndarray

    @property
    def k(self) -> int:
        return self.base.bit_length() - 1

    def __len__(self) -> int:
        return int(self.digits.size)

    def consumed(self, m: int) -> range:
        """lambda indices read by digit m (1-based)."""
        k = self.k
        if self.mode == "paired":
            first = (m - 1) * k + self.start_n
        else:
            first = m - 1 + self.start_n
        return range(first, first + k)

    def to_raw_bytes(self) -> bytes:
        """One digit per byte."""
        if self.base > 256:
            raise ValueError("raw byte export needs base <= 256")
        return self.digits.astype(np.uint8).tobytes()

    def to_packed_bits(self) -> bytes:
        """Base-2 digits packed eight per byte, first digit in the high bit."""
        if self.base != 2:
            raise ValueError("packed-bit export is only defined for base 2")
        return np.packbits(self.digits.astype(np.uint8), bitorder="big").tobytes()


@dataclass(frozen=True)
class PrecisionSpec:
    decimal_digits: int
    guard_bits: int = 64

    def __post_init__(self):
        if self.decimal_digits < 1:
            raise ValueError("decimal_digits must be at least 1")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be non-negative")

    @property
    def bits_needed(self) -> int:
        # ceil(D log2 10); 10**D is never a power of two for D >= 1
        return (10**self.decimal_digits).bit_length() + self.guard_bits


@dataclass(frozen=True)
class FrequencyReport:
    base: int
    sample_size: int
    counts: tuple[int, ...]
    chi_square: float
    dof: int
    chi_square_exact: Fraction

    def as_dict(self) -> dict:
        return {
            "base": self.base,
            "sample_size": self.sample_size,
            "counts": list(self.counts),
            "chi_square": self.chi_square,
            "dof": self.dof,
        }


def _check_count(count) -> int:
    count = int(count)
    if count < 1:
        raise ValueError(f"digit count must be at least 1, got {count}")
    return count


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def _digit_dtype(k: int):
    return np.uint8 if k <= 8 else np.uint16 if k <= 16 else np.uint32


def bit_stream(table: SignTable, n_max: int) -> DigitStream:
    """b_n = (1 + lambda(n)) / 2 for n = 1 .. n_max."""
    n_max = _check_count(n_max)
    return DigitStream(2, "overlapping", 1, table.bit_array(1, n_max).copy())


def base4_digits(table: SignTable, mode: str, count: int) -> DigitStream:
    _check_mode(mode)
    count = _check_count(count)
    if mode == "overlapping":
        b = table.bit_array(1, count + 1)
        digits = 2 * b[:-1] + b[1:]
    else:
        b = table.bit_array(2, 2 * count + 1)
        digits = 2 * b[0::2] + b[1::2]
    return DigitStream(4, mode, _START[mode], digits.astype(np.uint8))


def base2k_digits(table: SignTable, k: int, mode: str, count: int) -> DigitStream:
    """Digits in base 2**k, high bit first, windowed per ``mode``."""
    if not 1 <= int(k) <= MAX_K:
        raise ValueError(f"k must be in [1, {MAX_K}], got {k}")
    k = int(k)
    _check_mode(mode)
    count = _check_count(count)
    start = _START[mode]
    if mode == "overlapping":
        b = table.bit_array(start, start + count + k - 2).astype(np.uint64)
        planes = [b[i : i + count] for i in range(k)]
    else:
        b = table.bit_array(start, start + count * k - 1).astype(np.uint64).reshape(count, k)
        planes = [b[:, i] for i in range(k)]
    acc = np.zeros(count, dtype=np.uint64)
    for plane in planes:
        acc = (acc << np.uint64(1)) | plane
    return DigitStream(1 << k, mode, start, acc.astype(_digit_dtype(k)))


def evaluate_constant(table: SignTable, spec: PrecisionSpec) -> str:
    """beta truncated to ``spec.decimal_digits`` places after the point.

    beta * 2**(N-1) lies in [I, I + 1) where I is the N-bit integer b_1 .. b_N,
    so truncation is certain when both ends give the same digits; otherwise
    more guard bits are required.
    """
    D = spec.decimal_digits
    N = spec.bits_needed
    if not table.covers(1, N):
        raise CoverageError(f"{D} digits with {spec.guard_bits} guard bits need lambda on [1, {N}]")
    bits = table.bit_array(1, N)
    I = int.from_bytes(np.packbits(bits, bitorder="big").tobytes(), "big") >> ((-N) % 8)
    shift = N - 1
    mask = (1 << shift) - 1
    frac = I & mask
    scale = 10**D
    if (frac * scale) >> shift != ((frac + 1) * scale - 1) >> shift:
        raise ValueError(f"truncation at {D} digits is not settled by {N} bits; raise guard_bits")
    return f"{I >> shift}.{_fraction_digits(frac, shift, D)}"


def _fraction_digits(frac: int, shift: int, D: int, chunk: int = 1000) -> str:
    # multiply by 10**c and peel off the integer part, c digits at a time
    mask = (1 << shift) - 1
    out = []
    left = D
    while left:
        c = min(chunk, left)
        frac *= 10**c
        out.append(str(frac >> shift).zfill(c))
        frac &= mask
        left -= c
    return "".join(out)


def chi_square_statistic(counts) -> Fraction:
    """Pearson statistic against the uniform distribution, as an exact rational."""
    counts = [int(c) for c in counts]
    n, b = sum(counts), len(counts)
    if n == 0:
        raise ValueError("empty sample")
    return Fraction(sum((b * c - n) ** 2 for c in counts), b * n)


def digit_frequencies(stream: DigitStream) -> FrequencyReport:
    n = len(stream)
    if n == 0:
        raise ValueError("empty digit stream")
    if n < stream.base:
        raise ValueError(f"sample of {n} digits is smaller than the base {stream.base}")
    counts = tuple(int(c) for c in np.bincount(stream.digits, minlength=stream.base))
    exact = chi_square_statistic(counts)
    return FrequencyReport(stream.base, n, counts, float(exact), stream.base - 1, exact)


def _k_of_base(base: int) -> int:
    base = int(base)
    if base < 2 or base & (base - 1):
        raise ValueError(f"base must be a power of two >= 2, got {base}")
    return base.bit_length() - 1


def normality_report(table: SignTable, bases, modes, x: int) -> dict:
    """Digit frequencies and a 95% chi-square verdict per (base, mode).

    ``x`` digits are drawn for each entry.  ``passed`` is None when the degrees
    of freedom exceed the embedded critical-value table.
    """
    x = _check_count(x)
    modes = [_check_mode(m) for m in modes]
    entries = []
    for base in bases:
        k = _k_of_base(base)
        for mode in modes:
            if k == 1 and mode == "overlapping":
                stream = bit_stream(table, x)
            elif k == 2:
                stream = base4_digits(table, mode, x)
            else:
                stream = base2k_digits(table, k, mode, x)
            rep = digit_frequencies(stream)
            crit = CHI2_95.get(rep.dof)
            entry = {"mode": mode, "start_n": stream.start_n, **rep.as_dict()}
            entry["critical_95"] = crit
            entry["passed"] = None if crit is None else rep.chi_square < crit
            entries.append(entry)
    return {"x": x, "entries": entries}


def digits_needed(base: int, mode: str, x: int) -> int:
    """Largest lambda index consumed by ``x`` digits."""
    k = _k_of_base(base)
    return x + k - 1 if _check_mode(mode) == "overlapping" else x * k + 1
