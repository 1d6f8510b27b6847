"""Single, double and k-sign pattern counts of lambda over [1, x].

All counting runs on shifted bit-planes of a SignTable: AND the aligned
planes, popcount the 64-bit words.  For a double pattern at shift t the four
counts follow from popcount(A), popcount(B), popcount(A & B) and the number
of counted n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .arithmetic import SignTable, popcount

PATTERN_KEYS = ("++", "+-", "-+", "--")
MAX_K = 32
# bits processed per block; keeps the shifted copies bounded for large x
BLOCK_BITS = 1 << 24


def _check_x(x) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        raise TypeError(f"x must be an integer, got {type(x).__name__}")
    x = int(x)
    if x < 1:
        raise ValueError(f"x must be at least 1, got {x}")
    return x


@dataclass(frozen=True)
class PatternSpec:
    """Offsets a_0 < ... < a_{k-1} and the target signs for each."""

    offsets: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        offsets = tuple(int(a) for a in self.offsets)
        signs = tuple(int(e) for e in self.signs)
        k = len(offsets)
        if not 1 <= k <= MAX_K:
            raise ValueError(f"pattern length must be in [1, {MAX_K}], got {k}")
        if len(signs) != k:
            raise ValueError("offsets and signs differ in length")
        if offsets[0] < 0 or any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ValueError(f"offsets must be non-negative and strictly increasing: {offsets}")
        if any(e not in (-1, 1) for e in signs):
            raise ValueError(f"signs must be +1 or -1: {signs}")
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "signs", signs)

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def label(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.signs)

    @classmethod
    def parse(cls, offsets: str, signs: str) -> "PatternSpec":
        """Build from text such as ``"0,1,2"`` and ``"+-+"`` (or ``"1,-1,1"``)."""
        offs = tuple(int(a) for a in offsets.split(",") if a.strip())
        signs = signs.strip()
        if "," in signs or "1" in signs:
            sg = tuple(int(e) for e in signs.split(",") if e.strip())
        else:
            sg = tuple(1 if c == "+" else -1 if c == "-" else _bad_sign(c) for c in signs)
        return cls(offs, sg)


def _bad_sign(c):
    raise ValueError(f"sign characters must be '+' or '-', got {c!r}")


def sign_vectors(k: int):
    """All 2**k sign vectors, ordered with +1 before -1 in each position."""
    return itertools.product((1, -1), repeat=k)


@dataclass(frozen=True)
class PatternCounts:
    x: int
    t: int
    counts: dict = field(default_factory=dict)
    start: int = 1

    @property
    def counted(self) -> int:
        """Number of n in the counted range [start, x]."""
        return max(0, self.x - self.start + 1)

    @property
    def autocorrelation(self) -> int:
        c = self.counts
        return c["++"] + c["--"] - c["+-"] - c["-+"]


def count_single(table: SignTable, x: int) -> tuple[int, int]:
    """(#{n <= x : lambda(n) = +1}, #{n <= x : lambda(n) = -1})."""
    x = _check_x(x)
    table.require(1, x)
    plus = 0
    for a in range(1, x + 1, BLOCK_BITS):
        plus += table.popcount(a, min(a + BLOCK_BITS - 1, x))
    return plus, x - plus


def double_start(t: int) -> int:
    """First counted n for shift t; keeps n + t >= 1."""
    return max(1, 1 - t)


def count_double(table: SignTable, t: int, x: int) -> PatternCounts:
    """Counts of the sign pairs (lambda(n), lambda(n + t)) for start <= n <= x."""
    x = _check_x(x)
    t = int(t)
    if t == 0:
        raise ValueError("t must be nonzero; use count_single for t = 0")
    n0 = double_start(t)
    size = max(0, x - n0 + 1)
    if size:
        table.require(n0, x)
        table.require(n0 + t, x + t)
    pa = pb = pab = 0
    for off in range(0, size, BLOCK_BITS):
        length = min(BLOCK_BITS, size - off)
        a = table.words(n0 + off, length)
        b = table.words(n0 + t + off, length)
        pa += popcount(a)
        pb += popcount(b)
        pab += popcount(a & b)
    counts = {"++": pab, "+-": pa - pab, "-+": pb - pab, "--": size - pa - pb + pab}
    return PatternCounts(x=x, t=t, counts=counts, start=n0)


def count_k_pattern(table: SignTable, spec: PatternSpec, x: int) -> int:
    """#{1 <= n <= x : lambda(n + a_i) = eps_i for every i}."""
    x = _check_x(x)
    table.require(1 + spec.offsets[0], x + spec.offsets[-1])
    total = 0
    for off in range(0, x, BLOCK_BITS):
        length = min(BLOCK_BITS, x - off)
        acc = None
        for a, eps in zip(spec.offsets, spec.signs):
            w = table.words(1 + a + off, length)
            if eps < 0:
                w = ~w
            acc = w if acc is None else acc & w
        tail = length % 64
        if tail:
            acc[-1] &= np.uint64((1 << tail) - 1)
        total += popcount(acc)
    return total


def autocorrelation(table: SignTable, t: int, x: int) -> int:
    """sum of lambda(n) * lambda(n + t) over the counted n <= x."""
    t = int(t)
    if t == 0:
        x = _check_x(x)
        table.require(1, x)
        return x
    return count_double(table, t, x).autocorrelation


def render_ratio(num: int, den: int, places: int) -> Decimal:
    """num / den rounded half-even to ``places`` decimals, computed exactly."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    q, r = divmod(num * 10**places, den)
    if 2 * r > den or (2 * r == den and q & 1):
        q += 1
    return Decimal(q).scaleb(-places)


def densities(counts: PatternCounts, places: int = 6) -> dict[str, Decimal]:
    if counts.x < 1:
        raise ValueError("x must be at least 1")
    return {k: render_ratio(v, counts.x, places) for k, v in counts.counts.items()}


def counts_record(counts: PatternCounts, places: int = 6) -> dict:
    """JSON-ready record for a double-sign count."""
    return {
        "x": counts.x,
        "t": counts.t,
        "start": counts.start,
        "counts": {k: counts.counts[k] for k in PATTERN_KEYS},
        "autocorrelation": counts.autocorrelation,
        "densities": {k: str(v) for k, v in densities(counts, places).items()},
    }


def counts_csv_rows(counts: PatternCounts, places: int = 6) -> list[list]:
    dens = densities(counts, places)
    rows = [["pattern", "x", "t", "count", "density"]]
    for k in PATTERN_KEYS:
        rows.append([k, counts.x, counts.t, counts.counts[k], str(dens[k])])
    return rows
