"""Summatory, logarithmic and twisted sums of lambda, plus reference curves.

These are empirical diagnostics: the sums are computed exactly (integer sums)
or with compensated double-precision accumulation (1/n-weighted sums), and the
reference curves are emitted next to them for comparison.  Nothing here asserts
an asymptotic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arithmetic import MobiusTable, SieveConfig, SignTable, iter_liouville_segments

# zeta(1/2); cross-checked against mpmath in the test-suite
ZETA_HALF = -1.4603545088095868

REFERENCE_KINDS = ("zeta-half-sqrt", "exp-log-error", "loglog-half", "lil-normalizer")
DEFAULT_C = 1.0
DEFAULT_EPS = 0.05

BLOCK = 1 << 16
# rationals with denominators up to this use exact residues mod the denominator
RATIONAL_DEN_LIMIT = 1 << 20


@dataclass(frozen=True)
class SumSeries:
    name: str
    checkpoints: tuple[int, ...]
    values: tuple

    def __post_init__(self):
        if len(self.checkpoints) != len(self.values):
            raise ValueError("checkpoints and values differ in length")
        _check_increasing(self.checkpoints)

    def as_dict(self) -> dict:
        return dict(zip(self.checkpoints, self.values))


def _check_increasing(cps) -> tuple[int, ...]:
    cps = tuple(int(c) for c in cps)
    if not cps:
        raise ValueError("at least one checkpoint is required")
    if cps[0] < 1:
        raise ValueError("checkpoints must be positive")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError(f"checkpoints must be strictly increasing: {cps}")
    return cps


def _blocks(a: int, b: int, size: int | None = None):
    size = size or BLOCK
    for s in range(a, b + 1, size):
        yield s, min(s + size - 1, b)


def summatory_liouville(table: SignTable, checkpoints) -> SumSeries:
    """L(x) = sum_{n <= x} lambda(n) at each checkpoint, one forward pass."""
    cps = _check_increasing(checkpoints)
    table.require(1, cps[-1])
    values, plus, prev = [], 0, 0
    for x in cps:
        for s, e in _blocks(prev + 1, x, 1 << 24):
            plus += table.popcount(s, e)
        values.append(2 * plus - x)
        prev = x
    return SumSeries("L", cps, tuple(values))


def mertens(table: MobiusTable, checkpoints) -> SumSeries:
    """M(x) = sum_{n <= x} mu(n) at each checkpoint."""
    cps = _check_increasing(checkpoints)
    table.require(1, cps[-1])
    values, total, prev = [], 0, 0
    for x in cps:
        for s, e in _blocks(prev + 1, x, 1 << 22):
            total += int(table.values(s, e).sum(dtype=np.int64))
        values.append(total)
        prev = x
    return SumSeries("M", cps, tuple(values))


class CompensatedSum:
    """Running float sum carried as an unevaluated pair (hi, lo).

    Each block is folded in with math.fsum, so ``hi`` is the correctly rounded
    value of hi + lo + block and ``lo`` the correctly rounded remainder.
    """

    def __init__(self):
        self.hi = 0.0
        self.lo = 0.0

    def add(self, terms) -> None:
        terms = terms.tolist() if isinstance(terms, np.ndarray) else list(terms)
        head = (self.hi, self.lo)
        new = math.fsum(itertools.chain(head, terms))
        self.lo = math.fsum(itertools.chain(head, terms, (-new,)))
        self.hi = new

    @property
    def value(self) -> float:
        return self.hi


def log_average_liouville(table: SignTable, checkpoints) -> SumSeries:
    """sum_{n <= x} lambda(n) / n, compensated, ascending n."""
    cps = _check_increasing(checkpoints)
    table.require(1, cps[-1])
    acc, values, prev = CompensatedSum(), [], 0
    for x in cps:
        for s, e in _blocks(prev + 1, x):
            n = np.arange(s, e + 1, dtype=np.float64)
            acc.add(table.signs(s, e) / n)
        values.append(acc.value)
        prev = x
    return SumSeries("log_avg", cps, tuple(values))


def autocorr_log_average(table: SignTable, t: int, checkpoints) -> SumSeries:
    """sum_{n <= x} lambda(n) lambda(n + t) / n over n >= max(1, 1 - t)."""
    cps = _check_increasing(checkpoints)
    t = int(t)
    n0 = max(1, 1 - t)
    if cps[-1] >= n0:
        table.require(n0, cps[-1])
        table.require(n0 + t, cps[-1] + t)
    acc, values, prev = CompensatedSum(), [], n0 - 1
    for x in cps:
        for s, e in _blocks(prev + 1, x):
            n = np.arange(s, e + 1, dtype=np.float64)
            prod = table.signs(s, e) * table.signs(s + t, e + t)
            acc.add(prod / n)
        values.append(acc.value)
        prev = max(prev, x)
    return SumSeries(f"autocorr_log_avg(t={t})", cps, tuple(values))


# ---------------------------------------------------------------------------
# twisted exponential sums


@lru_cache(maxsize=32)
def _roots_of_unity(den: int) -> np.ndarray:
    z = np.exp(2j * np.pi * np.arange(den) / den)
    for q, val in enumerate((1, 1j, -1, -1j)):
        if (q * den) % 4 == 0:
            z[q * den // 4] = val
    z.setflags(write=False)
    return z


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, float) and not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    return Fraction(alpha)


def twisted_sum(table: SignTable, alpha, x: int) -> complex:
    """S(alpha, x) = sum_{n <= x} lambda(n) exp(2 pi i alpha n).

    ``alpha`` may be a float or a Fraction.  Rationals with small denominators
    use exact residues (alpha * n mod 1) and a root-of-unity table; anything
    else re-anchors the phase exactly every 2**16 terms and fills in the block
    from a precomputed phase ramp.
    """
    a = _as_fraction(alpha)
    x = int(x)
    if x < 1:
        raise ValueError("x must be at least 1")
    table.require(1, x)
    a -= math.floor(a)
    if a.denominator <= RATIONAL_DEN_LIMIT:
        return _twisted_rational(table, a.numerator, a.denominator, x)
    return _twisted_general(table, a, x)


def _twisted_rational(table, num: int, den: int, x: int) -> complex:
    roots = _roots_of_unity(den)
    total = 0j
    for s, e in _blocks(1, x):
        n = np.arange(s, e + 1, dtype=np.int64)
        r = (num * (n % den)) % den
        total += complex((roots[r] * table.signs(s, e)).sum())
    return total


def _twisted_general(table, a: Fraction, x: int) -> complex:
    ramp = np.exp(2j * np.pi * np.modf(float(a) * np.arange(BLOCK))[0])
    total = 0j
    for s, e in _blocks(1, x):
        anchor = complex(np.exp(2j * np.pi * float((a * s) % 1)))
        total += anchor * complex((ramp[: e - s + 1] * table.signs(s, e)).sum())
    return total


def twisted_sup(table: SignTable, x: int, grid_size: int) -> tuple[Fraction, float]:
    """Grid approximation of sup_alpha |S(alpha, x)|.

    Scans alpha = j / grid_size for 0 <= j < grid_size and returns the first
    maximizer (ties go to the smaller alpha) with its magnitude.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    best_alpha, best = Fraction(0), -1.0
    for j in range(grid_size):
        alpha = Fraction(j, grid_size)
        mag = abs(twisted_sum(table, alpha, x))
        if mag > best:
            best_alpha, best = alpha, mag
    return best_alpha, best


# ---------------------------------------------------------------------------
# reference curves


def reference_curve(kind: str, x: float, c: float = DEFAULT_C, eps: float = DEFAULT_EPS) -> float:
    """Evaluate one of the comparison curves at x.

    zeta-half-sqrt   zeta(1/2) * sqrt(x)
    exp-log-error    x * exp(-c * sqrt(log x))
    loglog-half      x / (log log x)**(1/2 - eps)
    lil-normalizer   sqrt(2 x log log x)
    """
    if kind not in REFERENCE_KINDS:
        raise ValueError(f"unknown reference curve {kind!r}; expected one of {REFERENCE_KINDS}")
    if c <= 0:
        raise ValueError("c must be positive")
    if not 0 <= eps < 0.5:
        raise ValueError("eps must lie in [0, 1/2)")
    x = float(x)
    if x < 1:
        raise ValueError("x must be at least 1")
    if kind == "zeta-half-sqrt":
        return ZETA_HALF * math.sqrt(x)
    if kind == "exp-log-error":
        return x * math.exp(-c * math.sqrt(math.log(x)))
    loglog = math.log(math.log(x)) if x > 1 else -math.inf
    if kind == "lil-normalizer":
        if loglog < 0:
            raise ValueError(f"log log x must be non-negative, x={x}")
        return math.sqrt(2 * x * loglog)
    if loglog <= 0:
        raise ValueError(f"log log x must be positive, x={x}")
    return x / loglog ** (0.5 - eps)


def diagnostics(
    table: SignTable,
    mtable: MobiusTable,
    checkpoints,
    c: float = DEFAULT_C,
    eps: float = DEFAULT_EPS,
) -> list[dict]:
    """Per-checkpoint L(x), M(x), the reference curves and normalized ratios.

    ``bounded`` records whether |L(x)| <= x exp(-c sqrt(log x)); it is data,
    not a verdict.
    """
    cps = _check_increasing(checkpoints)
    L = summatory_liouville(table, cps).values
    M = mertens(mtable, cps).values
    logavg = log_average_liouville(table, cps).values
    rows = []
    for x, lx, mx, la in zip(cps, L, M, logavg):
        row = {"x": x, "L": lx, "M": mx, "log_avg": la}
        for kind in REFERENCE_KINDS:
            try:
                row[kind] = reference_curve(kind, x, c, eps)
            except ValueError:
                row[kind] = None
        err = row["exp-log-error"]
        row["L_over_exp_log_error"] = abs(lx) / err
        row["bounded"] = abs(lx) <= err
        row["L_over_sqrt_x"] = lx / math.sqrt(x)
        row["M_over_sqrt_x"] = mx / math.sqrt(x)
        lil = row["lil-normalizer"]
        row["L_over_lil"] = lx / lil if lil else None
        rows.append(row)
    return rows


def normalized_extremes(table: SignTable, mtable: MobiusTable, x: int, n_min: int = 16) -> dict:
    """Running min/max over n_min <= n <= x of L(n)/sqrt(2n log log n) and M(n)/sqrt(n)."""
    x = int(x)
    table.require(1, x)
    mtable.require(1, x)
    out = {}
    for name, values_of, norm in (
        ("L_over_lil", lambda s, e: table.signs(s, e), lambda n: np.sqrt(2 * n * np.log(np.log(n)))),
        ("M_over_sqrt", lambda s, e: mtable.values(s, e), np.sqrt),
    ):
        run, lo, hi = 0, (math.inf, 0), (-math.inf, 0)
        for s, e in _blocks(1, x, 1 << 20):
            cum = np.cumsum(values_of(s, e), dtype=np.int64) + run
            run = int(cum[-1])
            first = max(s, n_min)
            if first > e:
                continue
            n = np.arange(first, e + 1, dtype=np.float64)
            ratio = cum[first - s :] / norm(n)
            i, j = int(np.argmin(ratio)), int(np.argmax(ratio))
            if ratio[i] < lo[0]:
                lo = (float(ratio[i]), first + i)
            if ratio[j] > hi[0]:
                hi = (float(ratio[j]), first + j)
        out[name] = {"min": lo[0], "argmin": lo[1], "max": hi[0], "argmax": hi[1]}
    return out


def first_positive_summatory(hi: int, cfg: SieveConfig | None = None, start: int = 2) -> int | None:
    """Smallest n in [start, hi] with L(n) > 0, streamed segment by segment.

    L(n) <= 0 for 2 <= n < 906150257, so the full search needs about 10**9
    values; the table is never held in memory.
    """
    running = 0
    for s, plus in iter_liouville_segments(1, hi, cfg):
        cum = np.cumsum(plus.astype(np.int64) * 2 - 1) + running
        running = int(cum[-1])
        first = max(s, start)
        if first > s + plus.size - 1:
            continue
        hits = np.flatnonzero(cum[first - s :] > 0)
        if hits.size:
            return first + int(hits[0])
    return None
