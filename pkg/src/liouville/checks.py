"""Brute-force cross-checks behind ``liouville selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracles
from .arithmetic import SieveConfig, SignTable, sieve_liouville, sieve_mobius
from .averages import summatory_liouville
from .normality import PrecisionSpec, base4_digits, digit_frequencies, evaluate_constant
from .patterns import (
    PATTERN_KEYS,
    PatternSpec,
    autocorrelation,
    count_double,
    count_k_pattern,
    count_single,
    sign_vectors,
)

SCAN_LIMIT = 10_000
PATTERN_LIMIT = 1_000
BETA_38 = "1.16232463762392978595979733583622409170"

K_OFFSETS = [(0,), (0, 1), (0, 2), (0, 1, 2), (0, 1, 3), (0, 2, 5), (0, 1, 2, 3), (1, 2, 4, 7)]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _sieve_vs_point(table: SignTable, lam) -> CheckResult:
    got = table.signs(1, SCAN_LIMIT)
    bad = np.flatnonzero(got != np.asarray(lam[1 : SCAN_LIMIT + 1]))
    detail = "" if not bad.size else f"{bad.size} mismatches, first at n={int(bad[0]) + 1}"
    return CheckResult("sieve-vs-point-liouville", not bad.size, detail)


def _mobius_vs_point() -> CheckResult:
    got = sieve_mobius(1, SCAN_LIMIT, SieveConfig(segment_length=999)).values(1, SCAN_LIMIT)
    want = np.asarray(oracles.point_mobius_list(SCAN_LIMIT)[1:])
    bad = np.flatnonzero(got != want)
    return CheckResult("sieve-vs-point-mobius", not bad.size, f"{bad.size} mismatches" if bad.size else "")


def _segmentation_invariance(table: SignTable) -> CheckResult:
    ok = True
    for seg in (2, 97, 4096):
        for workers in (1, 4):
            other = sieve_liouville(table.lo, table.hi, SieveConfig(segment_length=seg, worker_count=workers))
            ok &= other == table
    return CheckResult("segmentation-invariance", ok)


def _double_vs_characteristic(table: SignTable, lam) -> CheckResult:
    for t in (1, 2, 3):
        running = dict.fromkeys(PATTERN_KEYS, 0)
        signs = {"++": (1, 1), "+-": (1, -1), "-+": (-1, 1), "--": (-1, -1)}
        for x in range(1, PATTERN_LIMIT + 1):
            for key, (e0, e1) in signs.items():
                running[key] += (1 + e0 * lam[x]) * (1 + e1 * lam[x + t]) // 4
            got = count_double(table, t, x).counts
            if got != running:
                return CheckResult("double-counts-vs-characteristic", False, f"t={t} x={x}")
    return CheckResult("double-counts-vs-characteristic", True, f"x<={PATTERN_LIMIT}, t in 1..3")


def _k_vs_characteristic(table: SignTable, lam) -> CheckResult:
    checked = 0
    for offsets in K_OFFSETS:
        for signs in sign_vectors(len(offsets)):
            for x in (1, 37, PATTERN_LIMIT):
                want = oracles.characteristic_count(lam, offsets, signs, 1, x)
                if count_k_pattern(table, PatternSpec(offsets, signs), x) != want:
                    return CheckResult("k-patterns-vs-characteristic", False, f"{offsets} {signs} x={x}")
                checked += 1
    return CheckResult("k-patterns-vs-characteristic", True, f"{checked} cases")


def _four_sum_identities(table: SignTable) -> CheckResult:
    for x in (100, 1000, SCAN_LIMIT):
        plus, minus = count_single(table, x)
        if plus - minus != summatory_liouville(table, [x]).values[0] or autocorrelation(table, 0, x) != x:
            return CheckResult("counting-identities", False, f"single x={x}")
        for t in (1, 2, 3):
            pc = count_double(table, t, x)
            c = pc.counts
            C = pc.counted
            s0 = int(table.signs(1, x).sum(dtype=np.int64))
            st = int(table.signs(1 + t, x + t).sum(dtype=np.int64))
            a = autocorrelation(table, t, x)
            ok = (
                sum(c.values()) == C
                and a == c["++"] + c["--"] - c["+-"] - c["-+"]
                and 4 * c["++"] == C + s0 + st + a
                and 4 * c["+-"] == C + s0 - st - a
                and 4 * c["-+"] == C - s0 + st - a
                and 4 * c["--"] == C - s0 - st + a
            )
            if not ok:
                return CheckResult("counting-identities", False, f"x={x} t={t}")
    return CheckResult("counting-identities", True)


def _complete_multiplicativity(table: SignTable) -> CheckResult:
    for m in range(1, 101):
        for n in range(1, 101):
            if table[m * n] != table[m] * table[n]:
                return CheckResult("complete-multiplicativity", False, f"m={m} n={n}")
    return CheckResult("complete-multiplicativity", True, "m, n <= 100")


def _constant(table: SignTable) -> CheckResult:
    got = evaluate_constant(table, PrecisionSpec(38))
    return CheckResult("constant-38-digits", got == BETA_38, got)


def _digits_vs_patterns(table: SignTable) -> CheckResult:
    x = PATTERN_LIMIT
    freq = digit_frequencies(base4_digits(table, "overlapping", x)).counts
    c = count_double(table, 1, x).counts
    ok = freq == (c["--"], c["-+"], c["+-"], c["++"])
    paired = base4_digits(table, "paired", x).digits
    bits = table.bit_array(2, 2 * x + 1)
    ok &= bool(np.array_equal(np.stack([paired >> 1, paired & 1], axis=1).ravel(), bits))
    return CheckResult("base4-digits-vs-patterns", ok)


def run_selftest(inject_fault: bool = False) -> list[CheckResult]:
    """Run every check; ``inject_fault`` corrupts one sign of the shared table."""
    table = sieve_liouville(1, 2 * SCAN_LIMIT + 10)
    if inject_fault:
        table = table.with_flipped(997)
    lam = oracles.point_liouville_list(SCAN_LIMIT + 10)
    steps: list[Callable[[], CheckResult]] = [
        lambda: _sieve_vs_point(table, lam),
        _mobius_vs_point,
        lambda: _segmentation_invariance(sieve_liouville(1, 2 * SCAN_LIMIT + 10)),
        lambda: _double_vs_characteristic(table, lam),
        lambda: _k_vs_characteristic(table, lam),
        lambda: _four_sum_identities(table),
        lambda: _complete_multiplicativity(table),
        lambda: _constant(table),
        lambda: _digits_vs_patterns(table),
    ]
    return [step() for step in steps]
