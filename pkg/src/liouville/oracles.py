"""Slow reference computations used to cross-check the fast paths.

Nothing here touches the sieve or the bit-plane counters: lambda comes from
trial division, and pattern counts are sums of products of (1 + eps*lambda)/2.
"""

from __future__ import annotations

from fractions import Fraction

from .arithmetic import liouville_point, mobius_point


def point_liouville_list(n_max: int) -> list[int]:
    """[0, lambda(1), ..., lambda(n_max)] by trial division."""
    return [0] + [liouville_point(n) for n in range(1, n_max + 1)]


def point_mobius_list(n_max: int) -> list[int]:
    return [0] + [mobius_point(n) for n in range(1, n_max + 1)]


def characteristic_count(lam, offsets, signs, start: int, x: int) -> int:
    """sum over start <= n <= x of prod_i (1 + eps_i * lambda(n + a_i)) / 2."""
    k = len(offsets)
    total = 0
    for n in range(start, x + 1):
        prod = 1
        for a, eps in zip(offsets, signs):
            prod *= 1 + eps * lam[n + a]
        total += prod
    assert total % (1 << k) == 0
    return total >> k


def characteristic_double(lam, t: int, x: int) -> dict[str, int]:
    """The four double-sign counts for shift t > 0, from the product formula."""
    out = {}
    for key, (e0, e1) in {"++": (1, 1), "+-": (1, -1), "-+": (-1, 1), "--": (-1, -1)}.items():
        out[key] = characteristic_count(lam, (0, t), (e0, e1), 1, x)
    return out


def exact_log_average(lam, x: int, t: int | None = None) -> Fraction:
    """sum_{n <= x} lambda(n) [* lambda(n + t)] / n as an exact rational."""
    start = 1 if t is None else max(1, 1 - t)
    total = Fraction(0)
    for n in range(start, x + 1):
        v = lam[n] if t is None else lam[n] * lam[n + t]
        total += Fraction(v, n)
    return total
