"""Shared corpus builders for the test suite."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from fekete import SequencePrefix


def tabulate(fn, horizon: int) -> SequencePrefix:
    return SequencePrefix([fn(n) for n in range(1, horizon + 1)])


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ceil_cbrt_sq(n: int) -> int:
    """ceil(n ** (2/3)): smallest t with t**3 >= n**2."""
    target = n * n
    t = round(target ** (1 / 3))
    while t ** 3 < target:
        t += 1
    while t >= 1 and (t - 1) ** 3 >= target:
        t -= 1
    return t


def monotone_rationals(horizon: int, seed: int) -> list[Fraction]:
    """Deterministic non-decreasing rationals for shift tests."""
    rng = random.Random(seed)
    out = []
    total = Fraction(0)
    for _ in range(horizon):
        total += Fraction(rng.randrange(0, 7), rng.randrange(1, 9))
        out.append(total)
    return out
