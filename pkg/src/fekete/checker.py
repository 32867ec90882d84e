"""Exhaustive, exact verification over sequence prefixes: subadditivity
scans with an optional error term, windowed slope maxima, and convexity.

Scans enumerate every admitted pair (n <= m, n + m <= H); exactness comes
from rescaling all values onto a common integer grid, so the hot loop is
pure integer arithmetic and reported deficits are exact rationals.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .model import ErrorTerm, FullDomain, PairDomain, SequencePrefix, format_rational

__all__ = [
    "QSequence",
    "Violation",
    "ViolationReport",
    "check_convexity",
    "check_q_monotone",
    "q_sequence",
    "scan_violations",
]


@dataclass(frozen=True)
class Violation:
    """One admitted pair breaking the inequality, with its exact excess
    a(n+m) - a(n) - a(m) - f(n+m) > 0."""

    n: int
    m: int
    deficit: Fraction


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of a pair scan, sorted by (n + m, n).

    An empty ``violations`` tuple certifies (domain, f)-subadditivity on
    the scanned prefix; ``pairs_checked`` is the exact number of admitted
    pairs enumerated.
    """

    domain: PairDomain
    pairs_checked: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "domain": self.domain.to_json_dict(),
            "pairs_checked": self.pairs_checked,
            "violations": [
                {"n": v.n, "m": v.m, "deficit": format_rational(v.deficit)}
                for v in self.violations
            ],
        }


def _scaled_tables(a: SequencePrefix, f: ErrorTerm | None):
    """Common-denominator integer tables A[n] = a(n)*D and FD[s] = f(s)*D."""
    horizon = a.horizon
    denom = 1
    for v in a.values:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    if f is not None:
        for v in f.values[:horizon]:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
    table_a = [0] * (horizon + 1)
    for i, v in enumerate(a.values, start=1):
        table_a[i] = v.numerator * (denom // v.denominator)
    table_f = [0] * (horizon + 1)
    if f is not None:
        for s in range(1, horizon + 1):
            fv = f.values[s - 1]
            table_f[s] = fv.numerator * (denom // fv.denominator)
    return denom, table_a, table_f


def _scan_block(domain, horizon, table_a, table_f, n_lo, n_hi):
    checked = 0
    bad = []
    for n, m in domain.pairs_upto(horizon, n_lo, n_hi):
        checked += 1
        s = n + m
        diff = table_a[s] - table_a[n] - table_a[m] - table_f[s]
        if diff > 0:
            bad.append((n, m, diff))
    return checked, bad


def scan_violations(
    a: SequencePrefix,
    f: ErrorTerm | None = None,
    domain: PairDomain | None = None,
    workers: int = 1,
) -> ViolationReport:
    """Scan every admitted pair for a(n+m) <= a(n) + a(m) + f(n+m).

    ``f=None`` means the zero error term.  With ``workers > 1`` the outer
    index range is partitioned across processes; the merged report is
    identical to the sequential one.
    """
    if domain is None:
        domain = FullDomain()
    horizon = a.horizon
    if f is not None and f.horizon < horizon:
        raise ValueError(
            f"error-term horizon {f.horizon} is shorter than the sequence horizon {horizon}"
        )
    denom, table_a, table_f = _scaled_tables(a, f)
    top = horizon // 2 + 1  # exclusive bound for the smaller pair member

    if workers > 1 and top - 1 >= 2 * workers:
        edges = [1 + (top - 1) * i // workers for i in range(workers + 1)]
        checked = 0
        raw = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [
                pool.submit(_scan_block, domain, horizon, table_a, table_f, lo, hi)
                for lo, hi in zip(edges, edges[1:])
                if lo < hi
            ]
            for job in jobs:
                part_checked, part_bad = job.result()
                checked += part_checked
                raw.extend(part_bad)
    else:
        checked, raw = _scan_block(domain, horizon, table_a, table_f, 1, top)

    violations = [Violation(n, m, Fraction(d, denom)) for n, m, d in raw]
    violations.sort(key=lambda v: (v.n + v.m, v.n))
    return ViolationReport(domain=domain, pairs_checked=checked, violations=tuple(violations))


@dataclass(frozen=True)
class QSequence:
    """Windowed slope maxima q(n) = max of a(j)/j over n <= j <= 2n,
    tabulated for n in [n_lo, H//2]."""

    n_lo: int
    values: tuple[Fraction, ...]

    @property
    def n_hi(self) -> int:
        return self.n_lo + len(self.values) - 1

    def q(self, n: int) -> Fraction:
        if not self.n_lo <= n <= self.n_hi:
            raise IndexError(f"index {n} outside {self.n_lo}..{self.n_hi}")
        return self.values[n - self.n_lo]


def q_sequence(a: SequencePrefix, n_lo: int) -> QSequence:
    """Tabulate the doubling-window slope maxima of the prefix."""
    horizon = a.horizon
    if n_lo < 1 or 2 * n_lo > horizon:
        raise ValueError(f"horizon {horizon} too small for windows starting at {n_lo}")
    slopes = a.slopes()
    out = []
    for n in range(n_lo, horizon // 2 + 1):
        out.append(max(slopes[n - 1 : 2 * n]))
    return QSequence(n_lo, tuple(out))


def check_q_monotone(a: SequencePrefix, N: int) -> list[int]:
    """Indices n in [N, H//2 - 1] with q(n) < q(n+1).

    An empty list means the window maxima are non-increasing over the whole
    computable range, which must be the case whenever the prefix passes a
    OnePlus(N) scan.
    """
    if N < 1 or 2 * (N + 1) > a.horizon:
        raise ValueError(f"horizon {a.horizon} too small for threshold {N}")
    vals = q_sequence(a, N).values
    return [N + i for i in range(len(vals) - 1) if vals[i] < vals[i + 1]]


def check_convexity(a: SequencePrefix) -> list[int]:
    """Indices n in [2, H-1] where a(n-1) + a(n+1) - 2 a(n) < 0."""
    horizon = a.horizon
    if horizon < 3:
        raise ValueError("horizon too small: need at least 3 values")
    v = a.values
    return [n for n in range(2, horizon) if v[n - 2] + v[n] - 2 * v[n - 1] < 0]
