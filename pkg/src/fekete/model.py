"""Exact scalar, sequence, and pair-domain types shared by every other module.

All scalars are arbitrary-precision rationals (``fractions.Fraction``), so
every inequality decided anywhere in the package is decided exactly; no
floating point enters the core arithmetic.  Sequences are finite 1-indexed
prefixes ``a(1..H)``, with ``a(0) = 0`` supplied implicitly where an
operation needs it.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

__all__ = [
    "ErrorTerm",
    "ExplicitDomain",
    "FullDomain",
    "MuBandDomain",
    "OnePlusDomain",
    "PairDomain",
    "SequencePrefix",
    "ThresholdDomain",
    "admits",
    "builtin_error_term",
    "family_parameters",
    "format_rational",
    "parse_error_term",
    "parse_rational",
    "parse_sequence",
    "sequence_to_csv",
    "sequence_to_json",
    "zero_error_term",
]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")


def parse_rational(text: str | int) -> Fraction:
    """Parse an exact rational from an integer literal or a ``p/q`` string."""
    if isinstance(text, bool):
        raise ValueError(f"malformed rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"malformed rational: {text!r}")
    return Fraction(s)


def format_rational(value: Fraction) -> str:
    """Canonical rendering: bare ``p`` for integers, otherwise ``p/q``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _coerce(value) -> Fraction:
    """Accept Fraction, int, or a p/q string; anything inexact is rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True, init=False)
class SequencePrefix:
    """Finite exact table ``a(1..H)`` of a sequence.

    ``value(0)`` is defined as 0 so that decomposition identities hold
    without special cases.
    """

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable) -> None:
        vals = tuple(_coerce(v) for v in values)
        if not vals:
            raise ValueError("empty sequence")
        object.__setattr__(self, "values", vals)

    @property
    def horizon(self) -> int:
        return len(self.values)

    def value(self, n: int) -> Fraction:
        if n == 0:
            return Fraction(0)
        if not 1 <= n <= len(self.values):
            raise IndexError(f"index {n} outside 1..{len(self.values)}")
        return self.values[n - 1]

    def slope(self, n: int) -> Fraction:
        """The ratio a(n)/n."""
        return self.value(n) / n

    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(v / (i + 1) for i, v in enumerate(self.values))


@dataclass(frozen=True, init=False)
class ErrorTerm:
    """Non-negative, non-decreasing exact table ``f(1..H)``.

    Both invariants are enforced at construction, so holding an ErrorTerm
    is itself a certificate that the table qualifies as an error term.
    """

    values: tuple[Fraction, ...]
    family_tag: str | None

    def __init__(self, values: Iterable, family_tag: str | None = None) -> None:
        vals = tuple(_coerce(v) for v in values)
        if not vals:
            raise ValueError("empty error term")
        if vals[0] < 0:
            raise ValueError("error term must be non-negative")
        for i in range(1, len(vals)):
            if vals[i] < vals[i - 1]:
                raise ValueError(
                    f"error term must be non-decreasing, drops at index {i + 1}"
                )
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "family_tag", family_tag)

    @property
    def horizon(self) -> int:
        return len(self.values)

    def value(self, n: int) -> Fraction:
        if not 1 <= n <= len(self.values):
            raise IndexError(f"index {n} outside 1..{len(self.values)}")
        return self.values[n - 1]


# --- builtin error-term families -------------------------------------------

_FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "zero": (),
    "constant": ("c",),
    "floor_sqrt": (),
    "floor_power": ("c", "delta"),
    "linear_over_log": (),
    "linear": ("c",),
}


def family_parameters(family: str) -> tuple[str, ...]:
    """Parameter names a builtin family expects, in positional order."""
    try:
        return _FAMILY_PARAMS[family]
    except KeyError:
        raise ValueError(f"unknown error-term family: {family!r}") from None


def _floor_root(x: int, r: int) -> int:
    """Largest t >= 0 with t**r <= x (integer Newton iteration)."""
    if x < 0 or r < 1:
        raise ValueError("need x >= 0 and r >= 1")
    if r == 1 or x in (0, 1):
        return x
    if r == 2:
        return math.isqrt(x)
    t = 1 << -(-x.bit_length() // r)
    while True:
        nt = ((r - 1) * t + x // t ** (r - 1)) // r
        if nt >= t:
            break
        t = nt
    while t ** r > x:
        t -= 1
    while (t + 1) ** r <= x:
        t += 1
    return t


def _floor_ratio_log2(n: int) -> int:
    """floor(n / log2(n + 1)), decided exactly.

    t <= n/log2(n+1) iff (n+1)**t <= 2**n, so boundary cases are settled by
    integer powering; away from the boundary a double is already conclusive
    (absolute error of the float estimate stays far below the 1e-6 margin
    for any horizon this package handles).
    """
    if n < 1:
        raise ValueError("index must be positive")
    if n <= 4096:
        t = 1
        cap = 1 << n
        while (n + 1) ** (t + 1) <= cap:
            t += 1
        return t
    est = n / math.log2(n + 1)
    t = int(est)
    if min(est - t, t + 1 - est) < 1e-6:
        cap = 1 << n
        while (n + 1) ** (t + 1) <= cap:
            t += 1
        while (n + 1) ** t > cap:
            t -= 1
    return t


def zero_error_term(horizon: int) -> ErrorTerm:
    """The identically-zero error term (plain subadditivity)."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    return ErrorTerm((Fraction(0),) * horizon, family_tag="zero")


def builtin_error_term(
    family: str, horizon: int, params: Mapping | None = None
) -> ErrorTerm:
    """Tabulate one of the builtin error-term families up to ``horizon``.

    Families (parameters are exact rationals):

    - ``zero``: f(n) = 0
    - ``constant``: f(n) = floor(c), c >= 0
    - ``floor_sqrt``: f(n) = floor(sqrt(n))
    - ``floor_power``: f(n) = floor(c * n**(1 - delta)), c >= 0, delta in (0, 1]
    - ``linear_over_log``: f(n) = floor(n / log2(n + 1))
    - ``linear``: f(n) = floor(c * n), c >= 0

    Every value is an exact integer (floors applied throughout), so
    monotonicity and non-negativity are decided exactly.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    expected = family_parameters(family)
    given = dict(params or {})
    if set(given) != set(expected):
        raise ValueError(
            f"family {family!r} expects parameters {list(expected)}, got {sorted(given)}"
        )
    args = {k: _coerce(v) for k, v in given.items()}

    if family == "zero":
        values = [0] * horizon
        tag = "zero"
    elif family == "constant":
        c = args["c"]
        if c < 0:
            raise ValueError("parameter out of range: c must be >= 0")
        values = [c.numerator // c.denominator] * horizon
        tag = f"constant({format_rational(c)})"
    elif family == "floor_sqrt":
        values = [math.isqrt(n) for n in range(1, horizon + 1)]
        tag = "floor_sqrt"
    elif family == "floor_power":
        c, delta = args["c"], args["delta"]
        if c < 0:
            raise ValueError("parameter out of range: c must be >= 0")
        if not 0 < delta <= 1:
            raise ValueError("parameter out of range: delta must be in (0, 1]")
        d = 1 - delta
        dp, dq = d.numerator, d.denominator
        cp, cq = c.numerator, c.denominator
        values = [
            _floor_root(cp ** dq * n ** dp, dq) // cq for n in range(1, horizon + 1)
        ]
        tag = f"floor_power({format_rational(c)},{format_rational(delta)})"
    elif family == "linear_over_log":
        values = [_floor_ratio_log2(n) for n in range(1, horizon + 1)]
        tag = "linear_over_log"
    elif family == "linear":
        c = args["c"]
        if c < 0:
            raise ValueError("parameter out of range: c must be >= 0")
        values = [(c.numerator * n) // c.denominator for n in range(1, horizon + 1)]
        tag = f"linear({format_rational(c)})"
    else:  # pragma: no cover - family_parameters already rejected it
        raise ValueError(f"unknown error-term family: {family!r}")

    return ErrorTerm(values, family_tag=tag)


# --- pair domains -----------------------------------------------------------


class PairDomain:
    """Selects the unordered pairs (n, m) on which the subadditivity
    inequality is asserted.

    ``admits`` is symmetric by construction: pairs are normalised to
    (min, max) before testing.  ``pairs_upto`` enumerates the admitted
    pairs with n <= m and n + m <= horizon; the optional bounds restrict
    the smaller coordinate so scans can be partitioned across workers.
    """

    def admits(self, n: int, m: int) -> bool:
        raise NotImplementedError

    def pairs_upto(
        self, horizon: int, n_lo: int = 1, n_hi: int | None = None
    ) -> Iterator[tuple[int, int]]:
        raise NotImplementedError

    def to_json_dict(self) -> dict:
        raise NotImplementedError


def _outer_top(horizon: int, n_hi: int | None) -> int:
    top = horizon // 2
    return top if n_hi is None else min(top, n_hi - 1)


@dataclass(frozen=True)
class FullDomain(PairDomain):
    """All pairs n, m >= 1."""

    def admits(self, n: int, m: int) -> bool:
        return min(n, m) >= 1

    def pairs_upto(self, horizon, n_lo=1, n_hi=None):
        for n in range(max(1, n_lo), _outer_top(horizon, n_hi) + 1):
            for m in range(n, horizon - n + 1):
                yield n, m

    def to_json_dict(self):
        return {"variant": "full"}


@dataclass(frozen=True)
class ThresholdDomain(PairDomain):
    """All pairs with n, m >= N."""

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("threshold must be positive")

    def admits(self, n: int, m: int) -> bool:
        return min(n, m) >= self.N

    def pairs_upto(self, horizon, n_lo=1, n_hi=None):
        for n in range(max(self.N, n_lo), _outer_top(horizon, n_hi) + 1):
            for m in range(n, horizon - n + 1):
                yield n, m

    def to_json_dict(self):
        return {"variant": "threshold", "N": self.N}


@dataclass(frozen=True)
class MuBandDomain(PairDomain):
    """Pairs with N <= n <= m <= mu * n (after normalising n <= m)."""

    mu: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "mu", _coerce(self.mu))
        if self.mu <= 1:
            raise ValueError("mu must exceed 1")
        if self.N < 1:
            raise ValueError("threshold must be positive")

    def admits(self, n: int, m: int) -> bool:
        lo, hi = (n, m) if n <= m else (m, n)
        return lo >= self.N and hi * self.mu.denominator <= self.mu.numerator * lo

    def pairs_upto(self, horizon, n_lo=1, n_hi=None):
        num, den = self.mu.numerator, self.mu.denominator
        for n in range(max(self.N, n_lo), _outer_top(horizon, n_hi) + 1):
            m_top = min(horizon - n, (num * n) // den)
            for m in range(n, m_top + 1):
                yield n, m

    def to_json_dict(self):
        return {"variant": "muband", "mu": format_rational(self.mu), "N": self.N}


@dataclass(frozen=True)
class OnePlusDomain(PairDomain):
    """Exactly the pairs (n, n) and (n, n + 1) for n >= N."""

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("threshold must be positive")

    def admits(self, n: int, m: int) -> bool:
        lo, hi = (n, m) if n <= m else (m, n)
        return lo >= self.N and hi - lo <= 1

    def pairs_upto(self, horizon, n_lo=1, n_hi=None):
        for n in range(max(self.N, n_lo), _outer_top(horizon, n_hi) + 1):
            yield n, n
            if 2 * n + 1 <= horizon:
                yield n, n + 1

    def to_json_dict(self):
        return {"variant": "oneplus", "N": self.N}


@dataclass(frozen=True, init=False)
class ExplicitDomain(PairDomain):
    """A finite, explicitly listed set of pairs (stored normalised)."""

    pairs: frozenset[tuple[int, int]]

    def __init__(self, pairs: Iterable[tuple[int, int]]) -> None:
        normalised = set()
        for pair in pairs:
            n, m = pair
            if not (isinstance(n, int) and isinstance(m, int)) or min(n, m) < 1:
                raise ValueError(f"invalid pair {pair!r}: need positive integers")
            normalised.add((min(n, m), max(n, m)))
        object.__setattr__(self, "pairs", frozenset(normalised))

    def admits(self, n: int, m: int) -> bool:
        return (min(n, m), max(n, m)) in self.pairs

    def pairs_upto(self, horizon, n_lo=1, n_hi=None):
        top = _outer_top(horizon, n_hi)
        for n, m in sorted(self.pairs):
            if max(1, n_lo) <= n <= top and n + m <= horizon:
                yield n, m

    def to_json_dict(self):
        return {"variant": "explicit", "pairs": [list(p) for p in sorted(self.pairs)]}


def admits(domain: PairDomain, n: int, m: int) -> bool:
    """True iff the unordered pair {n, m} is asserted by ``domain``."""
    return domain.admits(n, m)


# --- serialization ----------------------------------------------------------


def sequence_to_json(prefix: SequencePrefix) -> str:
    payload = {
        "values": [format_rational(v) for v in prefix.values],
        "offset": 1,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def sequence_to_csv(prefix: SequencePrefix) -> str:
    lines = [
        f"{i},{format_rational(v)}" for i, v in enumerate(prefix.values, start=1)
    ]
    return "\n".join(lines) + "\n"


def _sequence_from_json(text: str) -> SequencePrefix:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ValueError("expected a JSON object with a 'values' field")
    if "values" not in payload and isinstance(payload.get("b"), dict):
        payload = payload["b"]  # construction outputs wrap their sequence in "b"
    values = payload.get("values")
    if not isinstance(values, list):
        raise ValueError("expected a JSON object with a 'values' list")
    offset = payload.get("offset", 1)
    if offset != 1:
        raise ValueError(f"unsupported offset {offset!r}: sequences are 1-indexed")
    return SequencePrefix(parse_rational(v) for v in values)


def _table_from_csv(text: str) -> list[Fraction]:
    entries: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        idx_s, sep, val_s = line.partition(",")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'index,value'")
        try:
            idx = int(idx_s.strip())
        except ValueError:
            raise ValueError(f"line {lineno}: malformed index {idx_s!r}") from None
        if idx < 1:
            raise ValueError(f"line {lineno}: index must be positive, got {idx}")
        if idx in entries:
            raise ValueError(f"line {lineno}: duplicate index {idx}")
        entries[idx] = parse_rational(val_s)
    if not entries:
        raise ValueError("empty sequence")
    horizon = max(entries)
    for i in range(1, horizon + 1):
        if i not in entries:
            raise ValueError(f"missing index {i}")
    return [entries[i] for i in range(1, horizon + 1)]


def parse_sequence(text: str) -> SequencePrefix:
    """Parse a sequence prefix from its JSON or CSV serialisation.

    JSON objects carry ``{"values": [...], "offset": 1}``; construction
    outputs (objects with a ``b`` field) are unwrapped to their sequence.
    CSV rows are ``index,value`` with contiguous indices 1..H.
    """
    if text.lstrip().startswith("{"):
        return _sequence_from_json(text)
    return SequencePrefix(_table_from_csv(text))


def parse_error_term(text: str) -> ErrorTerm:
    """Parse an error term: a family descriptor JSON
    ``{"family": name, "params": {...}, "H": n}``, a plain values JSON,
    or an ``index,value`` CSV table."""
    if text.lstrip().startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from None
        if not isinstance(payload, dict):
            raise ValueError("expected a JSON object")
        if "family" in payload:
            family = payload["family"]
            horizon = payload.get("H")
            if not isinstance(horizon, int):
                raise ValueError("family descriptor needs an integer 'H'")
            raw = payload.get("params", {})
            if not isinstance(raw, dict):
                raise ValueError("'params' must be an object")
            params = {k: parse_rational(v) for k, v in raw.items()}
            return builtin_error_term(family, horizon, params)
        values = payload.get("values")
        if not isinstance(values, list):
            raise ValueError("expected 'family' or 'values'")
        return ErrorTerm(parse_rational(v) for v in values)
    return ErrorTerm(_table_from_csv(text))
