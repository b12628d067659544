"""Exact m-adic digit arithmetic for marked-group parameters.

A limit of Baumslag-Solitar groups is labelled by a nonzero integer ``m``
and an m-adic integer ``xi``.  Everything the group algorithms need from
``xi`` is its digit sequence ``r_1, r_2, ...`` and the companion values
``s_i``, defined by the recurrence

    r_0 = 0,  s_0 = 1,
    xi * s_{i-1} = m * s_i + r_i,   r_i in {0, ..., |m|-1}.

Digits are computed with exact rational arithmetic; no floating point is
used anywhere.  A parameter with m < 0 is normalized on construction to
(|m|, -xi), which labels the same marked group, so all digit math runs
over a positive modulus.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from .errors import (
    NonInvertibleDenominator,
    NoUnitRealization,
    ParseError,
    RDigitBudgetExceeded,
    UnsupportedSpecKind,
)


@dataclass(frozen=True)
class XiInt:
    """A rational integer viewed inside the ring of m-adic integers."""

    n: int


@dataclass(frozen=True)
class XiRat:
    """A fraction p/q with q invertible modulo m."""

    p: int
    q: int


@dataclass(frozen=True)
class XiSeqFinite:
    """A finite digit prefix; only finitely many digits are available."""

    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))


@dataclass(frozen=True)
class XiSeqPeriodic:
    """An eventually periodic digit sequence (preperiod then period)."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))


XiSpec = Union[XiInt, XiRat, XiSeqFinite, XiSeqPeriodic]

#: Kinds whose full digit stream is reconstructible exactly.
EXACT_KINDS = (XiInt, XiRat)
SEQ_KINDS = (XiSeqFinite, XiSeqPeriodic)


@dataclass(frozen=True)
class MarkedGroupSpec:
    """The pair (m, xi) identifying one marked limit group.

    Internally normalized to (|m|, sign(m)*xi); both label the same marked
    group.  Digit-sequence descriptions (``XiSeqFinite``/``XiSeqPeriodic``)
    always denote the digits of the *normalized* parameter over |m|, so
    they pass through normalization unchanged.
    """

    m: int
    xi: XiSpec

    def __post_init__(self):
        if self.m == 0:
            raise ValueError("m must be a nonzero integer")
        xi = self.xi
        if isinstance(xi, XiRat):
            if xi.q == 0:
                raise ValueError("rational parameter needs a nonzero denominator")
            if math.gcd(xi.q, self.m) != 1:
                raise NonInvertibleDenominator(
                    f"denominator {xi.q} shares a factor with m={self.m}"
                )
        elif isinstance(xi, SEQ_KINDS):
            digits = (
                xi.digits
                if isinstance(xi, XiSeqFinite)
                else xi.preperiod + xi.period
            )
            bad = [d for d in digits if not 0 <= d < abs(self.m)]
            if bad:
                raise ValueError(f"digits {bad} outside range [0, {abs(self.m)})")
            if isinstance(xi, XiSeqPeriodic) and not xi.period:
                raise ValueError("period must be nonempty")
        elif not isinstance(xi, XiInt):
            raise TypeError(f"not a XiSpec: {xi!r}")

    @property
    def m_abs(self) -> int:
        return abs(self.m)

    @cached_property
    def xi_norm(self) -> XiSpec:
        """sign(m) * xi, the parameter actually used for digit math."""
        if self.m > 0 or isinstance(self.xi, SEQ_KINDS):
            return self.xi
        if isinstance(self.xi, XiInt):
            return XiInt(-self.xi.n)
        return XiRat(-self.xi.p, self.xi.q)

    @property
    def unverified_realizability(self) -> bool:
        """True for digit-sequence inputs whose first digit is not coprime
        to m.  Such sequences are accepted (the group they define is well
        defined) but no m-adic integer is guaranteed to realize them."""
        xi = self.xi
        if isinstance(xi, XiSeqFinite):
            first = xi.digits[0] if xi.digits else 0
        elif isinstance(xi, XiSeqPeriodic):
            first = (xi.preperiod + xi.period)[0]
        else:
            return False
        return math.gcd(first, self.m_abs) != 1


@dataclass(frozen=True)
class PPoly:
    """The polynomial P_h, stored densely with ascending coefficients.

    P_0 = m and P_h = X*P_{h-1} - r_h, so P_h has degree h and leading
    coefficient m.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            if e == 0:
                parts.append(f"{c:+d}")
            else:
                x = "X" if e == 1 else f"X^{e}"
                if c == 1:
                    parts.append(f"+{x}")
                elif c == -1:
                    parts.append(f"-{x}")
                else:
                    parts.append(f"{c:+d}{x}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


def _xi_fraction(spec: MarkedGroupSpec) -> Fraction:
    xi = spec.xi_norm
    if isinstance(xi, XiInt):
        return Fraction(xi.n)
    if isinstance(xi, XiRat):
        return Fraction(xi.p, xi.q)
    raise UnsupportedSpecKind(f"no exact value for {type(xi).__name__}")


class RDigitStream:
    """Memoized, on-demand access to the digits r_1, r_2, ... of a spec.

    Recomputation from scratch yields identical digits; the memo is
    guarded by a lock so a stream may be shared between threads.  An
    optional ``budget`` caps the highest digit index that may be read.
    """

    def __init__(self, spec: MarkedGroupSpec, budget: int | None = None):
        self.spec = spec
        self.budget = budget
        self._lock = threading.Lock()
        self._r: list[int] = []
        if isinstance(spec.xi_norm, EXACT_KINDS):
            self._xi = _xi_fraction(spec)
            self._s: list[Fraction] | None = [Fraction(1)]  # s_0
        else:
            self._xi = None
            self._s = None

    def digit(self, i: int) -> int:
        """Return r_i (1-based)."""
        if i < 1:
            raise ValueError("digit indices start at 1")
        if self.budget is not None and i > self.budget:
            raise RDigitBudgetExceeded(i, f"digit r_{i} exceeds budget {self.budget}")
        xi = self.spec.xi_norm
        if isinstance(xi, XiSeqFinite):
            if i > len(xi.digits):
                raise RDigitBudgetExceeded(i)
            return xi.digits[i - 1]
        if isinstance(xi, XiSeqPeriodic):
            if i <= len(xi.preperiod):
                return xi.preperiod[i - 1]
            k = (i - len(xi.preperiod) - 1) % len(xi.period)
            return xi.period[k]
        self._extend(i)
        return self._r[i - 1]

    def digits(self, count: int) -> list[int]:
        return [self.digit(i) for i in range(1, count + 1)]

    def s_value(self, i: int) -> Fraction:
        """Return s_i (0-based; s_0 = 1) as an exact rational."""
        if self._s is None:
            raise UnsupportedSpecKind(
                "exact s_i values exist only for integer or rational parameters"
            )
        if i < 0:
            raise ValueError("s indices start at 0")
        self._extend(i)
        return self._s[i]

    def _extend(self, i: int) -> None:
        m = self.spec.m_abs
        with self._lock:
            while len(self._r) < i:
                val = self._xi * self._s[-1]
                if m == 1:
                    r = 0
                else:
                    r = val.numerator * pow(val.denominator, -1, m) % m
                self._r.append(r)
                self._s.append((val - r) / m)


def r_digits(spec: MarkedGroupSpec, count: int) -> list[int]:
    """The first ``count`` digits [r_1, ..., r_count] of the parameter."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    return RDigitStream(spec).digits(count)


def s_values(spec: MarkedGroupSpec, count: int) -> list[Fraction]:
    """The exact rationals [s_1, ..., s_count]; integer/rational specs only."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    stream = RDigitStream(spec)
    return [stream.s_value(i) for i in range(1, count + 1)]


def gcd_with_m(spec: MarkedGroupSpec) -> int:
    """gcd(|m|, r_1), with gcd(|m|, 0) = |m|.

    This equals the positive generator d of the ideal generated by m and
    xi in the m-adic integers.
    """
    return math.gcd(spec.m_abs, RDigitStream(spec).digit(1))


def p_polys(spec: MarkedGroupSpec, h: int) -> list[PPoly]:
    """[P_0, ..., P_h] with P_0 = m and P_k = X*P_{k-1} - r_k."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    stream = RDigitStream(spec)
    polys = [PPoly((spec.m_abs,))]
    for k in range(1, h + 1):
        prev = polys[-1].coeffs
        polys.append(PPoly((-stream.digit(k),) + prev))
    return polys


def project_unit(spec: MarkedGroupSpec) -> MarkedGroupSpec:
    """Divide out d = gcd(m, xi): the parameter (m/d, xi/d) of the unit
    group embedded via b -> b^d.

    Returns the input unchanged when d = 1, and the canonical zero spec
    (1, 0) when m/d = 1.
    """
    d = gcd_with_m(spec)
    if d == 1:
        return spec
    if isinstance(spec.xi_norm, SEQ_KINDS):
        raise UnsupportedSpecKind(
            "cannot divide a digit-sequence parameter by its gcd"
        )
    m_hat = spec.m_abs // d
    if m_hat == 1:
        return MarkedGroupSpec(1, XiInt(0))
    xi = spec.xi_norm
    if isinstance(xi, XiInt):
        if xi.n % d:
            raise ValueError(f"gcd {d} does not divide {xi.n}")
        return MarkedGroupSpec(m_hat, XiInt(xi.n // d))
    if xi.p % d:
        raise ValueError(f"gcd {d} does not divide {xi.p}")
    return MarkedGroupSpec(m_hat, XiRat(xi.p // d, xi.q))


def _int_digits(n: int, m: int, count: int) -> list[int]:
    # integer-only copy of the recurrence, for tight search loops
    out = []
    s = 1
    for _ in range(count):
        v = n * s
        r = v % m
        out.append(r)
        s = (v - r) // m
    return out


def xi_from_prefix(m: int, prefix: list[int]) -> tuple[int, int]:
    """The unique residue class (n mod |m|^h) of units whose first h digits
    equal ``prefix``.

    Found by exhaustive search over the phi(|m|) * |m|^(h-1) coprime
    residues; raises :class:`NoUnitRealization` when prefix[0] shares a
    factor with m (no unit starts with such a digit).
    """
    if m == 0:
        raise ValueError("m must be nonzero")
    m = abs(m)
    h = len(prefix)
    if h == 0:
        raise ValueError("prefix must be nonempty")
    if any(not 0 <= d < m for d in prefix):
        raise ValueError("prefix digits outside range")
    if math.gcd(prefix[0], m) != 1:
        raise NoUnitRealization(
            f"first digit {prefix[0]} is not coprime to m={m}"
        )
    modulus = m**h
    target = list(prefix)
    for n in range(modulus):
        if math.gcd(n, m) != 1:
            continue
        if _int_digits(n, m, h) == target:
            return n, modulus
    raise NoUnitRealization(f"no unit realizes prefix {prefix} (unexpected)")


# --- textual parameter grammar -------------------------------------------
#
#   int:<decimal> | rat:<decimal>/<decimal> | rseq:<d1>,...,<dk>
#   | rseq:<d1>,...,<dj>;<p1>,...,<pl>
#
# ASCII, no whitespace; ";" separates preperiod from period.


def _parse_decimal(text: str, offset: int, signed: bool = True) -> int:
    if not text:
        raise ParseError("empty number", offset)
    body = text[1:] if signed and text[0] in "+-" else text
    if not body.isdigit():
        raise ParseError(f"bad number {text!r}", offset)
    return int(text)


def _parse_digit_list(text: str, offset: int) -> tuple[int, ...]:
    if not text:
        return ()
    out = []
    pos = offset
    for piece in text.split(","):
        if not piece.isdigit():
            raise ParseError(f"bad digit {piece!r}", pos)
        out.append(int(piece))
        pos += len(piece) + 1
    return tuple(out)


def parse_xi(text: str) -> XiSpec:
    """Parse the XiSpec grammar (int:/rat:/rseq: forms)."""
    if text.startswith("int:"):
        return XiInt(_parse_decimal(text[4:], 4))
    if text.startswith("rat:"):
        body = text[4:]
        if body.count("/") != 1:
            raise ParseError("rat: needs exactly one '/'", 4)
        p_text, q_text = body.split("/")
        p = _parse_decimal(p_text, 4)
        q = _parse_decimal(q_text, 5 + len(p_text))
        return XiRat(p, q)
    if text.startswith("rseq:"):
        body = text[5:]
        if not body:
            raise ParseError("rseq: needs at least one digit", 5)
        if ";" in body:
            pre_text, _, per_text = body.partition(";")
            pre = _parse_digit_list(pre_text, 5)
            per = _parse_digit_list(per_text, 6 + len(pre_text))
            if not per:
                raise ParseError("empty period", 6 + len(pre_text))
            return XiSeqPeriodic(pre, per)
        return XiSeqFinite(_parse_digit_list(body, 5))
    raise ParseError("expected int:, rat: or rseq:", 0)


def format_xi(xi: XiSpec) -> str:
    """Inverse of :func:`parse_xi`."""
    if isinstance(xi, XiInt):
        return f"int:{xi.n}"
    if isinstance(xi, XiRat):
        return f"rat:{xi.p}/{xi.q}"
    if isinstance(xi, XiSeqFinite):
        return "rseq:" + ",".join(map(str, xi.digits))
    return (
        "rseq:"
        + ",".join(map(str, xi.preperiod))
        + ";"
        + ",".join(map(str, xi.period))
    )
