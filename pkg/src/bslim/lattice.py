"""The free abelian base group of countable rank and its two associated
subgroups.

Elements of the base group E = Z e_0 + Z e_1 + ... are finitely supported
integer vectors.  The stable letter a conjugates the finite-index subgroup

    E_{m,xi} = Z(m e_0) + Z(e_1 - r_1 e_0) + Z(e_2 - r_2 e_0) + ...

onto E_1 = Z e_1 + Z e_2 + ... via a(m e_0)a^-1 = e_1 and
a(e_i - r_i e_0)a^-1 = e_{i+1}.  This module implements membership in the
two subgroups, the conjugation isomorphism in both directions, iterated
conjugation by powers of a, the injective polynomial image q (e_0 -> 1,
e_i -> X*P_{i-1}(X)), and the fixed-interval data (mu, nu) of a base
element acting on the Bass-Serre tree.

Any operation touching support index k reads at most k digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Optional, Union

from .errors import ParseError, PinchDomainViolation, ZeroElement
from .madic import MarkedGroupSpec, RDigitStream, XiSpec, parse_xi


@dataclass(frozen=True)
class EVec:
    """A finitely supported integer vector over the basis e_0, e_1, ...

    ``entries`` is a sorted tuple of (index, coefficient) pairs with no
    zero coefficients, so equality and hashing are structural.
    """

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @staticmethod
    def from_items(items: Union[Mapping[int, int], Iterable[tuple[int, int]]]) -> "EVec":
        acc: dict[int, int] = {}
        pairs = items.items() if isinstance(items, Mapping) else items
        for i, c in pairs:
            if i < 0:
                raise ValueError("basis indices are nonnegative")
            acc[i] = acc.get(i, 0) + c
        return EVec(tuple(sorted((i, c) for i, c in acc.items() if c)))

    @staticmethod
    def basis(i: int, c: int = 1) -> "EVec":
        return EVec.from_items([(i, c)])

    @staticmethod
    def zero() -> "EVec":
        return EVec()

    def to_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def coeff(self, i: int) -> int:
        for j, c in self.entries:
            if j == i:
                return c
        return 0

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def max_index(self) -> int:
        """Largest support index, or -1 for the zero vector."""
        return self.entries[-1][0] if self.entries else -1

    def __add__(self, other: "EVec") -> "EVec":
        acc = dict(self.entries)
        for i, c in other.entries:
            acc[i] = acc.get(i, 0) + c
        return EVec(tuple(sorted((i, c) for i, c in acc.items() if c)))

    def __neg__(self) -> "EVec":
        return EVec(tuple((i, -c) for i, c in self.entries))

    def __sub__(self, other: "EVec") -> "EVec":
        return self + (-other)

    def __rmul__(self, k: int) -> "EVec":
        if k == 0:
            return EVec()
        return EVec(tuple((i, k * c) for i, c in self.entries))

    def __str__(self) -> str:
        return format_evec(self)


def parse_evec(text: str) -> EVec:
    """Parse whitespace-separated ``e<i>^<k>`` tokens (k omitted means 1);
    the empty string is the zero vector."""
    acc: dict[int, int] = {}
    offset = 0
    for token in text.split():
        offset = text.index(token, offset)
        if not token.startswith("e"):
            raise ParseError(f"bad token {token!r}", offset)
        body = token[1:]
        idx_text, _, exp_text = body.partition("^")
        if not idx_text.isdigit():
            raise ParseError(f"bad basis index in {token!r}", offset)
        k = 1
        if exp_text or "^" in body:
            if not exp_text or exp_text in "+-":
                raise ParseError(f"bad exponent in {token!r}", offset)
            sign_free = exp_text[1:] if exp_text[0] in "+-" else exp_text
            if not sign_free.isdigit():
                raise ParseError(f"bad exponent in {token!r}", offset)
            k = int(exp_text)
            if k == 0:
                raise ParseError(f"zero exponent in {token!r}", offset)
        i = int(idx_text)
        acc[i] = acc.get(i, 0) + k
        offset += len(token)
    return EVec.from_items(acc)


def format_evec(vec: EVec) -> str:
    """Inverse of :func:`parse_evec`; the zero vector prints as ''."""
    parts = []
    for i, c in vec.entries:
        parts.append(f"e{i}" if c == 1 else f"e{i}^{c}")
    return " ".join(parts)


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, ascending coefficients, no leading zeros;
    the zero polynomial is the empty tuple."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def x_valuation(self) -> int:
        """Largest k with X^k dividing the polynomial (0 for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(tuple(out))


class GroupCtx:
    """A marked group with its shared digit stream.

    Read-only once constructed; safe to share between threads subject to
    the digit-stream memo contract.
    """

    def __init__(self, spec: MarkedGroupSpec, digits: Optional[RDigitStream] = None):
        self.spec = spec
        self.digits = digits if digits is not None else RDigitStream(spec)

    @classmethod
    def make(
        cls, m: int, xi: Union[XiSpec, str], budget: Optional[int] = None
    ) -> "GroupCtx":
        if isinstance(xi, str):
            xi = parse_xi(xi)
        spec = MarkedGroupSpec(m, xi)
        return cls(spec, RDigitStream(spec, budget=budget))

    @property
    def m_abs(self) -> int:
        return self.spec.m_abs

    def r(self, i: int) -> int:
        return self.digits.digit(i)

    def __repr__(self) -> str:
        return f"GroupCtx(m={self.spec.m}, xi={self.spec.xi!r})"


# --- dict-based kernels (hot paths in the reduction engine) ----------------

def _emxi_value(ctx: GroupCtx, seg: Mapping[int, int]) -> int:
    """beta_0 + sum_i beta_i r_i; membership in E_{m,xi} is value = 0 mod m."""
    total = 0
    for i, c in seg.items():
        total += c * (ctx.r(i) if i else 1)
    return total


def _in_emxi(ctx: GroupCtx, seg: Mapping[int, int]) -> bool:
    return _emxi_value(ctx, seg) % ctx.m_abs == 0


def _in_e1(seg: Mapping[int, int]) -> bool:
    return seg.get(0, 0) == 0


def _up(ctx: GroupCtx, seg: Mapping[int, int]) -> dict[int, int]:
    """a x a^-1 for x in E_{m,xi}: the e_0 part folds into e_1."""
    k0, out = 0, {}
    m = ctx.m_abs
    for i, c in seg.items():
        if i == 0:
            k0 += c
        else:
            k0 += c * ctx.r(i)
            out[i + 1] = c
    q, rem = divmod(k0, m)
    if rem:
        raise PinchDomainViolation("element is not in E_{m,xi}")
    if q:
        out[1] = out.get(1, 0) + q
        if not out[1]:
            del out[1]
    return out


def _down(ctx: GroupCtx, seg: Mapping[int, int]) -> dict[int, int]:
    """a^-1 x a for x in E_1: e_1 -> m e_0, e_{i+1} -> e_i - r_i e_0."""
    if seg.get(0, 0):
        raise PinchDomainViolation("element is not in E_1")
    c0 = 0
    out: dict[int, int] = {}
    for i, c in seg.items():
        if i == 0:
            continue
        if i == 1:
            c0 += ctx.m_abs * c
        else:
            c0 -= c * ctx.r(i - 1)
            out[i - 1] = c
    if c0:
        out[0] = out.get(0, 0) + c0
        if not out[0]:
            del out[0]
    return out


# --- public operations ------------------------------------------------------

SubgroupName = Literal["E1", "EmXi"]
PhiDirection = Literal["down", "up"]


def subgroup_membership(ctx: GroupCtx, x: EVec, which: SubgroupName) -> bool:
    """Membership in E_1 (zero e_0 coefficient) or in E_{m,xi} (digit-weighted
    coefficient sum divisible by m)."""
    if which == "E1":
        return x.coeff(0) == 0
    if which == "EmXi":
        return _in_emxi(ctx, x.to_dict())
    raise ValueError(f"unknown subgroup {which!r}")


def phi_apply(ctx: GroupCtx, x: EVec, direction: PhiDirection) -> EVec:
    """The conjugation isomorphism: ``down`` sends E_1 to E_{m,xi}
    (realizing a^-1 x a), ``up`` sends E_{m,xi} to E_1 (realizing a x a^-1).
    """
    if direction == "down":
        if x.coeff(0) != 0:
            raise PinchDomainViolation("down direction needs an element of E_1")
        return EVec.from_items(_down(ctx, x.to_dict()))
    if direction == "up":
        if not _in_emxi(ctx, x.to_dict()):
            raise PinchDomainViolation("up direction needs an element of E_{m,xi}")
        return EVec.from_items(_up(ctx, x.to_dict()))
    raise ValueError(f"unknown direction {direction!r}")


def a_conjugate(ctx: GroupCtx, x: EVec, n: int) -> Optional[EVec]:
    """a^n x a^-n when every intermediate stays in the base group, else None.

    Positive shifts need E_{m,xi} at each step, negative shifts need E_1.
    """
    seg = x.to_dict()
    for _ in range(abs(n)):
        if n > 0:
            if not _in_emxi(ctx, seg):
                return None
            seg = _up(ctx, seg)
        else:
            if not _in_e1(seg):
                return None
            seg = _down(ctx, seg)
    return EVec.from_items(seg)


def q_poly(ctx: GroupCtx, x: EVec) -> IntPoly:
    """The polynomial image beta_0 + sum_i beta_i X P_{i-1}(X).

    Injective on the base group: the images of the basis are triangular
    with diagonal coefficient m.
    """
    top = x.max_index()
    out = [0] * (top + 1 if top >= 0 else 1)
    # p holds P_built with ascending coefficients (-r_built, ..., -r_1, m)
    p = [ctx.m_abs]
    built = 0
    for i, c in x.entries:
        if i == 0:
            out[0] += c
            continue
        while built < i - 1:
            built += 1
            p = [-ctx.r(built)] + p
        for e, pc in enumerate(p):  # add c * X * P_{i-1}
            out[e + 1] += c * pc
    return IntPoly(tuple(out))


class _CapReached:
    """Marker returned when the up-shift count hits the cap."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "CAP_REACHED"


CAP_REACHED = _CapReached()


def fixed_interval(
    ctx: GroupCtx, x: EVec, cap: int = 64
) -> tuple[Union[int, _CapReached], int]:
    """(mu, nu) for a nonzero base element: nu is the X-adic valuation of
    its polynomial image (available down-shifts), mu counts available
    up-shifts, reported as CAP_REACHED once it meets ``cap`` (mu can be
    infinite for algebraic parameters)."""
    if x.is_zero:
        raise ZeroElement("fixed interval undefined for the zero element")
    nu = q_poly(ctx, x).x_valuation()
    mu = 0
    seg = x.to_dict()
    while _in_emxi(ctx, seg):
        mu += 1
        if mu >= cap:
            return CAP_REACHED, nu
        seg = _up(ctx, seg)
    return mu, nu
