"""The quotient onto the wreath product Z wr Z, the basic automorphisms,
injective endomorphisms, and a truncated relator-based homomorphism check.

Z wr Z is modelled as Z[X^{+-1}] x| Z with the integer factor acting by
multiplication by X, so (P, s)(Q, t) = (P + X^s Q, s + t).  Every marked
limit group maps onto it by a -> (0, 1) and b -> (1, 0); on elements of
the base group the induced map agrees with the polynomial image q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import InvalidAutSpec
from .group import ALetter, BaseLetter, GroupWord, is_trivial
from .lattice import EVec, GroupCtx, IntPoly, q_poly
from .madic import MarkedGroupSpec
from .markedspace import b_i_word


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial: coeffs[k] is the coefficient of
    X^(offset + k); normalized so the first and last coefficients are
    nonzero, with the zero polynomial stored as empty coeffs."""

    offset: int = 0
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        offset = self.offset
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            offset += 1
        if not coeffs:
            offset = 0
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "offset", offset)

    @staticmethod
    def from_int_poly(p: IntPoly) -> "LaurentPoly":
        return LaurentPoly(0, p.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def shifted(self, s: int) -> "LaurentPoly":
        if self.is_zero:
            return self
        return LaurentPoly(self.offset + s, self.coeffs)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.offset + len(self.coeffs), other.offset + len(other.coeffs))
        out = [0] * (hi - lo)
        for k, c in enumerate(self.coeffs):
            out[self.offset - lo + k] += c
        for k, c in enumerate(other.coeffs):
            out[other.offset - lo + k] += c
        return LaurentPoly(lo, tuple(out))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.offset, tuple(-c for c in self.coeffs))

    def to_json(self) -> dict:
        return {"offset": self.offset, "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class WreathElem:
    """An element (poly, shift) of Z[X^{+-1}] x| Z."""

    poly: LaurentPoly = LaurentPoly()
    shift: int = 0

    def __mul__(self, other: "WreathElem") -> "WreathElem":
        return WreathElem(
            self.poly + other.poly.shifted(self.shift), self.shift + other.shift
        )

    def inverse(self) -> "WreathElem":
        return WreathElem((-self.poly).shifted(-self.shift), -self.shift)

    @property
    def is_identity(self) -> bool:
        return self.poly.is_zero and self.shift == 0

    def to_json(self) -> dict:
        return {"poly": self.poly.to_json(), "shift": self.shift}


WREATH_A = WreathElem(LaurentPoly(), 1)


def wreath_image(ctx: GroupCtx, w: GroupWord) -> WreathElem:
    """Fold the word through a -> (0, 1), e_0 -> (1, 0) and
    e_i -> (X P_{i-1}(X), 0); a homomorphism by construction, whose shift
    coordinate equals the exponent sum of a."""
    acc = WreathElem()
    for letter in w.letters:
        if isinstance(letter, ALetter):
            acc = acc * (WREATH_A if letter.exp == 1 else WREATH_A.inverse())
        else:
            poly = LaurentPoly.from_int_poly(q_poly(ctx, letter.vec))
            acc = acc * WreathElem(poly, 0)
    return acc


# --- automorphisms and endomorphisms -----------------------------------------


@dataclass(frozen=True)
class J:
    """The involution fixing a and negating the base group."""


@dataclass(frozen=True)
class PhiE:
    """The automorphism a -> a e fixing the base group."""

    e: EVec


@dataclass(frozen=True)
class ThetaK:
    """The injective endomorphism fixing a and scaling the base group by
    k, for k coprime to m."""

    k: int


@dataclass(frozen=True)
class EmbedD:
    """b -> b^d on {a, b}-words, the embedding of the projected unit
    group."""

    d: int


AutSpec = Union[J, PhiE, ThetaK, EmbedD]


def apply_automorphism(ctx: GroupCtx, spec: AutSpec, w: GroupWord) -> GroupWord:
    """Letterwise image of the word under the chosen (endo)morphism."""
    out: list = []
    if isinstance(spec, J):
        for letter in w.letters:
            out.append(letter if isinstance(letter, ALetter) else BaseLetter(-letter.vec))
    elif isinstance(spec, PhiE):
        for letter in w.letters:
            if isinstance(letter, ALetter):
                if letter.exp == 1:
                    out.append(letter)
                    if not spec.e.is_zero:
                        out.append(BaseLetter(spec.e))
                else:
                    if not spec.e.is_zero:
                        out.append(BaseLetter(-spec.e))
                    out.append(letter)
            else:
                out.append(letter)
    elif isinstance(spec, ThetaK):
        if spec.k == 0 or math.gcd(spec.k, ctx.m_abs) != 1:
            raise InvalidAutSpec(f"k = {spec.k} must be nonzero and coprime to m")
        for letter in w.letters:
            if isinstance(letter, ALetter):
                out.append(letter)
            elif not letter.vec.is_zero:
                out.append(BaseLetter(spec.k * letter.vec))
    elif isinstance(spec, EmbedD):
        if spec.d < 1:
            raise InvalidAutSpec("d must be a positive integer")
        for letter in w.letters:
            if isinstance(letter, ALetter):
                out.append(letter)
                continue
            for i, c in letter.vec.entries:
                if i != 0:
                    raise InvalidAutSpec(
                        "b -> b^d acts on {a, b}-words only"
                    )
                out.append(BaseLetter(EVec.basis(0, spec.d * c)))
    else:
        raise InvalidAutSpec(f"unknown automorphism {spec!r}")
    return GroupWord(tuple(out))


# --- homomorphism checking ------------------------------------------------------


@dataclass(frozen=True)
class HomCheckResult:
    """Outcome of a relator check truncated at ``depth`` (the defining
    presentation is infinite, so a pass is evidence, not proof)."""

    ok: bool
    depth: int
    first_failing: Optional[int] = None


def _substitute(
    w: GroupWord, image_of_a: GroupWord, image_of_b: GroupWord
) -> GroupWord:
    inv_a = image_of_a.inverse()
    letters: list = []
    for letter in w.letters:
        if isinstance(letter, ALetter):
            letters.extend((image_of_a if letter.exp == 1 else inv_a).letters)
            continue
        for i, c in letter.vec.entries:
            if i != 0:
                raise ValueError("substitution needs an {a, b}-word")
            piece = image_of_b if c > 0 else image_of_b.inverse()
            for _ in range(abs(c)):
                letters.extend(piece.letters)
    return GroupWord(tuple(letters))


def hom_check(
    src: MarkedGroupSpec,
    dst: MarkedGroupSpec,
    image_of_a: GroupWord,
    image_of_b: GroupWord,
    depth: int,
) -> HomCheckResult:
    """Test whether a -> image_of_a, b -> image_of_b kills the first
    ``depth`` defining relators of the source group inside the target."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    src_ctx = GroupCtx(src)
    dst_ctx = GroupCtx(dst)
    b_word = GroupWord((BaseLetter(EVec.basis(0)),))
    for i in range(1, depth + 1):
        rel = (
            b_word * b_i_word(src_ctx, i) * b_word.inverse()
            * b_i_word(src_ctx, i).inverse()
        )
        image = _substitute(rel, image_of_a, image_of_b)
        if not is_trivial(dst_ctx, image):
            return HomCheckResult(ok=False, depth=depth, first_failing=i)
    return HomCheckResult(ok=True, depth=depth)
