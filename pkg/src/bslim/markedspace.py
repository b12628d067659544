"""Relator generators, distances in the space of marked groups,
isomorphism classification, and black-box parameter recovery.

The metric on marked groups is d = e^(-L) where L is the length of a
shortest word trivial in exactly one of the two groups.  Distances are
handled through integer exponents only; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    GcdMismatch,
    OracleInconsistent,
    SameGroup,
    UndecidableSpec,
)
from .group import (
    ALetter,
    BaseLetter,
    GroupWord,
    _reduce_alt,
    commutator,
    is_trivial,
    parse_word,
)
from .lattice import EVec, GroupCtx
from .madic import (
    EXACT_KINDS,
    MarkedGroupSpec,
    RDigitStream,
    XiSeqFinite,
    XiSeqPeriodic,
    _xi_fraction,
    gcd_with_m,
)


@dataclass(frozen=True)
class DistanceBounds:
    """Exact distance sandwich e^-lower_exp <= d <= e^-upper_exp derived
    from the length h of the common digit prefix."""

    h: int
    lower_exp: int
    upper_exp: int

    def __post_init__(self):
        if not self.lower_exp >= self.upper_exp >= 1:
            raise ValueError("bounds must satisfy lower_exp >= upper_exp >= 1")


# --- relator words -----------------------------------------------------------


def b_i_word(ctx: GroupCtx, i: int) -> GroupWord:
    """The i-th commuting generator as a compact word: b_1 = a b^m a^-1 and
    b_i = a b_{i-1} b^(-r_{i-1}) a^-1."""
    if i < 1:
        raise ValueError("generator indices start at 1")
    m = ctx.m_abs
    word = (
        GroupWord((ALetter(1),))
        * GroupWord((BaseLetter(EVec.basis(0, m)),))
        * GroupWord((ALetter(-1),))
    )
    for k in range(2, i + 1):
        r = ctx.r(k - 1)
        tail = GroupWord((BaseLetter(EVec.basis(0, -r)),)) if r else GroupWord(())
        word = GroupWord((ALetter(1),)) * word * tail * GroupWord((ALetter(-1),))
    return word


def v_k_word(k: int) -> GroupWord:
    """[a b^k a^-1, b]; trivial exactly when m divides k."""
    inner = parse_word("a") * GroupWord((BaseLetter(EVec.basis(0, k)),)) * parse_word("A")
    return commutator(inner, parse_word("b"))


def w_word(m: int, digits: Sequence[int]) -> GroupWord:
    """a^(n+1) (m e_0) a^-1 (-t_1 e_0) a^-1 ... (-t_n e_0) a^-1 for the
    digit list t; lands in the base group exactly when t matches the
    group's digits."""
    letters: list = [ALetter(1)] * (len(digits) + 1)
    letters.append(BaseLetter(EVec.basis(0, m)))
    letters.append(ALetter(-1))
    for t in digits:
        if t:
            letters.append(BaseLetter(EVec.basis(0, -t)))
        letters.append(ALetter(-1))
    return GroupWord(tuple(letters))


def win_e_word(m: int, digits: Sequence[int]) -> GroupWord:
    """w(m,t) e_0 w(-m,-t) (-e_0): trivial exactly when t_i = r_i for all
    i up to len(t)."""
    pos = w_word(m, digits)
    neg = w_word(-m, [-t for t in digits])
    b = GroupWord((BaseLetter(EVec.basis(0)),))
    return pos * b * neg * b.inverse()


def relator(kind: str, *, ctx: GroupCtx | None = None, index: int | None = None,
            m: int | None = None, digits: Sequence[int] | None = None) -> GroupWord:
    """Dispatcher over the four relator families: ``bi`` (needs ctx and
    index), ``vk`` (index), ``w`` and ``wine`` (m and digits)."""
    if kind == "bi":
        if ctx is None or index is None:
            raise ValueError("bi needs ctx and index")
        return b_i_word(ctx, index)
    if kind == "vk":
        if index is None:
            raise ValueError("vk needs index")
        return v_k_word(index)
    if kind in ("w", "wine"):
        if m is None or digits is None:
            raise ValueError(f"{kind} needs m and digits")
        return w_word(m, digits) if kind == "w" else win_e_word(m, digits)
    raise ValueError(f"unknown relator kind {kind!r}")


def word_to_compact(ctx: GroupCtx, w: GroupWord) -> str:
    """Re-express a word over {a, b} by expanding each e_i payload through
    the commuting-generator words."""
    out: list[str] = []
    for letter in w.letters:
        if isinstance(letter, ALetter):
            out.append("a" if letter.exp == 1 else "A")
            continue
        for i, c in letter.vec.entries:
            if i == 0:
                out.append(("b" if c > 0 else "B") * abs(c))
            else:
                from .group import format_word

                piece = b_i_word(ctx, i)
                if c < 0:
                    piece = piece.inverse()
                out.append(format_word(piece, "compact") * abs(c))
    return "".join(out)


# --- enumeration of candidate distinguishing words -----------------------------
#
# A shortest word trivial in exactly one of two limit groups is freely and
# cyclically reduced, has an a-letter, and dies in the common wreath
# quotient (a -> shift, b -> X^shift).  Its class under rotation and
# inversion is what matters, so only lexicographically minimal
# representatives (letter order a < A < b < B) are kept.

_INV = (1, 0, 3, 2)  # inverse letter indices for (a, A, b, B)


def _wreath_trivial_words(length: int) -> list[tuple[int, ...]]:
    """Freely and cyclically reduced words of this exact length starting
    with 'a' whose wreath image is trivial, via depth-first search with an
    incremental lamp-configuration state."""
    if length < 2:
        return []
    out: list[tuple[int, ...]] = []
    word = [0] * length
    lamps: dict[int, int] = {}
    shift = 0

    def push(letter: int) -> int:
        nonlocal shift
        if letter == 0:
            shift += 1
        elif letter == 1:
            shift -= 1
        else:
            c = lamps.get(shift, 0) + (1 if letter == 2 else -1)
            if c:
                lamps[shift] = c
            else:
                del lamps[shift]
        return letter

    def pop(letter: int) -> None:
        nonlocal shift
        if letter == 0:
            shift -= 1
        elif letter == 1:
            shift += 1
        else:
            c = lamps.get(shift, 0) - (1 if letter == 2 else -1)
            if c:
                lamps[shift] = c
            else:
                lamps.pop(shift, None)

    def rec(pos: int) -> None:
        if pos == length:
            if not lamps and shift == 0 and word[-1] != 1:
                out.append(tuple(word))
            return
        prev_inv = _INV[word[pos - 1]]
        remaining = length - pos
        # prune: every a must eventually return and lamps must clear
        if abs(shift) > remaining or len(lamps) > remaining:
            return
        for letter in range(4):
            if letter == prev_inv:
                continue
            word[pos] = letter
            push(letter)
            rec(pos + 1)
            pop(letter)

    word[0] = 0
    push(0)
    rec(1)
    pop(0)
    return out


def _is_canonical(word: tuple[int, ...]) -> bool:
    """Minimal among all rotations of the word and of its inverse."""
    n = len(word)
    inv = tuple(_INV[t] for t in reversed(word))
    for k in range(n):
        if word[k:] + word[:k] < word and k:
            return False
        rot = inv[k:] + inv[:k]
        if rot < word:
            return False
    return True


@lru_cache(maxsize=None)
def _candidate_words(length: int) -> tuple[tuple[int, ...], ...]:
    return tuple(w for w in _wreath_trivial_words(length) if _is_canonical(w))


_LETTERS = "aAbB"


def _word_from_indices(indices: Iterable[int]) -> GroupWord:
    return parse_word("".join(_LETTERS[t] for t in indices))


def _trivial_indices(ctx: GroupCtx, indices: tuple[int, ...]) -> bool:
    segs: list[dict[int, int]] = [{}]
    deltas: list[int] = []
    for t in indices:
        if t < 2:
            deltas.append(1 if t == 0 else -1)
            segs.append({})
        else:
            seg = segs[-1]
            c = seg.get(0, 0) + (1 if t == 2 else -1)
            if c:
                seg[0] = c
            else:
                seg.pop(0, None)
    _reduce_alt(ctx, segs, deltas)
    return not deltas and not segs[0]


def shortest_distinguishing(
    g1: MarkedGroupSpec, g2: MarkedGroupSpec, max_len: int
) -> Optional[tuple[int, GroupWord]]:
    """The shortest (then lexicographically first canonical) word trivial
    in exactly one of the two groups, or None up to ``max_len``.

    When found, the marked-group distance is exactly e^(-length).
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    ctx1, ctx2 = GroupCtx(g1), GroupCtx(g2)
    for length in range(2, max_len + 1):
        for indices in _candidate_words(length):
            if _trivial_indices(ctx1, indices) != _trivial_indices(ctx2, indices):
                return length, _word_from_indices(indices)
    return None


# --- digit-stream comparison and distance bounds --------------------------------


def _seq_digits_all(spec: MarkedGroupSpec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    xi = spec.xi_norm
    if isinstance(xi, XiSeqPeriodic):
        return xi.preperiod, xi.period
    raise UndecidableSpec("finite digit sequences admit no full comparison")


def _streams_equal_exact(a: MarkedGroupSpec, b: MarkedGroupSpec) -> bool:
    """Decide r_i(a) = r_i(b) for every i, for fully described parameters.

    Integer/rational pairs agree exactly when their gcd with m matches and
    the parameters are equal as rationals (or the projected modulus is 1).
    A rational against an eventually periodic sequence agrees exactly when
    the digits match through preperiod plus one period and the companion
    s-state returns to its value one period earlier; periodic pairs agree
    when they match through both preperiods plus the period lcm.
    """
    if a.m_abs != b.m_abs:
        return False
    m = a.m_abs
    ka, kb = a.xi_norm, b.xi_norm
    if isinstance(ka, XiSeqFinite) or isinstance(kb, XiSeqFinite):
        raise UndecidableSpec("finite digit sequences admit no full comparison")
    da, db = gcd_with_m(a), gcd_with_m(b)
    if da != db:
        return False
    exact_a, exact_b = isinstance(ka, EXACT_KINDS), isinstance(kb, EXACT_KINDS)
    if exact_a and exact_b:
        if m // da == 1:
            return True
        return _xi_fraction(a) == _xi_fraction(b)
    if not exact_a and not exact_b:
        pre_a, per_a = _seq_digits_all(a)
        pre_b, per_b = _seq_digits_all(b)
        horizon = max(len(pre_a), len(pre_b)) + math.lcm(len(per_a), len(per_b))
        sa, sb = RDigitStream(a), RDigitStream(b)
        return all(sa.digit(i) == sb.digit(i) for i in range(1, horizon + 1))
    # mixed: rational versus eventually periodic sequence
    rat, seq = (a, b) if exact_a else (b, a)
    pre, per = _seq_digits_all(seq)
    if da == m:
        # gcd m forces the all-zero stream on both sides
        return all(d == 0 for d in pre + per)
    horizon = len(pre) + len(per)
    rs = RDigitStream(rat)
    ss = RDigitStream(seq)
    if any(rs.digit(i) != ss.digit(i) for i in range(1, horizon + 1)):
        return False
    # digits of a rational are periodic from len(pre) on exactly when the
    # s-state is fixed by one period step (denominators are coprime to m,
    # so any drift would force unbounded m-powers into them)
    return rs.s_value(len(pre)) == rs.s_value(len(pre) + len(per))


def _first_digit_difference(a: MarkedGroupSpec, b: MarkedGroupSpec) -> int:
    """1-based index of the first differing digit; raises SameGroup when
    the scan cannot find one."""
    sa, sb = RDigitStream(a), RDigitStream(b)
    finite_horizon = None
    for spec in (a, b):
        if isinstance(spec.xi_norm, XiSeqFinite):
            n = len(spec.xi_norm.digits)
            finite_horizon = n if finite_horizon is None else min(finite_horizon, n)
    if finite_horizon is None:
        if _streams_equal_exact(a, b):
            raise SameGroup("the digit streams agree at every index")
        i = 1
        while True:
            if sa.digit(i) != sb.digit(i):
                return i
            i += 1
    for i in range(1, finite_horizon + 1):
        if sa.digit(i) != sb.digit(i):
            return i
    raise SameGroup(
        f"no differing digit within the available {finite_horizon} digits"
    )


def distance_bounds(g1: MarkedGroupSpec, g2: MarkedGroupSpec) -> DistanceBounds:
    """The exact sandwich e^-(2(|m|+1)(h+1)+2|m|+6) <= d <= e^-(2h+1) for
    unit parameters over the same m, where h is the length of the common
    digit prefix."""
    if g1.m_abs != g2.m_abs:
        raise GcdMismatch("parameters live over different moduli")
    if gcd_with_m(g1) != 1 or gcd_with_m(g2) != 1:
        raise GcdMismatch("distance bounds need unit parameters")
    m = g1.m_abs
    h = _first_digit_difference(g1, g2) - 1
    return DistanceBounds(
        h=h,
        lower_exp=2 * (m + 1) * (h + 1) + 2 * m + 6,
        upper_exp=2 * h + 1,
    )


# --- isomorphism classification ---------------------------------------------------


def isomorphic(g1: MarkedGroupSpec, g2: MarkedGroupSpec) -> bool:
    """Abstract isomorphism test: |m| equal and the normalized digit
    streams agree at every index (which also characterizes marked
    isomorphism).  Finite digit prefixes are rejected as undecidable."""
    if isinstance(g1.xi_norm, XiSeqFinite) or isinstance(g2.xi_norm, XiSeqFinite):
        raise UndecidableSpec("finite digit sequences admit no full comparison")
    if g1.m_abs != g2.m_abs:
        return False
    return _streams_equal_exact(g1, g2)


# --- parameter recovery -------------------------------------------------------------


def word_problem_oracle(spec: MarkedGroupSpec) -> Callable[[GroupWord], bool]:
    """The triviality oracle of a decidable spec, for recovery tests."""
    ctx = GroupCtx(spec)
    return lambda w: is_trivial(ctx, w)


def recover_parameters(
    oracle: Callable[[GroupWord], bool], n: int, max_m: int = 64
) -> tuple[int, list[int]]:
    """Recover (|m|, first n digits) from a word-problem oracle alone.

    |m| is the least k >= 1 whose commutator word [a b^k a^-1, b] is
    trivial; each digit is the unique t whose probe word dies.  Raises
    OracleInconsistent when no candidate (or more than one) qualifies.
    """
    m_abs = None
    for k in range(1, max_m + 1):
        if oracle(v_k_word(k)):
            m_abs = k
            break
    if m_abs is None:
        raise OracleInconsistent(f"no commutator word trivial for k <= {max_m}")
    digits: list[int] = []
    for i in range(1, n + 1):
        hits = [
            t for t in range(m_abs) if oracle(win_e_word(m_abs, digits + [t]))
        ]
        if len(hits) != 1:
            raise OracleInconsistent(
                f"level {i}: {len(hits)} digit candidates qualified"
            )
        digits.append(hits[0])
    return m_abs, digits
