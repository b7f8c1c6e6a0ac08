"""Rank-one Frobenius modules over F[u] and their hom/extension combinatorics.

A rank-one module is determined by an exponent tuple r = (r_0, ..., r_{f-1})
and a scalar a: on the i-th basis vector the Frobenius acts with a power
u^{r_i}, with the scalar inserted once per cycle.  The slope invariants
alpha_i are exact rationals; maps between rank-one modules exist exactly when
all slope differences are non-negative integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence

from .chars import InertialChar, char_of_exponents
from .field import Context, FieldElem

EmbeddingSet = frozenset  # subsets of Z/f, stored as frozensets of ints


def embedding_set(f: int, members: Iterable[int]) -> EmbeddingSet:
    """Normalize an iterable of indices into a subset of Z/f."""
    return frozenset(i % f for i in members)


@dataclass(frozen=True)
class RankOneKisin:
    """Rank-one module: exponents r_i and a unit scalar a."""

    p: int
    r: tuple[int, ...]
    a: FieldElem

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", tuple(self.r))
        if len(self.r) < 1:
            raise ValueError("need at least one exponent")
        if self.a.is_zero():
            raise ValueError("scalar must be a unit")

    @property
    def f(self) -> int:
        return len(self.r)


@dataclass(frozen=True)
class ExtensionType:
    """Shape data of a rank-two extension: exponents r, scalars (a, b), carrier set J.

    The quotient line carries exponents r_i for i in J (zero outside) and
    scalar a; the sub line carries the complementary exponents and scalar b.
    """

    p: int
    r: tuple[int, ...]
    a: FieldElem
    b: FieldElem
    J: EmbeddingSet

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", tuple(self.r))
        object.__setattr__(self, "J", embedding_set(len(self.r), self.J))

    @property
    def f(self) -> int:
        return len(self.r)

    def quotient_exponents(self) -> tuple[int, ...]:
        return tuple(ri if i in self.J else 0 for i, ri in enumerate(self.r))

    def sub_exponents(self) -> tuple[int, ...]:
        return tuple(0 if i in self.J else ri for i, ri in enumerate(self.r))

    def quotient(self) -> RankOneKisin:
        return RankOneKisin(self.p, self.quotient_exponents(), self.a)

    def sub(self) -> RankOneKisin:
        return RankOneKisin(self.p, self.sub_exponents(), self.b)


# ---------------------------------------------------------------------------
# slopes
# ---------------------------------------------------------------------------


def alpha_seq(p: int, r: Sequence[int], i: int) -> Fraction:
    """Exact slope alpha_i = (sum_{j=1}^{f} p^{f-j} r_{j+i}) / (p^f - 1)."""
    f = len(r)
    num = sum(p ** (f - j) * r[(j + i) % f] for j in range(1, f + 1))
    return Fraction(num, p**f - 1)


def alpha(N: RankOneKisin, i: int) -> Fraction:
    """Slope invariant of a rank-one module at index i."""
    return alpha_seq(N.p, N.r, i)


def alpha_diff(N1: RankOneKisin, N2: RankOneKisin, i: int) -> Fraction:
    """Slope difference alpha_i(N1) - alpha_i(N2); the i-th twist exponent of a map N1 -> N2."""
    if (N1.p, N1.f) != (N2.p, N2.f):
        raise ValueError("modules over different rings")
    return alpha(N1, i) - alpha(N2, i)


def hom_exists(N1: RankOneKisin, N2: RankOneKisin) -> bool:
    """Whether a nonzero map N1 -> N2 exists: equal scalars, all slope diffs in Z_{>=0}."""
    if (N1.p, N1.f) != (N2.p, N2.f):
        raise ValueError("modules over different rings")
    if N1.a != N2.a:
        return False
    for i in range(N1.f):
        d = alpha_diff(N1, N2, i)
        if d.denominator != 1 or d < 0:
            return False
    return True


def hom_exponents(N1: RankOneKisin, N2: RankOneKisin) -> tuple[int, ...]:
    """Twist exponents of the (unique up to scalar) map N1 -> N2; raises if none exists."""
    if not hom_exists(N1, N2):
        raise ValueError("no nonzero map exists")
    return tuple(int(alpha_diff(N1, N2, i)) for i in range(N1.f))


def inertial_char(ctx: Context, N: RankOneKisin) -> InertialChar:
    """Generic-fibre inertial character of a rank-one module."""
    if (ctx.p, ctx.f) != (N.p, N.f):
        raise ValueError("context mismatch")
    return char_of_exponents(ctx, N.r)


def tS_iso(ctx: Context, N1: RankOneKisin, N2: RankOneKisin) -> bool:
    """Isomorphism after inverting u: same scalar and same inertial character."""
    return N1.a == N2.a and inertial_char(ctx, N1) == inertial_char(ctx, N2)


def twist_rank_one(N: RankOneKisin, shift: Sequence[int], c: FieldElem) -> RankOneKisin:
    """Tensor with the rank-one module of exponents ``shift`` and scalar c."""
    if len(shift) != N.f:
        raise ValueError("shift length mismatch")
    return RankOneKisin(N.p, tuple(ri + si for ri, si in zip(N.r, shift)), N.a * c)


# ---------------------------------------------------------------------------
# the admissible exponent set and the cyclic-string decomposition
# ---------------------------------------------------------------------------


def in_Pprime(p: int, r: Sequence[int]) -> bool:
    """Membership in the admissible exponent patterns.

    Entries lie in {0, 1, p-1, p}; a p is followed by 0 or 1; a 1 or p-1 is
    followed by p-1 or p; and every (cyclic) run of zeros is immediately
    preceded by p and followed by 1 -- unless the tuple is identically zero.
    """
    f = len(r)
    r = tuple(r)
    if any(ri not in (0, 1, p - 1, p) for ri in r):
        return False
    if all(ri == 0 for ri in r):
        return True
    for i, ri in enumerate(r):
        nxt = r[(i + 1) % f]
        if ri == p and nxt not in (0, 1):
            return False
        if ri in (1, p - 1) and nxt not in (p - 1, p):
            return False
        if ri == 0:
            j = (i + 1) % f
            while r[j] == 0:
                j = (j + 1) % f
            if r[j] != 1:
                return False
            j = (i - 1) % f
            while r[j] == 0:
                j = (j - 1) % f
            if r[j] != p:
                return False
    return True


def weighted_sum(p: int, r: Sequence[int]) -> int:
    """sum r_i p^(f-1-i)."""
    f = len(r)
    return sum(ri * p ** (f - 1 - i) for i, ri in enumerate(r))


@dataclass(frozen=True)
class CyclicString:
    """A cyclic interval [start, start+length) carrying one of the basic patterns.

    kind "signed" with sign +1 is the pattern (-1, p-1, ..., p-1, p); sign -1
    is its negative; kind "zero" is a run of zeros.
    """

    kind: Literal["signed", "zero"]
    sign: int
    start: int
    length: int

    def indices(self, f: int) -> tuple[int, ...]:
        return tuple((self.start + k) % f for k in range(self.length))

    def values(self, p: int) -> tuple[int, ...]:
        if self.kind == "zero":
            return (0,) * self.length
        vals = [-1] + [p - 1] * (self.length - 2) + [p]
        return tuple(self.sign * v for v in vals)


@dataclass(frozen=True)
class CyclicDecomposition:
    """Result of decomposing a congruent exponent tuple."""

    p: int
    f: int
    flag_sign: Optional[int]  # +1/-1 for the constant (p-1, ..., p-1) tuples
    strings: tuple[CyclicString, ...]

    def recompose(self) -> tuple[int, ...]:
        if self.flag_sign is not None:
            return (self.flag_sign * (self.p - 1),) * self.f
        out = [None] * self.f
        for s in self.strings:
            for idx, val in zip(s.indices(self.f), s.values(self.p)):
                if out[idx] is not None:
                    raise ValueError("overlapping strings")
                out[idx] = val
        if any(v is None for v in out):
            raise ValueError("strings do not cover the cycle")
        return tuple(out)


def decompose_cyclic(p: int, r: Sequence[int]) -> CyclicDecomposition:
    """Decompose r in [-p, p]^f with weighted sum divisible by p^f - 1.

    The result is either a constant +/-(p-1) flag or a disjoint cyclic cover
    by signed strings (-1, p-1, ..., p-1, p) and runs of zeros.
    """
    f = len(r)
    r = tuple(r)
    if any(abs(ri) > p for ri in r):
        raise ValueError("entries must lie in [-p, p]")
    if weighted_sum(p, r) % (p**f - 1) != 0:
        raise ValueError("weighted sum not divisible by p^f - 1")

    if all(ri == p - 1 for ri in r):
        return CyclicDecomposition(p, f, +1, ())
    if all(ri == -(p - 1) for ri in r):
        return CyclicDecomposition(p, f, -1, ())
    if all(ri == 0 for ri in r):
        return CyclicDecomposition(p, f, None, (CyclicString("zero", +1, 0, f),))

    covered = [False] * f
    strings: list[CyclicString] = []
    for i, ri in enumerate(r):
        sign = {-1: +1, +1: -1}.get(ri)
        if sign is None:
            continue
        # walk the (sign-adjusted) interior p-1 entries to the closing p
        length = 1
        j = (i + 1) % f
        while length < f and r[j] == sign * (p - 1):
            j = (j + 1) % f
            length += 1
        if length >= f or r[j] != sign * p:
            raise ValueError(f"no closing entry for string starting at {i}")
        length += 1
        strings.append(CyclicString("signed", sign, i, length))
        for k in range(length):
            idx = (i + k) % f
            if covered[idx]:
                raise ValueError("overlapping strings")
            covered[idx] = True

    # remaining entries must be zero runs
    for i in range(f):
        if not covered[i] and r[i] != 0:
            raise ValueError(f"entry {r[i]} at {i} not covered by any pattern")
    zeros_marked = [False] * f
    for i in range(f):
        if covered[i] or zeros_marked[i]:
            continue
        # extend the zero run backwards to its cyclic start
        start = i
        while r[(start - 1) % f] == 0 and not covered[(start - 1) % f] and (start - 1) % f != i:
            start = (start - 1) % f
        length = 0
        j = start
        while not covered[j] and r[j] == 0 and length < f:
            zeros_marked[j] = True
            length += 1
            j = (j + 1) % f
        strings.append(CyclicString("zero", +1, start, length))

    dec = CyclicDecomposition(p, f, None, tuple(strings))
    if dec.recompose() != r:
        raise AssertionError("decomposition failed to recompose")
    return dec


# ---------------------------------------------------------------------------
# extension-type combinatorics
# ---------------------------------------------------------------------------


def necessary_map_conditions(p: int, r: Sequence[int], J: Iterable[int]) -> bool:
    """Necessary shape conditions for a map out of the split type to exist.

    r must be an admissible pattern, every index with r_i in {p-1, p} must lie
    in J, and no index with r_i = 1 may lie in J.
    """
    f = len(r)
    Jset = embedding_set(f, J)
    if not in_Pprime(p, r):
        return False
    for i, ri in enumerate(r):
        if ri in (p - 1, p) and i not in Jset:
            return False
        if ri == 1 and i in Jset:
            return False
    return True


def exceptional_case(ext: ExtensionType) -> bool:
    """Whether the extension space picks up the extra (degree-p) parameter."""
    return necessary_map_conditions(ext.p, ext.r, ext.J) and ext.a == ext.b


def carrier_weight(p: int, r: Sequence[int], J: Iterable[int]) -> int:
    """Weighted sum of r restricted to J, mod p^f - 1."""
    f = len(r)
    Jset = embedding_set(f, J)
    return weighted_sum(p, [ri if i in Jset else 0 for i, ri in enumerate(r)]) % (p**f - 1)


def _boundary_string_ok(p: int, r: tuple[int, ...], J: EmbeddingSet) -> bool:
    """No string (1, p-1, ..., p-1, p) may sit with its head in J and tail disjoint from J."""
    f = len(r)
    for i in range(f):
        if r[i] != 1:
            continue
        for s in range(1, f):
            if all(r[(i + k) % f] == p - 1 for k in range(1, s)) and r[(i + s) % f] == p:
                tail = {(i + k) % f for k in range(1, s + 1)}
                if i in J and not (tail & J):
                    return False
            if r[(i + s) % f] != p - 1:
                break
    return True


def jmax(p: int, r: Sequence[int], J: Iterable[int]) -> EmbeddingSet:
    """Canonical carrier set with the same weighted restriction as J.

    Among subsets with the same weight, the canonical one avoids indices with
    r_i = 0 and orients every boundary string (1, p-1, ..., p) with its head
    outside and its tail inside.
    """
    f = len(r)
    r = tuple(r)
    Jset = embedding_set(f, J)
    target = carrier_weight(p, r, Jset)
    found: list[EmbeddingSet] = []
    for mask in range(1 << f):
        cand = frozenset(i for i in range(f) if mask >> i & 1)
        if any(r[i] == 0 for i in cand):
            continue
        if carrier_weight(p, r, cand) != target:
            continue
        if not _boundary_string_ok(p, r, cand):
            continue
        found.append(cand)
    if len(found) != 1:
        raise ValueError(f"expected a unique canonical carrier, found {len(found)}")
    return found[0]
