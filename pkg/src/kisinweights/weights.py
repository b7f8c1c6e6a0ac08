"""Weights, their marked subsets, shift constructions and Hodge-Tate tables.

A weight is a pair of integer tuples (k, l) indexed by Z/f.  The indexing
convention is that applying inverse Frobenius to the embedding at index i
gives the embedding at index i+1.  The elementary shifts are

    h_i:  add p at index i+1 and -1 at index i
    th_i: add p at index i+1 and +1 at index i

The irregular inputs have some k_i = 1; the shift constructions below produce
regular companion weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .rankone import EmbeddingSet, ExtensionType, embedding_set
from .field import FieldElem


@dataclass(frozen=True)
class Weight:
    """A two-dimensional weight: integer tuples k (dominant part) and l (twist part)."""

    p: int
    k: tuple[int, ...]
    l: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", tuple(self.k))
        if not self.l:
            object.__setattr__(self, "l", (0,) * len(self.k))
        else:
            object.__setattr__(self, "l", tuple(self.l))
        if len(self.k) != len(self.l):
            raise ValueError("k and l must have equal length")

    @property
    def f(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class HTWeightTable:
    """Per-index pairs (b_1, b_2) of Hodge-Tate style exponents, b_1 >= b_2."""

    p: int
    rows: tuple[tuple[int, int], ...]

    @property
    def f(self) -> int:
        return len(self.rows)

    def gaps(self) -> tuple[int, ...]:
        return tuple(b1 - b2 for b1, b2 in self.rows)

    def in_range(self) -> bool:
        """Whether all gaps lie in [1, p] (liftable range)."""
        return all(1 <= g <= self.p for g in self.gaps())


def validate_irregular(w: Weight) -> None:
    """Check that w = (k, 0) is a valid irregular input weight.

    Requires 1 <= k_i <= p, at least one k_i = 1, not all k_i = 1, l = 0, and
    no index with k_i = 2 immediately followed (index i+1) by k_{i+1} = 1.
    """
    p, k, f = w.p, w.k, w.f
    if any(li != 0 for li in w.l):
        raise ValueError("irregular input weights must have l = 0 (normalize the twist first)")
    if any(not 1 <= ki <= p for ki in k):
        raise ValueError(f"entries of k must lie in [1, {p}]")
    if all(ki == 1 for ki in k):
        raise ValueError("k = (1, ..., 1) is excluded")
    if all(ki != 1 for ki in k):
        raise ValueError("weight is regular (no k_i = 1)")
    for i in range(f):
        if k[i] == 2 and k[(i + 1) % f] == 1:
            raise ValueError(f"forbidden (2,1) pattern at index {i}")


def is_regular(w: Weight) -> bool:
    return all(ki >= 2 for ki in w.k)


def set_J0(w: Weight) -> EmbeddingSet:
    """Indices where k is 1."""
    return frozenset(i for i, ki in enumerate(w.k) if ki == 1)


def set_M(w: Weight) -> EmbeddingSet:
    """Indices from which a (possibly empty) chain of 2s leads to a 1.

    i is in M when k_{i+1} = ... = k_{i+s-1} = 2 and k_{i+s} = 1 for some
    s >= 1.
    """
    k, f = w.k, w.f
    out = set()
    for i in range(f):
        j = (i + 1) % f
        steps = 0
        while k[j] == 2 and steps < f:
            j = (j + 1) % f
            steps += 1
        if k[j] == 1 and steps < f:
            out.add(i)
    return frozenset(out)


def set_Mtilde(w: Weight) -> EmbeddingSet:
    """The marked subset receiving the theta-shift.

    Either k_i >= 3 with i in M, or k_i = 2 just before a 1 (at index i+1)
    such that walking backwards through 2s from i reaches a 1 (so the whole
    non-1 stretch above i consists of 2s).
    """
    k, f = w.k, w.f
    M = set_M(w)
    out = set()
    for i in range(f):
        if k[i] >= 3 and i in M:
            out.add(i)
        elif k[i] == 2 and k[(i + 1) % f] == 1:
            j = (i - 1) % f
            steps = 0
            while k[j] == 2 and steps < f:
                j = (j - 1) % f
                steps += 1
            if k[j] == 1 and steps < f:
                out.add(i)
    return frozenset(out)


def set_Mtilde2(w: Weight) -> EmbeddingSet:
    """Mtilde enlarged by indices whose successor is a 2 inside Mtilde."""
    k, f = w.k, w.f
    Mt = set_Mtilde(w)
    out = set(Mt)
    for i in range(f):
        j = (i + 1) % f
        if j in Mt and k[j] == 2:
            out.add(i)
    return frozenset(out)


def _apply_h(k: list[int], i: int, f: int, p: int) -> None:
    k[(i + 1) % f] += p
    k[i] -= 1


def _apply_theta(k: list[int], i: int, f: int, p: int) -> None:
    k[(i + 1) % f] += p
    k[i] += 1


def weight_kprime(w: Weight) -> Weight:
    """The base companion weight: apply h at every index of M."""
    k = list(w.k)
    for i in set_M(w):
        _apply_h(k, i, w.f, w.p)
    return Weight(w.p, tuple(k), w.l)


def weight_kmu(w: Weight, mu: int) -> Weight:
    """The companion weight marked at mu in Mtilde: theta at mu, h on M minus mu."""
    mu %= w.f
    if mu not in set_Mtilde(w):
        raise ValueError(f"index {mu} is not marked")
    k = list(w.k)
    _apply_theta(k, mu, w.f, w.p)
    for i in set_M(w) - {mu}:
        _apply_h(k, i, w.f, w.p)
    l = list(w.l)
    l[mu] -= 1
    return Weight(w.p, tuple(k), tuple(l))


def weight_ktheta(w: Weight, alternative: bool = False) -> Weight:
    """The fully marked companion weight: theta on Mtilde, h on the rest of M.

    With ``alternative`` the h-shifts are skipped on all of Mtilde2 instead of
    just Mtilde.
    """
    k = list(w.k)
    Mt = set_Mtilde(w)
    skip = set_Mtilde2(w) if alternative else Mt
    for i in Mt:
        _apply_theta(k, i, w.f, w.p)
    for i in set_M(w) - set(skip):
        _apply_h(k, i, w.f, w.p)
    l = list(w.l)
    for i in Mt:
        l[i] -= 1
    return Weight(w.p, tuple(k), tuple(l))


def normalize_twist(w: Weight) -> tuple[Weight, tuple[int, ...]]:
    """Split off the twist: return ((k, 0), l)."""
    return Weight(w.p, w.k), w.l


# ---------------------------------------------------------------------------
# Hodge-Tate tables
# ---------------------------------------------------------------------------


def ht_table(w: Weight) -> HTWeightTable:
    """Exponent pairs (k_i + l_i - 1, l_i) per index."""
    return HTWeightTable(w.p, tuple((ki + li - 1, li) for ki, li in zip(w.k, w.l)))


def bprime_table(w: Weight) -> HTWeightTable:
    """Closed form of ht_table(weight_kprime(w)) for a valid irregular w."""
    p, k = w.p, w.k
    J0, M, Mt = set_J0(w), set_M(w), set_Mtilde(w)
    rows = []
    for i, ki in enumerate(k):
        if i in Mt:
            b1 = ki - 2
        elif i in J0 and i in M:
            b1 = p - 1
        elif i in J0:
            b1 = p
        elif i not in M:
            b1 = ki - 1
        else:
            raise ValueError("weight outside the valid irregular range")
        rows.append((b1, 0))
    return HTWeightTable(p, tuple(rows))


def bmu_table(w: Weight, mu: int) -> HTWeightTable:
    """Closed form of ht_table(weight_kmu(w, mu)) for a valid irregular w."""
    p, k, f = w.p, w.k, w.f
    mu %= f
    J0, M, Mt = set_J0(w), set_M(w), set_Mtilde(w)
    if mu not in Mt:
        raise ValueError(f"index {mu} is not marked")
    rows = []
    for i, ki in enumerate(k):
        b2 = -1 if i == mu else 0
        if i == mu:
            b1 = ki - 1
        elif i in Mt:
            b1 = ki - 2
        elif i in J0 and i in M:
            b1 = p - 1
        elif i in J0:
            b1 = p
        elif i not in M:
            b1 = ki - 1
        else:
            raise ValueError("weight outside the valid irregular range")
        rows.append((b1, b2))
    return HTWeightTable(p, tuple(rows))


def btheta_table(w: Weight) -> HTWeightTable:
    """Closed form of ht_table(weight_ktheta(w)) for a valid irregular w."""
    p, k = w.p, w.k
    J0, M, Mt = set_J0(w), set_M(w), set_Mtilde(w)
    rows = []
    for i, ki in enumerate(k):
        b2 = -1 if i in Mt else 0
        if i in J0 and i in M:
            b1 = p - 1
        elif i in J0:
            b1 = p
        else:
            b1 = ki - 1
        rows.append((b1, b2))
    return HTWeightTable(p, tuple(rows))


def st_sequences(
    table: HTWeightTable, J: Sequence[int] | EmbeddingSet
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a table along a carrier set: s picks b_1 on J, t the complement."""
    Jset = embedding_set(table.f, J)
    s = tuple(b1 if i in Jset else b2 for i, (b1, b2) in enumerate(table.rows))
    t = tuple(b2 if i in Jset else b1 for i, (b1, b2) in enumerate(table.rows))
    return s, t


def extension_type_of(
    table: HTWeightTable, J: Sequence[int] | EmbeddingSet, a: FieldElem, b: FieldElem
) -> ExtensionType:
    """Extension type with r_i = b_1 - b_2 and the given carrier set.

    Only valid when the table has b_2 = 0 everywhere (untwisted); otherwise
    twist first so that the exponents are effective.
    """
    if any(b2 != 0 for _, b2 in table.rows):
        raise ValueError("table is twisted; normalize before building a type")
    r = tuple(b1 for b1, _ in table.rows)
    return ExtensionType(table.p, r, a, b, embedding_set(table.f, J))


# ---------------------------------------------------------------------------
# block decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """A maximal cyclic run of non-1 entries followed by its run of 1s."""

    indices: tuple[int, ...]  # cyclically consecutive
    head: tuple[int, ...]  # the non-1 part
    tail: tuple[int, ...]  # the k = 1 part
    nu: int  # last index of the head (the marked element for valid weights)


@dataclass(frozen=True)
class BlockDecomposition:
    f: int
    blocks: tuple[Block, ...]

    def block_of(self, i: int) -> Block:
        i %= self.f
        for blk in self.blocks:
            if i in blk.indices:
                return blk
        raise KeyError(i)


def blocks(w: Weight) -> BlockDecomposition:
    """Cyclic block decomposition of an irregular weight.

    Requires at least one 1 and one non-1 entry; blocks partition Z/f.
    """
    k, f = w.k, w.f
    if all(ki == 1 for ki in k) or all(ki != 1 for ki in k):
        raise ValueError("block decomposition needs both 1 and non-1 entries")
    starts = [i for i in range(f) if k[i] != 1 and k[(i - 1) % f] == 1]
    starts.sort()
    out = []
    for n, start in enumerate(starts):
        nxt = starts[(n + 1) % len(starts)]
        length = (nxt - start) % f or f
        idxs = tuple((start + j) % f for j in range(length))
        head = tuple(i for i in idxs if k[i] != 1)
        tail = tuple(i for i in idxs if k[i] == 1)
        out.append(Block(idxs, head, tail, head[-1]))
    return BlockDecomposition(f, tuple(out))
