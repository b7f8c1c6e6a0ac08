"""Procedures over the quadratic index frame (2f embedding indices).

After a quadratic unramified base change the f embedding indices double to
2f; index q projects to q mod f and the Frobenius shift still acts by +1.  A
subset of Z/2f is *balanced* when it contains exactly one of the two lifts
{i, i+f} of every index i.  A carrier set J together with a table of exponent
pairs determines a character exponent modulo p^{2f} - 1; balanced carriers
are the ones whose two induced characters form a conjugate (p^f-power) pair.

This module provides the rebalancing algorithm turning an arbitrary carrier
with conjugate-symmetric characters into a balanced one, the forward carrier
rewritings from an irregular weight to its regular companion weights, the
backward reconstruction, and the exhaustive equivalence audit over niveau-2
character exponents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .matching import DichotomyError
from .rankone import decompose_cyclic
from .weights import (
    HTWeightTable,
    Weight,
    blocks,
    bmu_table,
    bprime_table,
    btheta_table,
    ht_table,
    is_regular,
    set_J0,
    set_Mtilde,
    validate_irregular,
)

QuadSet = frozenset


def quad_set(f: int, elems: Iterable[int]) -> QuadSet:
    out = frozenset(q % (2 * f) for q in elems)
    return out


def is_balanced(f: int, J: Iterable[int]) -> bool:
    """Whether J contains exactly one of {i, i+f} for every i in Z/f."""
    Jset = quad_set(f, J)
    return all(((i in Jset) + ((i + f) in Jset)) == 1 for i in range(f))


def balanced_sets(f: int) -> Iterable[QuadSet]:
    """All 2^f balanced subsets of Z/2f."""
    for picks in itertools.product((0, 1), repeat=f):
        yield frozenset(i + f * b for i, b in zip(range(f), picks))


def char_exponent(table: HTWeightTable, J: Iterable[int]) -> int:
    """Exponent mod p^{2f}-1 of the character cut out by the carrier J.

    Index q carries the first table entry of q mod f when q is in J and the
    second otherwise, weighted by p^{2f-1-q}.
    """
    p, f = table.p, table.f
    mod = p ** (2 * f) - 1
    Jset = quad_set(f, J)
    total = 0
    for q in range(2 * f):
        b1, b2 = table.rows[q % f]
        total += (b1 if q in Jset else b2) * p ** (2 * f - 1 - q)
    return total % mod


def complement_exponent(table: HTWeightTable, J: Iterable[int]) -> int:
    """Exponent of the opposite character (table entries swapped on J)."""
    f = table.f
    Jset = quad_set(f, J)
    return char_exponent(table, frozenset(range(2 * f)) - Jset)


def induced_pair(table: HTWeightTable, J: Iterable[int]) -> frozenset[int]:
    """Unordered pair of the two character exponents cut out by J."""
    return frozenset((char_exponent(table, J), complement_exponent(table, J)))


def conjugate_symmetric(table: HTWeightTable, J: Iterable[int]) -> bool:
    """Whether the two characters of J are p^f-power conjugates of each other.

    This is the necessary symmetry for the pair to come from a base change:
    e_s = p^f * e_t mod p^{2f}-1.  Every balanced carrier satisfies it.
    """
    p, f = table.p, table.f
    mod = p ** (2 * f) - 1
    e_s = char_exponent(table, J)
    e_t = complement_exponent(table, J)
    return (e_s - e_t * p**f) % mod == 0


def rebalance(table: HTWeightTable, J: Iterable[int]) -> QuadSet:
    """Turn a conjugate-symmetric carrier into a balanced one, same pair.

    Strips the indices whose two table entries coincide, cancels the
    imbalance (both lifts in / both lifts out) by flipping consecutive runs
    of lifts found through the cyclic string decomposition of the gap vector,
    then re-adds one lift per stripped index.  Fails when the gap vector has
    no zero entry and decomposes as a constant run: that happens exactly when
    the character pair is Frobenius-stable (a split configuration), and then
    no balanced carrier induces the same pair.
    """
    p, f = table.p, table.f
    Jset = quad_set(f, J)
    if not conjugate_symmetric(table, Jset):
        raise ValueError("carrier characters are not a conjugate pair")
    if is_balanced(f, Jset):
        return Jset

    equal_rows = {i for i in range(f) if table.rows[i][0] == table.rows[i][1]}
    work = {q for q in Jset if q % f not in equal_rows}

    x = []
    for i in range(f):
        gap = table.rows[i][0] - table.rows[i][1]
        both = i in work and (i + f) in work
        neither = i not in work and (i + f) not in work
        if both:
            x.append(gap)
        elif neither:
            x.append(-gap)
        else:
            x.append(0)

    if any(xi != 0 for xi in x):
        dec = decompose_cyclic(p, tuple(x))
        if dec.flag_sign is not None:
            raise ValueError(
                "character pair is Frobenius-stable; no balanced carrier preserves it"
            )
        for s in dec.strings:
            if s.kind == "zero":
                continue
            for k in range(s.length):
                q = (s.start + k) % (2 * f)
                work.symmetric_difference_update({q})

    for i in sorted(equal_rows):
        if i not in work and (i + f) not in work:
            work.add(i)

    out = frozenset(work)
    if not is_balanced(f, out):
        raise AssertionError("rebalancing did not produce a balanced carrier")
    if induced_pair(table, out) != induced_pair(table, Jset):
        raise AssertionError("rebalancing changed the induced character pair")
    return out


# ---------------------------------------------------------------------------
# forward carrier rewriting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForwardWitnesses:
    """Balanced carriers realizing each regular companion weight."""

    base: QuadSet
    mus: Mapping[int, QuadSet]
    theta: QuadSet


def _lift_in(J: QuadSet, i: int, f: int) -> int:
    """The lift of index i that lies in the balanced carrier J."""
    return i if i in J else i + f


def _witness(w: Weight, J: QuadSet, opposite_tail_at: frozenset[int]) -> QuadSet:
    """Carrier for a companion table: on each block's trailing k=1 run, take
    the lifts following the marked element's in-J lift (or the opposite lift
    for the blocks listed in ``opposite_tail_at``)."""
    f = w.f
    J0 = set_J0(w)
    out = {q for q in J if q % f not in J0}
    for blk in blocks(w).blocks:
        anchor = _lift_in(J, blk.nu, f)
        if blk.nu in opposite_tail_at:
            anchor = (anchor + f) % (2 * f)
        for n in range(1, len(blk.tail) + 1):
            out.add((anchor + n) % (2 * f))
    return frozenset(out)


def irr_forward(w: Weight, J: Iterable[int]) -> ForwardWitnesses:
    """Balanced carriers for the companion weights of an irregular weight.

    Each returned carrier induces exactly the same character pair on its
    companion table as J does on the table of w.  For a regular weight the
    rewriting is the identity.
    """
    f = w.f
    Jset = quad_set(f, J)
    if not is_balanced(f, Jset):
        raise ValueError("carrier must be balanced")
    if is_regular(w):
        return ForwardWitnesses(Jset, {}, Jset)
    validate_irregular(w)

    base = _witness(w, Jset, frozenset())
    mus = {
        mu: _witness(w, Jset, frozenset({mu})) for mu in sorted(set_Mtilde(w))
    }
    theta = _witness(w, Jset, frozenset(set_Mtilde(w)))

    source_pair = induced_pair(ht_table(w), Jset)
    for table, Jw in (
        (bprime_table(w), base),
        *((bmu_table(w, mu), mus[mu]) for mu in mus),
        (btheta_table(w), theta),
    ):
        if not is_balanced(f, Jw):
            raise AssertionError("forward carrier is not balanced")
        if induced_pair(table, Jw) != source_pair:
            raise AssertionError("forward carrier changed the character pair")
    return ForwardWitnesses(base, mus, theta)


# ---------------------------------------------------------------------------
# backward reconstruction
# ---------------------------------------------------------------------------


def _check_quad_dichotomy(w: Weight, Jprime: QuadSet) -> None:
    """Each lift of a marked element must agree with the lifts of its block's
    trailing k=1 run: all in or all out of the base carrier."""
    f = w.f
    for blk in blocks(w).blocks:
        m = len(blk.tail)
        for q in (blk.nu, blk.nu + f):
            inside = q in Jprime
            for n in range(1, m + 1):
                if (((q + n) % (2 * f)) in Jprime) != inside:
                    raise DichotomyError(
                        f"lift {q} of marked index {blk.nu} disagrees with its trailing run"
                    )


def irr_backward(
    w: Weight,
    Jprime: Iterable[int],
    mus: Optional[Mapping[int, Iterable[int]]] = None,
    theta: Optional[Iterable[int]] = None,
) -> QuadSet:
    """Reconstruct a balanced carrier for the irregular weight.

    Takes the base companion's carrier plus either the per-marked-index
    carriers or the fully marked one.  Verifies the pairwise character
    congruences mod p^{2f}-1 and the block dichotomy, then returns a carrier
    for w agreeing with the base carrier away from the k=1 indices.
    """
    validate_irregular(w)
    f = w.f
    Jp = quad_set(f, Jprime)
    if not is_balanced(f, Jp):
        raise ValueError("base carrier must be balanced")
    if (mus is None) == (theta is None):
        raise ValueError("provide exactly one of mus or theta")
    _check_quad_dichotomy(w, Jp)

    base_table = bprime_table(w)
    base_pair = induced_pair(base_table, Jp)
    if mus is not None:
        marked = set_Mtilde(w)
        if set(mus) != set(marked):
            raise ValueError("need one carrier per marked index")
        companions = [(bmu_table(w, mu), quad_set(f, Jmu)) for mu, Jmu in mus.items()]
    else:
        companions = [(btheta_table(w), quad_set(f, theta))]
    for table, Jc in companions:
        if not is_balanced(f, Jc):
            raise ValueError("companion carriers must be balanced")
        if induced_pair(table, Jc) != base_pair:
            raise ValueError("companion carrier induces a different character pair")

    out = Jp
    if induced_pair(ht_table(w), out) != base_pair:
        raise AssertionError("reconstructed carrier changed the character pair")
    return out


# ---------------------------------------------------------------------------
# equivalence audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IrrEquivalenceReport:
    p: int
    f: int
    k: tuple[int, ...]
    checked: int
    counterexamples: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _achievable(table: HTWeightTable) -> frozenset[int]:
    return frozenset(char_exponent(table, J) for J in balanced_sets(table.f))


def irr_equivalence_audit(w: Weight) -> IrrEquivalenceReport:
    """Exhaustive equivalence over niveau-2 character exponents.

    For every exponent e mod p^{2f}-1 whose conjugate p^f * e differs from e,
    check: a balanced carrier for the irregular table hits {e, p^f e} iff the
    base table and the fully marked table both do, iff the base table and
    every per-marked-index table do.
    """
    validate_irregular(w)
    p, f = w.p, w.f
    mod = p ** (2 * f) - 1

    A_irr = _achievable(ht_table(w))
    A_base = _achievable(bprime_table(w))
    A_theta = _achievable(btheta_table(w))
    A_mus = [_achievable(bmu_table(w, mu)) for mu in sorted(set_Mtilde(w))]

    def hits(A: frozenset[int], e: int) -> bool:
        return e in A or (e * p**f) % mod in A

    bad = []
    checked = 0
    for e in range(mod):
        if (e * p**f - e) % mod == 0:
            continue
        checked += 1
        has_irr = hits(A_irr, e)
        has_theta_route = hits(A_base, e) and hits(A_theta, e)
        has_mu_route = hits(A_base, e) and all(hits(A, e) for A in A_mus)
        if not (has_irr == has_theta_route == has_mu_route):
            bad.append(e)
    return IrrEquivalenceReport(p, f, w.k, checked, tuple(bad))
