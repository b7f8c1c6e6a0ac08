"""Rank-two Frobenius modules: extensions of one rank-one module by another.

An extension is stored by its quotient line N (exponents s_i, scalar a), its
sub line P (exponents t_i, scalar b) and the off-diagonal parameters x_i.
On basis vectors the Frobenius acts by

    phi(e_{i-1}) = (b)_i u^{t_i} e_i
    phi(f_{i-1}) = (a)_i u^{s_i} f_i + x_i e_i

with the scalar inserted only at i = 0.  Morphisms are per-index 2x2 matrices
over F[u]; compatibility with phi is checked exactly, coefficient by
coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .field import FieldElem, FiniteField, UPoly, make_field, poly_phi
from .rankone import (
    ExtensionType,
    RankOneKisin,
    exceptional_case,
    hom_exists,
    hom_exponents,
    twist_rank_one,
)


@dataclass(frozen=True)
class PhiExtension:
    """Extension of quotient line N = (s; a) by sub line P = (t; b), parameters x_i."""

    quotient: RankOneKisin
    sub: RankOneKisin
    x: tuple[UPoly, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(self.x))
        if (self.quotient.p, self.quotient.f) != (self.sub.p, self.sub.f):
            raise ValueError("quotient and sub over different rings")
        if len(self.x) != self.quotient.f:
            raise ValueError("need one parameter per index")
        if any(si < 0 for si in self.quotient.r) or any(ti < 0 for ti in self.sub.r):
            raise ValueError("extension exponents must be effective (twist first)")

    @property
    def p(self) -> int:
        return self.quotient.p

    @property
    def f(self) -> int:
        return self.quotient.f

    @property
    def field(self) -> FiniteField:
        return self.quotient.a.field

    def s(self) -> tuple[int, ...]:
        return self.quotient.r

    def t(self) -> tuple[int, ...]:
        return self.sub.r


@dataclass(frozen=True)
class PhiMorphism:
    """Per-index matrices; column 0/1 = image of (e_i, f_i) in the (e'_i, f'_i) basis."""

    matrices: tuple[tuple[tuple[UPoly, UPoly], tuple[UPoly, UPoly]], ...]

    @classmethod
    def diagonal(cls, field: FiniteField, sub_exps: Sequence[int], quot_exps: Sequence[int]) -> "PhiMorphism":
        """e_i -> u^{sub_exps[i]} e'_i,  f_i -> u^{quot_exps[i]} f'_i."""
        zero = UPoly.zero(field)
        mats = []
        for ce, cf in zip(sub_exps, quot_exps):
            mats.append(
                (
                    (UPoly.monomial(field.one, ce), zero),
                    (zero, UPoly.monomial(field.one, cf)),
                )
            )
        return cls(tuple(mats))


def _scalar_at(c: FieldElem, i: int, f: int) -> FieldElem:
    return c if i % f == 0 else c.field.one


def check_phi_morphism(g: PhiMorphism, src: PhiExtension, dst: PhiExtension) -> bool:
    """Exact phi-equivariance check: all 4f polynomial identities."""
    f = src.f
    if dst.f != f or len(g.matrices) != f:
        raise ValueError("size mismatch")
    fld = src.field
    for i in range(f):
        A = g.matrices[i % f]
        B = g.matrices[(i - 1) % f]
        b_i = UPoly.constant(_scalar_at(src.sub.a, i, f))
        a_i = UPoly.constant(_scalar_at(src.quotient.a, i, f))
        bp_i = UPoly.constant(_scalar_at(dst.sub.a, i, f))
        ap_i = UPoly.constant(_scalar_at(dst.quotient.a, i, f))
        u_t = UPoly.monomial(fld.one, src.sub.r[i])
        u_s = UPoly.monomial(fld.one, src.quotient.r[i])
        u_tp = UPoly.monomial(fld.one, dst.sub.r[i])
        u_sp = UPoly.monomial(fld.one, dst.quotient.r[i])
        x_i = src.x[i]
        xp_i = dst.x[i]

        # image of phi(e_{i-1})
        lhs_e_e = b_i * u_t * A[0][0]
        lhs_e_f = b_i * u_t * A[1][0]
        rhs_e_e = poly_phi(B[0][0]) * bp_i * u_tp + poly_phi(B[1][0]) * xp_i
        rhs_e_f = poly_phi(B[1][0]) * ap_i * u_sp
        if lhs_e_e != rhs_e_e or lhs_e_f != rhs_e_f:
            return False

        # image of phi(f_{i-1})
        lhs_f_e = a_i * u_s * A[0][1] + x_i * A[0][0]
        lhs_f_f = a_i * u_s * A[1][1] + x_i * A[1][0]
        rhs_f_e = poly_phi(B[0][1]) * bp_i * u_tp + poly_phi(B[1][1]) * xp_i
        rhs_f_f = poly_phi(B[1][1]) * ap_i * u_sp
        if lhs_f_e != rhs_f_e or lhs_f_f != rhs_f_f:
            return False
    return True


def generically_invertible(g: PhiMorphism) -> bool:
    """Whether every per-index matrix has nonzero determinant (invertible after u is inverted)."""
    for A in g.matrices:
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        if det.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# normal-form constructor
# ---------------------------------------------------------------------------


def build_extension(
    ext: ExtensionType,
    x: Sequence[UPoly],
    d: int = 1,
    allow_exceptional: bool = True,
) -> PhiExtension:
    """Assemble the normal-form extension attached to an extension type.

    Parameters x_i must be constants supported on J away from r_i = 0.  In
    the exceptional case one parameter may additionally carry a degree-p term
    (or, if all r_i vanish, a single constant parameter anywhere is allowed).
    """
    f = ext.f
    if len(x) != f:
        raise ValueError("need one parameter per index")
    exceptional = allow_exceptional and exceptional_case(ext)
    all_zero = all(ri == 0 for ri in ext.r)
    extra_used = 0
    for i, xi in enumerate(x):
        if xi.is_zero():
            continue
        plain_slot = i in ext.J and ext.r[i] != 0
        if all_zero:
            if not exceptional:
                raise ValueError(f"parameter at {i} must vanish (split type)")
            if not xi.is_constant():
                raise ValueError(f"parameter at {i} must be constant")
            extra_used += 1
            continue
        if not plain_slot:
            raise ValueError(f"parameter at {i} must vanish (outside carrier or r_i = 0)")
        if xi.is_constant():
            continue
        degree_p_shape = (
            xi.degree() == ext.p
            and all(xi.coefficient(n).is_zero() for n in range(1, ext.p))
        )
        if exceptional and degree_p_shape:
            extra_used += 1
            continue
        raise ValueError(f"parameter at {i} is not in normal form")
    if extra_used > 1:
        raise ValueError("at most one exceptional parameter slot is allowed")
    quotient = RankOneKisin(ext.p, ext.quotient_exponents(), ext.a)
    sub = RankOneKisin(ext.p, ext.sub_exponents(), ext.b)
    return PhiExtension(quotient, sub, tuple(x))


# ---------------------------------------------------------------------------
# transports between extension groups
# ---------------------------------------------------------------------------


def transport_forward(
    M: PhiExtension, N_target: RankOneKisin, P_target: RankOneKisin
) -> tuple[PhiExtension, PhiMorphism]:
    """Push M along maps of both lines: quotient -> N_target, sub -> P_target.

    Requires maps on both lines and, wherever x_i is nonzero, a vanishing
    quotient twist exponent at i-1.  Returns the transported extension and
    the diagonal morphism witnessing it; phi-equivariance is re-checked.
    """
    N, P = M.quotient, M.sub
    if not hom_exists(N, N_target):
        raise ValueError("no map on the quotient line")
    if not hom_exists(P, P_target):
        raise ValueError("no map on the sub line")
    cN = hom_exponents(N, N_target)
    cP = hom_exponents(P, P_target)
    f = M.f
    for i in range(f):
        if not M.x[i].is_zero() and cN[(i - 1) % f] != 0:
            raise ValueError(f"obstructed at {i}: quotient twist exponent {cN[(i - 1) % f]} != 0")
    new_x = tuple(xi.shift(cP[i]) for i, xi in enumerate(M.x))
    M2 = PhiExtension(N_target, P_target, new_x)
    g = PhiMorphism.diagonal(M.field, cP, cN)
    if not check_phi_morphism(g, M, M2):
        raise AssertionError("transport produced a non-equivariant map")
    return M2, g


@dataclass(frozen=True)
class TransportReport:
    """Witness data for a reverse transport: the two line maps used."""

    sub_exponents: tuple[int, ...]  # map  sub(M) -> P_target
    quotient_exponents: tuple[int, ...]  # map  N_target -> quotient(M)
    combined: tuple[int, ...]  # parameter rescaling exponents per index


def transport_reverse(
    M: PhiExtension, N_target: RankOneKisin, P_target: RankOneKisin
) -> tuple[PhiExtension, TransportReport]:
    """Pull the quotient line back while pushing the sub line forward.

    Uses maps sub(M) -> P_target and N_target -> quotient(M); the parameter
    at index i is rescaled by u to the power  cP_i + p * cN_{i-1}.  Each
    parameter must be a constant or u times a constant.
    """
    N, P = M.quotient, M.sub
    if not hom_exists(P, P_target):
        raise ValueError("no map on the sub line")
    if not hom_exists(N_target, N):
        raise ValueError("no map into the quotient line")
    cP = hom_exponents(P, P_target)
    cN = hom_exponents(N_target, N)
    f = M.f
    for xi in M.x:
        if xi.is_zero() or xi.degree() == 0:
            continue
        if xi.degree() == 1 and xi.coefficient(0).is_zero():
            continue
        raise ValueError("parameters must be constants or u times constants")
    combined = tuple(cP[i] + M.p * cN[(i - 1) % f] for i in range(f))
    new_x = tuple(xi.shift(combined[i]) for i, xi in enumerate(M.x))
    M2 = PhiExtension(N_target, P_target, new_x)
    return M2, TransportReport(cP, cN, combined)


def twist_extension(M: PhiExtension, shift: Sequence[int], c: FieldElem) -> PhiExtension:
    """Tensor with the rank-one module of exponents ``shift`` and scalar c.

    Both diagonal exponents rise by shift_i and the parameter at i picks up
    (c)_i u^{shift_i}.
    """
    f = M.f
    if len(shift) != f:
        raise ValueError("shift length mismatch")
    if any(si < 0 for si in shift):
        raise ValueError("twist exponents must be >= 0")
    new_x = tuple(
        xi.shift(shift[i]).scale(_scalar_at(c, i, f)) for i, xi in enumerate(M.x)
    )
    return PhiExtension(
        twist_rank_one(M.quotient, shift, c),
        twist_rank_one(M.sub, shift, c),
        new_x,
    )
