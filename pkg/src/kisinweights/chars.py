"""Tame inertial characters as exponent classes.

A niveau-n character (n = 1 or 2) is determined by an exponent modulo
p^(nf) - 1 with respect to the fundamental character of level nf.  The
embedding indexing follows the convention that applying inverse Frobenius
moves the index up by one, so the character with exponent vector
(r_0, ..., r_{nf-1}) has total exponent  sum r_i * p^(nf-1-i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import Context


@dataclass(frozen=True)
class InertialChar:
    """A power of a fundamental character: niveau 1 or 2, exponent mod p^(nf)-1."""

    p: int
    f: int
    niveau: int
    exponent: int

    def __post_init__(self) -> None:
        if self.niveau not in (1, 2):
            raise ValueError(f"niveau must be 1 or 2, got {self.niveau}")
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p ** (self.niveau * self.f) - 1


@dataclass(frozen=True)
class SemisimpleShape:
    """An unordered pair of niveau-1 characters (a two-dimensional tame shape)."""

    first: InertialChar
    second: InertialChar

    def __post_init__(self) -> None:
        if (self.first.p, self.first.f) != (self.second.p, self.second.f):
            raise ValueError("mismatched character contexts")
        if self.first.niveau != 1 or self.second.niveau != 1:
            raise ValueError("semisimple shape takes niveau-1 characters")

    def as_set(self) -> frozenset[int]:
        return frozenset((self.first.exponent, self.second.exponent))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SemisimpleShape) and self.as_set() == other.as_set()

    def __hash__(self) -> int:
        return hash((self.first.p, self.first.f, self.as_set()))


def char_of_exponents(ctx: Context, exps: Sequence[int], niveau: int = 1) -> InertialChar:
    """Character with exponent vector ``exps`` of length niveau*f.

    The vector entry at index i is weighted by p^(nf-1-i).
    """
    n = niveau * ctx.f
    if len(exps) != n:
        raise ValueError(f"expected {n} exponents, got {len(exps)}")
    total = sum(r * ctx.p ** (n - 1 - i) for i, r in enumerate(exps))
    return InertialChar(ctx.p, ctx.f, niveau, total)


def char_mul(a: InertialChar, b: InertialChar) -> InertialChar:
    if (a.p, a.f, a.niveau) != (b.p, b.f, b.niveau):
        raise ValueError("characters live on different groups")
    return InertialChar(a.p, a.f, a.niveau, a.exponent + b.exponent)


def char_inv(a: InertialChar) -> InertialChar:
    return InertialChar(a.p, a.f, a.niveau, -a.exponent)


def char_eq(a: InertialChar, b: InertialChar) -> bool:
    return (
        (a.p, a.f, a.niveau) == (b.p, b.f, b.niveau)
        and a.exponent % a.modulus == b.exponent % b.modulus
    )


def frobenius_twist(a: InertialChar, steps: int = 1) -> InertialChar:
    """Compose with Frobenius ``steps`` times: exponent scales by p^steps."""
    return InertialChar(a.p, a.f, a.niveau, a.exponent * pow(a.p, steps, a.modulus))


def extend_to_quadratic(a: InertialChar) -> InertialChar:
    """Inflate a niveau-1 character to niveau 2.

    Duplicating the exponent vector multiplies the total exponent by p^f + 1.
    """
    if a.niveau != 1:
        raise ValueError("can only extend a niveau-1 character")
    return InertialChar(a.p, a.f, 2, a.exponent * (a.p**a.f + 1))


def is_irreducible_pair(a: InertialChar) -> bool:
    """Whether a niveau-2 character and its p^f-power conjugate are distinct.

    Distinct conjugates are exactly the condition for the induced
    two-dimensional representation to be irreducible.
    """
    if a.niveau != 2:
        raise ValueError("irreducibility test applies to niveau-2 characters")
    return (a.exponent * a.p**a.f - a.exponent) % a.modulus != 0


def conjugate_pair(a: InertialChar) -> tuple[InertialChar, InertialChar]:
    """A niveau-2 character together with its p^f-power conjugate."""
    return a, frobenius_twist(a, a.f)
