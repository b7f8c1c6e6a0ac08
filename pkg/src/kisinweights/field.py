"""Exact arithmetic ground layer: finite fields F_{p^d} and the ring F[u].

Everything here is deterministic and exact.  Field elements are coefficient
vectors over Z/p reduced modulo a canonical irreducible polynomial (the
lexicographically smallest monic irreducible of the requested degree, with
coefficient tuples compared from the constant term upward).  Polynomials in
``u`` carry a Frobenius-semilinear substitution ``u -> u^p`` used throughout
the higher layers.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Context:
    """Global arithmetic context: odd prime p, residue degree f, coefficient degree d."""

    p: int
    f: int
    d: int = 1

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise ValueError(f"f must be >= 1, got {self.f}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")

    @property
    def m1(self) -> int:
        """Order of the niveau-1 character group: p^f - 1."""
        return self.p**self.f - 1

    @property
    def m2(self) -> int:
        """Order of the niveau-2 character group: p^(2f) - 1."""
        return self.p ** (2 * self.f) - 1

    def coefficient_field(self) -> "FiniteField":
        return make_field(self.p, self.d)


# ---------------------------------------------------------------------------
# polynomials over Z/p, used only to build the field modulus
# ---------------------------------------------------------------------------


def _zp_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _zp_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _zp_divmod(out, m, p)[1]


def _zp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    _zp_trim(a)
    db, da = len(b) - 1, len(a) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(da - db + 1, 0)
    while da >= db:
        c = (a[da] * inv_lead) % p
        q[da - db] = c
        for j in range(db + 1):
            a[da - db + j] = (a[da - db + j] - c * b[j]) % p
        _zp_trim(a)
        da = len(a) - 1
    return _zp_trim(q), a


def _zp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _zp_divmod(a, b, p)[1]
    return a


def _zp_powmod_x(e: int, m: list[int], p: int) -> list[int]:
    """x^e modulo m over Z/p."""
    result = [1]
    base = _zp_divmod([0, 1], m, p)[1]
    while e:
        if e & 1:
            result = _zp_mulmod(result, base, m, p)
        base = _zp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _zp_is_irreducible(m: list[int], p: int) -> bool:
    """Rabin test for a monic polynomial of degree >= 1 over Z/p."""
    d = len(m) - 1
    if d == 1:
        return True
    # x^(p^d) == x mod m
    xq = _zp_powmod_x(p**d, m, p)
    x = _zp_divmod([0, 1], m, p)[1]
    if xq != x:
        return False
    for q in {q for q in range(2, d + 1) if d % q == 0 and is_prime(q)}:
        xe = _zp_powmod_x(p ** (d // q), m, p)
        diff = [(a - b) % p for a, b in _pad_pair(xe, x)]
        _zp_trim(diff)
        if len(_zp_gcd(list(m), diff, p)) - 1 != 0:
            return False
    return True


def _pad_pair(a: list[int], b: list[int]) -> list[tuple[int, int]]:
    n = max(len(a), len(b))
    return list(zip(a + [0] * (n - len(a)), b + [0] * (n - len(b))))


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d over Z/p.

    Coefficient tuples (c_0, ..., c_{d-1}) are compared from the constant
    term upward; the returned tuple includes the leading 1.
    """
    from itertools import product

    for lower in product(range(p), repeat=d):
        m = list(lower) + [1]
        if _zp_is_irreducible(m, p):
            return tuple(m)
    raise RuntimeError("unreachable: irreducibles of every degree exist")


# ---------------------------------------------------------------------------
# F_{p^d}
# ---------------------------------------------------------------------------


class FiniteField:
    """The field with p^d elements, with a canonical defining modulus."""

    def __init__(self, p: int, d: int, _token: object = None):
        if _token is not _FIELD_TOKEN:
            raise TypeError("use make_field(p, d)")
        self.p = p
        self.d = d
        self.modulus: tuple[int, ...] = smallest_irreducible(p, d)
        self.order = p**d
        self.zero = FieldElem(self, (0,) * d)
        self.one = FieldElem(self, (1,) + (0,) * (d - 1))

    def elem(self, value: Union[int, Sequence[int]]) -> "FieldElem":
        """Build an element from base-p digits of an int, or a coefficient vector."""
        if isinstance(value, int):
            digits = []
            v = abs(value)
            for _ in range(self.d):
                digits.append(v % self.p)
                v //= self.p
            if v:
                raise ValueError(f"{value} out of range for GF({self.p}^{self.d})")
            el = FieldElem(self, tuple(digits))
            return -el if value < 0 else el
        coeffs = tuple(c % self.p for c in value)
        if len(coeffs) != self.d:
            raise ValueError(f"need {self.d} coefficients, got {len(coeffs)}")
        return FieldElem(self, coeffs)

    def elements(self) -> Iterator["FieldElem"]:
        for n in range(self.order):
            yield self.elem(n)

    def units(self) -> Iterator["FieldElem"]:
        for n in range(1, self.order):
            el = self.elem(n)
            if el != self.zero:
                yield el

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.d})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.d) == (other.p, other.d)

    def __hash__(self) -> int:
        return hash(("FiniteField", self.p, self.d))


_FIELD_TOKEN = object()


@functools.lru_cache(maxsize=None)
def make_field(p: int, d: int) -> FiniteField:
    """Canonical F_{p^d}; repeated calls return the same object."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return FiniteField(p, d, _token=_FIELD_TOKEN)


class FieldElem:
    """Immutable element of a FiniteField, stored as a length-d coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other: "FieldElem") -> None:
        if self.field is not other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.field.p
        return FieldElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.field.p
        return FieldElem(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElem":
        p = self.field.p
        return FieldElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.field.p
        prod = [0] * (2 * self.field.d - 1)
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(other.coeffs):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        rem = _zp_divmod(prod, list(self.field.modulus), p)[1]
        rem += [0] * (self.field.d - len(rem))
        return FieldElem(self.field, tuple(rem))

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElem)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.d, self.coeffs))

    def __repr__(self) -> str:
        return f"FieldElem{self.coeffs}@{self.field!r}"

    def as_int(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))


def frobenius(x: FieldElem) -> FieldElem:
    """The arithmetic Frobenius x -> x^p."""
    return x**x.field.p


# ---------------------------------------------------------------------------
# F[u]
# ---------------------------------------------------------------------------


class UPoly:
    """Polynomial in u with FieldElem coefficients, stored low-to-high, normalized."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Sequence[FieldElem] = ()):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs: tuple[FieldElem, ...] = tuple(cs)

    @classmethod
    def zero(cls, field: FiniteField) -> "UPoly":
        return cls(field)

    @classmethod
    def constant(cls, c: FieldElem) -> "UPoly":
        return cls(c.field, (c,))

    @classmethod
    def monomial(cls, c: FieldElem, n: int) -> "UPoly":
        """c * u^n."""
        if n < 0:
            raise ValueError("monomial exponent must be >= 0")
        if c.is_zero():
            return cls(c.field)
        return cls(c.field, (c.field.zero,) * n + (c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def valuation(self) -> Union[int, float]:
        """u-adic valuation; math.inf for the zero polynomial."""
        if not self.coeffs:
            return math.inf
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        raise AssertionError("normalized polynomial with all-zero coefficients")

    def coefficient(self, n: int) -> FieldElem:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return self.field.zero

    def __add__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(
            self.field,
            [self.coefficient(i) + other.coefficient(i) for i in range(n)],
        )

    def __sub__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(
            self.field,
            [self.coefficient(i) - other.coefficient(i) for i in range(n)],
        )

    def __neg__(self) -> "UPoly":
        return UPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other: "UPoly") -> "UPoly":
        if self.is_zero() or other.is_zero():
            return UPoly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(self.field, out)

    def scale(self, c: FieldElem) -> "UPoly":
        return UPoly(self.field, [c * a for a in self.coeffs])

    def shift(self, n: int) -> "UPoly":
        """Multiply by u^n (n >= 0)."""
        if n < 0:
            raise ValueError("shift must be >= 0")
        if self.is_zero():
            return self
        return UPoly(self.field, (self.field.zero,) * n + self.coeffs)

    def divides_exactly(self, n: int) -> bool:
        """Whether u^n divides this polynomial."""
        return self.is_zero() or self.valuation() >= n

    def unshift(self, n: int) -> "UPoly":
        """Exact division by u^n; raises if u^n does not divide."""
        if self.is_zero():
            return self
        if self.valuation() < n:
            raise ValueError(f"u^{n} does not divide {self!r}")
        return UPoly(self.field, self.coeffs[n:])

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.d, tuple(c.coeffs for c in self.coeffs)))

    def __repr__(self) -> str:
        if self.is_zero():
            return "UPoly(0)"
        terms = [f"{c.coeffs}*u^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return "UPoly(" + " + ".join(terms) + ")"


def poly_phi(poly: UPoly) -> UPoly:
    """Frobenius-semilinear substitution: sum c_j u^j  ->  sum c_j^p u^(pj)."""
    if poly.is_zero():
        return poly
    p = poly.field.p
    out = [poly.field.zero] * (p * poly.degree() + 1)
    for j, c in enumerate(poly.coeffs):
        if not c.is_zero():
            out[p * j] = frobenius(c)
    return UPoly(poly.field, out)
