"""Exact arithmetic in ℚ and in the small cyclotomic fields ℚ(ζₙ).

A :class:`Scalar` is a canonical-form element of ℚ(ζₙ) for n in the
whitelist {1, 2, 3, 4, 6, 12}: a tuple of φ(n) rationals, coordinates in
the power basis 1, z, …, z^{φ(n)−1}, always reduced modulo the n-th
cyclotomic polynomial.  Equality is therefore structural.

Everything here is immutable and pure.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DivisionByZero, OrderMismatch, ParseError, UnsupportedOrder

Rational = Fraction

RationalLike = Union[int, Fraction]

SUPPORTED_ORDERS = (1, 2, 3, 4, 6, 12)

# n-th cyclotomic polynomial, coefficients low→high, monic.
_CYCLOTOMIC: dict[int, tuple[int, ...]] = {
    1: (-1, 1),             # x - 1
    2: (1, 1),              # x + 1
    3: (1, 1, 1),           # x^2 + x + 1
    4: (1, 0, 1),           # x^2 + 1
    6: (1, -1, 1),          # x^2 - x + 1
    12: (1, 0, -1, 0, 1),   # x^4 - x^2 + 1
}

_PHI = {n: len(p) - 1 for n, p in _CYCLOTOMIC.items()}

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(order: int) -> int:
    """Degree of ℚ(ζₙ)/ℚ for a whitelisted order."""
    _check_order(order)
    return _PHI[order]


def _check_order(order: int) -> None:
    if order not in _PHI:
        raise UnsupportedOrder(
            f"cyclotomic order {order!r} not supported; choose one of {SUPPORTED_ORDERS}"
        )


def _poly_mod(coeffs: list[Fraction], order: int) -> list[Fraction]:
    """Remainder of a coefficient list (low→high) modulo the cyclotomic polynomial."""
    modulus = _CYCLOTOMIC[order]
    deg = len(modulus) - 1
    work = list(coeffs)
    for top in range(len(work) - 1, deg - 1, -1):
        lead = work[top]
        if lead:
            # subtract lead * x^(top-deg) * modulus (modulus is monic)
            shift = top - deg
            for i, m in enumerate(modulus):
                if m:
                    work[shift + i] -= lead * m
        work.pop()
    while len(work) < deg:
        work.append(_ZERO)
    return work


class Scalar:
    """An element of ℚ(ζₙ) in canonical reduced form.

    Instances are immutable; arithmetic never changes the ambient order,
    and combining scalars of different orders raises :class:`OrderMismatch`.
    """

    __slots__ = ("order", "coeffs")

    order: int
    coeffs: tuple[Fraction, ...]

    def __init__(self, order: int, coeffs: Iterable[RationalLike]):
        _check_order(order)
        work = [Fraction(c) for c in coeffs]
        deg = _PHI[order]
        if len(work) > deg:
            work = _poly_mod(work, order)
        while len(work) < deg:
            work.append(_ZERO)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(work))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Scalar is immutable")

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        """The value as a Fraction; raises ValueError if a z-term survives."""
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other: object) -> "Scalar | None":
        if isinstance(other, Scalar):
            if other.order != self.order:
                raise OrderMismatch(
                    f"cannot combine scalars of orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(self.order, (Fraction(other),))
        return None

    def __add__(self, other: object) -> "Scalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Scalar(self.order, tuple(a + b for a, b in zip(self.coeffs, rhs.coeffs)))

    __radd__ = __add__

    def __sub__(self, other: object) -> "Scalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Scalar(self.order, tuple(a - b for a, b in zip(self.coeffs, rhs.coeffs)))

    def __rsub__(self, other: object) -> "Scalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs - self

    def __neg__(self) -> "Scalar":
        return Scalar(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other: object) -> "Scalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = self.coeffs, rhs.coeffs
        # fast path: at least one operand rational
        if not any(a[1:]):
            q = a[0]
            return Scalar(self.order, tuple(q * x for x in b))
        if not any(b[1:]):
            q = b[0]
            return Scalar(self.order, tuple(q * x for x in a))
        prod = [_ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return Scalar(self.order, _poly_mod(prod, self.order))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise DivisionByZero("cannot invert the zero scalar")
        if self.is_rational():
            return Scalar(self.order, (1 / self.coeffs[0],))
        # extended Euclid on (self, cyclotomic) in ℚ[x]; the modulus is
        # irreducible so the gcd is a nonzero constant.
        r0 = [Fraction(c) for c in _CYCLOTOMIC[self.order]]
        r1 = list(self.coeffs)
        s0: list[Fraction] = [_ZERO]
        s1: list[Fraction] = [_ONE]
        while True:
            while r1 and not r1[-1]:
                r1.pop()
            if len(r1) == 1:
                break
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        inv = [x / c for x in s1]
        return Scalar(self.order, _poly_mod(inv, self.order))

    def __truediv__(self, other: object) -> "Scalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if rhs.is_zero():
            raise DivisionByZero("division by the zero scalar")
        if rhs.is_rational():
            q = 1 / rhs.coeffs[0]
            return Scalar(self.order, tuple(q * x for x in self.coeffs))
        return self * rhs.inverse()

    def __rtruediv__(self, other: object) -> "Scalar":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs / self

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Scalar({self.order}, {scalar_to_text(self)!r})"

    def __str__(self) -> str:
        return scalar_to_text(self)


# -- polynomial helpers over ℚ (low→high coefficient lists) --------------

def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    q = [_ZERO] * max(len(a) - db, 1)
    for top in range(len(a) - 1, db - 1, -1):
        f = a[top] / lead
        if f:
            q[top - db] = f
            for i, bi in enumerate(b):
                if bi:
                    a[top - db + i] -= f * bi
        a.pop()
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [_ZERO] * (n - len(a))
    b = b + [_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


# -- public constructors ----------------------------------------------------

def make_scalar(order: int, coeffs: Sequence[RationalLike]) -> Scalar:
    """Canonical scalar from power-basis coordinates (over-long input is reduced)."""
    return Scalar(order, coeffs)


def zero(order: int) -> Scalar:
    return Scalar(order, ())


def one(order: int) -> Scalar:
    return Scalar(order, (_ONE,))


def from_rational(order: int, value: RationalLike) -> Scalar:
    return Scalar(order, (Fraction(value),))


def zeta(order: int) -> Scalar:
    """A primitive order-th root of unity (1 for n=1, −1 for n=2, else z)."""
    _check_order(order)
    if order == 1:
        return one(1)
    if order == 2:
        return Scalar(2, (-_ONE,))
    return Scalar(order, (_ZERO, _ONE))


def primitive_cube_root(order: int) -> Scalar | None:
    """ζ₃ inside ℚ(ζₙ) when it exists there, else None.

    ζ₃ lies in ℚ(ζₙ) exactly when 3 | n; for n = 3 or 6 it is a power of z,
    for n = 12 it is z⁴ = z² − 1.
    """
    _check_order(order)
    if order == 3:
        return zeta(3)
    if order == 6:
        return zeta(6) * zeta(6)  # ζ₆² = ζ₃
    if order == 12:
        return Scalar(12, (-_ONE, _ZERO, _ONE, _ZERO))  # z² − 1
    return None


def field_arith(op: str, a: Scalar, b: Scalar) -> Scalar:
    """Dispatch a single exact field operation; op ∈ {add, sub, mul, div}."""
    if a.order != b.order:
        raise OrderMismatch(f"cannot combine scalars of orders {a.order} and {b.order}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


# -- textual encoding ---------------------------------------------------------

def scalar_to_text(s: Scalar) -> str:
    """Render "num/den" summands, z-power terms as "num/den*z^k".

    Negative z-term coefficients are parenthesized so the "+" join stays
    unambiguous, e.g. "1/2+(-1/1)*z^1".  The zero scalar renders as "0/1".
    """
    parts: list[str] = []
    c0 = s.coeffs[0]
    if c0:
        parts.append(f"{c0.numerator}/{c0.denominator}")
    for k, c in enumerate(s.coeffs[1:], start=1):
        if not c:
            continue
        frac = f"{c.numerator}/{c.denominator}"
        if c < 0:
            frac = f"({frac})"
        parts.append(f"{frac}*z^{k}")
    if not parts:
        return "0/1"
    return "+".join(parts)


def parse_scalar(text: str, order: int) -> Scalar:
    """Parse the textual encoding back into a canonical Scalar."""
    _check_order(order)
    deg = _PHI[order]
    coeffs = [_ZERO] * deg
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty scalar literal")
    for term in stripped.split("+"):
        term = term.strip()
        if "*" in term:
            frac_part, _, pow_part = term.partition("*")
            frac_part = frac_part.strip()
            pow_part = pow_part.strip()
            if frac_part.startswith("(") and frac_part.endswith(")"):
                frac_part = frac_part[1:-1].strip()
            if not pow_part.startswith("z^"):
                raise ParseError(f"malformed scalar term {term!r}")
            try:
                k = int(pow_part[2:])
            except ValueError:
                raise ParseError(f"malformed z-power in term {term!r}") from None
            if k < 0:
                raise ParseError(f"negative z-power in term {term!r}")
        else:
            frac_part, k = term, 0
            if frac_part.startswith("(") and frac_part.endswith(")"):
                frac_part = frac_part[1:-1].strip()
        try:
            value = Fraction(frac_part)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed rational {frac_part!r} in scalar {text!r}: {exc}") from None
        if k >= deg:
            # reduce high powers through the cyclotomic relation
            high = [_ZERO] * k + [value]
            for i, c in enumerate(_poly_mod(high, order)):
                coeffs[i] += c
        else:
            coeffs[k] += value
    return Scalar(order, coeffs)
