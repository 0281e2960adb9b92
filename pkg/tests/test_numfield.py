"""Exact cyclotomic arithmetic: frozen oracles and randomized field axioms."""
from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest

from rootgrade.errors import DivisionByZero, OrderMismatch, ParseError, UnsupportedOrder
from rootgrade.numfield import (
    SUPPORTED_ORDERS,
    Scalar,
    euler_phi,
    field_arith,
    from_rational,
    make_scalar,
    one,
    parse_scalar,
    primitive_cube_root,
    scalar_to_text,
    zero,
    zeta,
)


# Oracle: reduce a power-basis polynomial modulo the cyclotomic polynomial by
# plain long division, written independently of the implementation under test.
_CYC = {1: [-1, 1], 2: [1, 1], 3: [1, 1, 1], 4: [1, 0, 1], 6: [1, -1, 1], 12: [1, 0, -1, 0, 1]}


def oracle_reduce(order: int, coeffs: list[Q]) -> tuple[Q, ...]:
    mod = [Q(c) for c in _CYC[order]]
    work = [Q(c) for c in coeffs]
    while len(work) >= len(mod):
        lead = work[-1]
        shift = len(work) - len(mod)
        for i, m in enumerate(mod):
            work[shift + i] -= lead * m
        work.pop()
    while len(work) < len(mod) - 1:
        work.append(Q(0))
    return tuple(work)


def test_rational_embedding():
    s = make_scalar(1, [Q(3, 2)])
    assert s.as_rational() == Q(3, 2)
    assert s.coeffs == (Q(3, 2),)


def test_zeta3_square_reduces():
    z = zeta(3)
    sq = z * z
    # ζ₃² = −1 − ζ₃, cross-checked by the long-division oracle
    assert sq.coeffs == (Q(-1), Q(-1))
    assert sq.coeffs == oracle_reduce(3, [Q(0), Q(0), Q(1)])


def test_overlong_input_reduces_to_zero():
    s = make_scalar(3, [Q(1), Q(1), Q(1)])  # 1 + ζ + ζ² = 0
    assert s.is_zero()
    assert s.coeffs == oracle_reduce(3, [Q(1), Q(1), Q(1)])


def test_field_arith_examples():
    a = from_rational(1, Q(1, 2))
    b = from_rational(1, Q(1, 3))
    assert field_arith("add", a, b).as_rational() == Q(5, 6)

    z = zeta(3)
    assert field_arith("mul", z, z * z) == one(3)

    quot = field_arith("div", one(3), one(3) + z)
    assert quot == -z
    # verify the frozen value: (1+ζ₃)(−ζ₃) = −ζ₃ − ζ₃² = 1
    assert (one(3) + z) * (-z) == one(3)


def test_unsupported_order():
    with pytest.raises(UnsupportedOrder):
        make_scalar(5, [Q(1)])
    with pytest.raises(UnsupportedOrder):
        zeta(7)


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        field_arith("add", one(3), one(4))
    with pytest.raises(OrderMismatch):
        _ = zeta(3) * zeta(6)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        field_arith("div", one(3), zero(3))
    with pytest.raises(DivisionByZero):
        zero(4).inverse()


def test_zeta_has_exact_order():
    for n in SUPPORTED_ORDERS:
        z = zeta(n)
        acc = one(n)
        for k in range(1, n):
            acc = acc * z
            assert acc != one(n), f"ζ_{n}^{k} = 1 too early"
        assert acc * z == one(n)


def test_primitive_cube_root_presence():
    for n in (3, 6, 12):
        w = primitive_cube_root(n)
        assert w is not None
        assert w != one(n)
        assert w * w * w == one(n)
    for n in (1, 2, 4):
        assert primitive_cube_root(n) is None


def test_canonical_equality_is_structural():
    a = make_scalar(3, [Q(1, 2), Q(-1)])
    b = make_scalar(3, [Q(1, 2), Q(-1)])
    assert a == b and hash(a) == hash(b)
    assert a != make_scalar(3, [Q(1, 2), Q(1)])


def test_mixed_int_fraction_operands():
    z = zeta(3)
    assert 2 * z == z + z
    assert (z + 1) - 1 == z
    assert z / 1 == z
    assert 1 / (1 + z) == -z


def test_text_roundtrip_examples():
    s = make_scalar(3, [Q(1, 2), Q(-1)])
    assert scalar_to_text(s) == "1/2+(-1/1)*z^1"
    assert parse_scalar("1/2+(-1/1)*z^1", 3) == s
    assert scalar_to_text(zero(3)) == "0/1"
    assert parse_scalar("0/1", 3) == zero(3)
    assert scalar_to_text(from_rational(1, Q(-3, 4))) == "-3/4"
    assert parse_scalar("-3/4", 1).as_rational() == Q(-3, 4)


def test_text_roundtrip_random():
    rng = random.Random(20260814)
    for _ in range(200):
        order = rng.choice(SUPPORTED_ORDERS)
        coeffs = [Q(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(euler_phi(order))]
        s = make_scalar(order, coeffs)
        assert parse_scalar(scalar_to_text(s), order) == s


def test_parse_rejects_junk():
    with pytest.raises(ParseError):
        parse_scalar("", 3)
    with pytest.raises(ParseError):
        parse_scalar("1/2*w^1", 3)
    with pytest.raises(ParseError):
        parse_scalar("banana", 3)
    with pytest.raises(ParseError):
        parse_scalar("1/0", 3)


def test_parse_reduces_high_powers():
    # z^2 in order 3 must come back reduced: ζ₃² = −1 − ζ₃
    s = parse_scalar("1/1*z^2", 3)
    assert s.coeffs == (Q(-1), Q(-1))


def test_field_axioms_randomized():
    rng = random.Random(97)
    for _ in range(1000):
        order = rng.choice(SUPPORTED_ORDERS)
        d = euler_phi(order)

        def rand_scalar() -> Scalar:
            return make_scalar(
                order, [Q(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(d)]
            )

        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inverse() == one(order)


def test_isotropy_identity_order3():
    # −1 is a sum of two squares once ζ₃ is available:
    # (−ζ₃²)² + (−ζ₃)² = ζ₃⁴ + ζ₃² = ζ₃ + ζ₃² = −1.
    z = zeta(3)
    z2 = z * z
    assert (-z2) * (-z2) + (-z) * (-z) == from_rational(3, -1)


def test_scalar_is_immutable():
    s = one(3)
    with pytest.raises(AttributeError):
        s.order = 4  # type: ignore[misc]
