"""Composition algebras, Jordan models, the glued Lie construction, kantor4."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rootgrade.algcore import (
    check_lie,
    derivations,
    is_semisimple,
    killing_form,
    multiply,
    satisfies_leibniz,
)
from rootgrade.constructions import (
    JordanAlgebra,
    albert_z33,
    allison_trace_form,
    graded_tits,
    hermitian_jordan,
    hermitian_jordan_grading,
    hermitian_jordan_slot_grading,
    hurwitz_cd,
    hurwitz_derivation,
    hyperbolic_jordan,
    jordan_inner_derivation,
    structurable_derivation,
    structurable_kantor4,
    tits,
    zorn_octonions,
)
from rootgrade.errors import (
    DimMismatch,
    FieldLacksCubeRoot,
    NotJordanDegree3,
    OrderMismatch,
)
from rootgrade.exactla import (
    Matrix,
    Subspace,
    invert,
    svec_add,
    svec_scale,
    svec_sub_scaled,
)
from rootgrade.grading import Grading, grading_type, neutral_component, trivial_grading
from rootgrade.numfield import from_rational, one, zero

ONE = one(3)


def rand_vec(rng, dim, low=-3, high=3):
    return {
        k: from_rational(3, rng.randint(low, high))
        for k in range(dim)
        if rng.random() < 0.7
    }


def vec_eq(a, b):
    return not svec_sub_scaled(a, ONE, b)


# -- Cayley–Dickson tower -----------------------------------------------------


def test_cd_tower_dims_and_neutral_line():
    for level in range(4):
        h, g = hurwitz_cd(level)
        assert h.dim == 2 ** level
        assert h.unit == {0: ONE}
        assert g.group.free_rank == 0 and g.group.torsion == (2,) * level
        neutral = neutral_component(h.algebra, g)
        assert [dict(v) for v in neutral.basis] == [{0: ONE}]


def test_cd_norm_is_multiplicative():
    rng = random.Random(201)
    for level in (2, 3):
        h, _ = hurwitz_cd(level)
        for _ in range(25):
            x = rand_vec(rng, h.dim)
            y = rand_vec(rng, h.dim)
            xy = multiply(h.algebra, x, y)
            assert h.norm_of(xy) == h.norm_of(x) * h.norm_of(y)


def test_cd_quadratic_relation():
    rng = random.Random(202)
    for level in (1, 2, 3):
        h, _ = hurwitz_cd(level)
        for _ in range(20):
            x = rand_vec(rng, h.dim)
            sq = multiply(h.algebra, x, x)
            val = svec_sub_scaled(sq, h.trace_of(x), x)
            val = svec_add(val, svec_scale(dict(h.unit), h.norm_of(x)))
            assert val == {}


def test_cd_conjugation_is_antiautomorphism():
    rng = random.Random(203)
    h, _ = hurwitz_cd(3)
    for _ in range(20):
        x = rand_vec(rng, h.dim)
        y = rand_vec(rng, h.dim)
        lhs = h.conjugate(multiply(h.algebra, x, y))
        rhs = multiply(h.algebra, h.conjugate(y), h.conjugate(x))
        assert vec_eq(lhs, rhs)
        assert vec_eq(h.conjugate(h.conjugate(x)), x)


def test_cd_octonions_alternative_but_not_associative():
    rng = random.Random(204)
    h, _ = hurwitz_cd(3)
    A = h.algebra

    def assoc(x, y, z):
        return svec_sub_scaled(
            multiply(A, multiply(A, x, y), z), ONE, multiply(A, x, multiply(A, y, z))
        )

    # a nonzero associator on basis vectors
    assert assoc({1: ONE}, {2: ONE}, {4: ONE}) != {}
    for _ in range(20):
        x = rand_vec(rng, 8)
        y = rand_vec(rng, 8)
        assert assoc(x, x, y) == {}
        assert assoc(x, y, y) == {}


def test_zorn_split_octonions():
    h, g = zorn_octonions()
    A = h.algebra
    e1, e2, u1, u2, v1, v3 = {0: ONE}, {1: ONE}, {2: ONE}, {3: ONE}, {5: ONE}, {7: ONE}
    assert h.unit == svec_add(e1, e2)
    assert multiply(A, u1, u2) == v3
    assert multiply(A, u1, v1) == e1
    assert multiply(A, v1, u1) == e2
    assert grading_type(A, g) == (6, 1)
    # split: the slots are isotropic for the norm
    assert h.norm_of(u1) == zero(3)
    rng = random.Random(205)
    for _ in range(20):
        x = rand_vec(rng, 8)
        y = rand_vec(rng, 8)
        xy = multiply(A, x, y)
        assert h.norm_of(xy) == h.norm_of(x) * h.norm_of(y)


def test_hurwitz_derivation_spans_der():
    h, _ = hurwitz_cd(3)
    rng = random.Random(206)
    maps = []
    for _ in range(6):
        a = rand_vec(rng, 8)
        b = rand_vec(rng, 8)
        d = hurwitz_derivation(h, a, b)
        assert satisfies_leibniz(h.algebra, d.matrix)
        maps.append(d)
    for i in range(8):
        for j in range(i + 1, 8):
            maps.append(hurwitz_derivation(h, {i: ONE}, {j: ONE}))
    flat = [
        {r * 8 + c: val for r, row in enumerate(d.matrix.data) for c, val in row.items()}
        for d in maps
    ]
    span = Subspace.from_vectors(flat, 64, 3)
    assert len(span.basis) == 14

    # the two-dimensional stage is commutative: every such map vanishes
    k, _ = hurwitz_cd(1)
    assert hurwitz_derivation(k, {0: ONE}, {1: ONE}).matrix.is_zero()


def test_derivation_algebra_of_octonions_is_lie():
    h, g = hurwitz_cd(3)
    der = derivations(h.algebra, degrees=g.degrees)
    assert der.algebra.dim == 14
    assert check_lie(der.algebra).ok
    assert is_semisimple(der.algebra)


# -- hermitian 3×3 Jordan models ----------------------------------------------


def test_hermitian_jordan_dims_and_unit():
    for level, dim in ((0, 6), (1, 9), (2, 15), (3, 27)):
        c, _ = hurwitz_cd(level)
        j = hermitian_jordan(c)
        assert j.dim == dim
        assert j.unit == {0: ONE, 1: ONE, 2: ONE}
        assert j.trace_of(j.unit) == from_rational(3, 3)


def test_hermitian_jordan_axioms():
    rng = random.Random(207)
    for level in (0, 3):
        c, _ = hurwitz_cd(level)
        j = hermitian_jordan(c)
        A = j.algebra
        for _ in range(12):
            x = rand_vec(rng, j.dim, -2, 2)
            y = rand_vec(rng, j.dim, -2, 2)
            assert vec_eq(multiply(A, x, y), multiply(A, y, x))
            assert vec_eq(multiply(A, j.unit, x), x)
            # operator form of the Jordan identity: [L_{x²}, L_x] y = 0
            sq = multiply(A, x, x)
            lhs = multiply(A, sq, multiply(A, x, y))
            rhs = multiply(A, x, multiply(A, sq, y))
            assert vec_eq(lhs, rhs)


def test_hermitian_jordan_trace_form_nondegenerate():
    for level in (0, 1, 2):
        c, _ = hurwitz_cd(level)
        j = hermitian_jordan(c)
        assert invert(j.trace_form) is not None
        x = {3: ONE}
        y = {4: ONE}
        assert j.trace_pair(x, y) == j.trace_pair(y, x)


def test_hermitian_jordan_derivation_dims():
    for level, der_dim in ((0, 3), (1, 8), (2, 21)):
        c, _ = hurwitz_cd(level)
        j = hermitian_jordan(c)
        der = derivations(j.algebra)
        assert der.algebra.dim == der_dim
        assert check_lie(der.algebra).ok


def test_hermitian_jordan_gradings():
    c, cg = hurwitz_cd(1)
    j = hermitian_jordan(c)
    g = hermitian_jordan_grading(j, cg)
    assert grading_type(j.algebra, g) == (0, 0, 1, 0, 0, 1)

    f, fg = hurwitz_cd(0)
    j6 = hermitian_jordan(f)
    slots = hermitian_jordan_slot_grading(j6, fg)
    assert grading_type(j6.algebra, slots) == (3, 0, 1)
    with pytest.raises(DimMismatch):
        hermitian_jordan_grading(j6, cg)
    with pytest.raises(DimMismatch):
        hermitian_jordan_slot_grading(j6, cg)


def test_hyperbolic_jordan_weights():
    j, g = hyperbolic_jordan()
    assert j.dim == 6
    assert j.unit == {0: ONE, 1: ONE}
    assert [d.free for d in g.degrees] == [(0,), (0,), (1,), (-1,), (2,), (-2,)]
    der = derivations(j.algebra, degrees=g.degrees)
    assert der.algebra.dim == 3
    assert der.degrees is not None
    assert sorted(d.free[0] for d in der.degrees) == [-1, 0, 1]


def test_albert_z33_fine_grading():
    j, g = albert_z33()
    assert j.dim == 27
    assert g.group.free_rank == 0 and g.group.torsion == (3, 3, 3)
    assert grading_type(j.algebra, g) == (27,)
    comps = dict(g.components())
    assert comps[g.group.zero()] == (0,)
    assert multiply(j.algebra, j.unit, {5: ONE}) == {5: ONE}


def test_albert_z33_needs_cube_root():
    with pytest.raises(FieldLacksCubeRoot):
        albert_z33(order=2)


def test_albert_z33_derivations_slow():
    j, g = albert_z33()
    der = derivations(j.algebra, degrees=g.degrees)
    assert der.algebra.dim == 52
    assert der.degrees is not None
    der_grading = Grading(g.group, tuple(der.degrees))
    assert grading_type(der.algebra, der_grading) == (0, 26)


def test_jordan_inner_derivation():
    rng = random.Random(208)
    c, _ = hurwitz_cd(1)
    j = hermitian_jordan(c)
    for _ in range(8):
        x = rand_vec(rng, j.dim, -2, 2)
        y = rand_vec(rng, j.dim, -2, 2)
        d = jordan_inner_derivation(j, x, y)
        assert satisfies_leibniz(j.algebra, d.matrix)
        assert jordan_inner_derivation(j, x, x).matrix.is_zero()
        assert jordan_inner_derivation(j, dict(j.unit), y).matrix.is_zero()


# -- the three-block Lie construction -----------------------------------------


def test_tits_corner_dims():
    f, _ = hurwitz_cd(0)
    k, _ = hurwitz_cd(1)
    j6 = hermitian_jordan(f)
    t_a1 = tits(f, j6)
    assert t_a1.algebra.dim == 3
    assert check_lie(t_a1.algebra).ok
    t_a2 = tits(k, j6)
    assert t_a2.algebra.dim == 8
    assert check_lie(t_a2.algebra).ok
    assert is_semisimple(t_a2.algebra)


def test_tits_input_validation():
    f, _ = hurwitz_cd(0)
    j6 = hermitian_jordan(f)
    f4_field, _ = hurwitz_cd(0, order=4)
    with pytest.raises(OrderMismatch):
        tits(f4_field, j6)
    degenerate = JordanAlgebra(j6.algebra, j6.unit, Matrix.zero(6, 6, 3))
    with pytest.raises(NotJordanDegree3):
        tits(f, degenerate)


def test_graded_tits_f4_trivial_jordan_side():
    o, og = hurwitz_cd(3)
    f, _ = hurwitz_cd(0)
    j6 = hermitian_jordan(f)
    t, g = graded_tits(o, og, j6, trivial_grading(6))
    assert t.algebra.dim == 52
    assert check_lie(t.algebra).ok
    # Der(J) alone sits in degree 0; each of the seven nonzero octonion
    # degrees carries two derivation dims plus the five-dimensional J₀ line
    assert grading_type(t.algebra, g) == (0, 0, 1, 0, 0, 0, 7)
    assert invert(killing_form(t.algebra, degrees=g.degrees)) is not None


def test_graded_tits_f4_hyperbolic_jordan_side():
    o, og = hurwitz_cd(3)
    j6, jg = hyperbolic_jordan()
    t, g = graded_tits(o, og, j6, jg)
    assert t.algebra.dim == 52
    assert check_lie(t.algebra).ok
    assert g.group.free_rank == 1 and g.group.torsion == (2, 2, 2)
    assert grading_type(t.algebra, g) == (31, 0, 7)


def test_graded_tits_z2_fifth():
    o, og = hurwitz_cd(3)
    f, fg = hurwitz_cd(0)
    j6 = hermitian_jordan(f)
    slots = hermitian_jordan_slot_grading(j6, fg)
    t, g = graded_tits(o, og, j6, slots)
    assert t.algebra.dim == 52
    assert g.group.free_rank == 0 and g.group.torsion == (2,) * 5
    assert grading_type(t.algebra, g) == (24, 0, 0, 7)


def test_graded_tits_dim78():
    o, og = hurwitz_cd(3)
    k, kg = hurwitz_cd(1)
    j9 = hermitian_jordan(k)
    jg = hermitian_jordan_grading(j9, kg)
    t, g = graded_tits(o, og, j9, jg)
    assert t.algebra.dim == 78
    assert check_lie(t.algebra).ok
    assert g.group.torsion == (2, 2, 2, 2)


# -- the four-dimensional involutive algebra ----------------------------------


def test_kantor4_product_table():
    a = structurable_kantor4()
    A = a.algebra
    unit, e, f, s = ({i: ONE} for i in range(4))
    half3 = from_rational(3, Fraction(3, 2))
    assert multiply(A, s, s) == unit
    assert multiply(A, e, e) == svec_scale(f, from_rational(3, 2))
    assert multiply(A, f, f) == svec_scale(e, from_rational(3, 2))
    assert multiply(A, e, f) == {0: half3, 3: half3}
    assert multiply(A, f, e) == {0: half3, 3: -half3}
    assert vec_eq(a.conjugate(e), e)
    assert vec_eq(a.conjugate(s), svec_scale(s, -ONE))


def test_kantor4_involution_antiautomorphism():
    rng = random.Random(210)
    a = structurable_kantor4()
    A = a.algebra
    for _ in range(20):
        x = rand_vec(rng, 4)
        y = rand_vec(rng, 4)
        lhs = a.conjugate(multiply(A, x, y))
        rhs = multiply(A, a.conjugate(y), a.conjugate(x))
        assert vec_eq(lhs, rhs)


def test_kantor4_square_identity():
    a = structurable_kantor4()
    A = a.algebra
    for alpha, beta in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (3, -2)):
        al = from_rational(3, alpha)
        be = from_rational(3, beta)
        x = svec_add(svec_scale({1: ONE}, al), svec_scale({2: ONE}, be))
        sq = multiply(A, x, x)
        expect = svec_scale({1: ONE}, from_rational(3, 2 * beta * beta))
        expect = svec_add(expect, svec_scale({2: ONE}, from_rational(3, 2 * alpha * alpha)))
        expect = svec_add(expect, svec_scale({0: ONE}, from_rational(3, 3 * alpha * beta)))
        assert vec_eq(sq, expect)


def test_kantor4_derivations():
    rng = random.Random(211)
    a = structurable_kantor4()
    e = {1: ONE}
    f = {2: ONE}
    # the (e, f) pair gives the zero map — verified exactly, not an accident
    assert structurable_derivation(a, e, f).matrix.is_zero()
    for _ in range(10):
        u = rand_vec(rng, 4)
        v = rand_vec(rng, 4)
        d = structurable_derivation(a, u, v)
        assert satisfies_leibniz(a.algebra, d.matrix)
        # derivations of an involutive algebra commute with the involution
        assert (d.matrix @ a.involution.matrix - a.involution.matrix @ d.matrix).is_zero()


def test_allison_form():
    a = structurable_kantor4()
    unit = {0: ONE}
    assert allison_trace_form(a, unit, unit) == from_rational(3, 8)
    rows = [
        {
            c: allison_trace_form(a, {r: ONE}, {c: ONE})
            for c in range(4)
            if allison_trace_form(a, {r: ONE}, {c: ONE})
        }
        for r in range(4)
    ]
    gram = Matrix(4, 4, rows, 3)
    assert invert(gram) is not None
    rng = random.Random(212)
    for _ in range(10):
        x = rand_vec(rng, 4)
        y = rand_vec(rng, 4)
        assert allison_trace_form(a, x, y) == allison_trace_form(a, y, x)
