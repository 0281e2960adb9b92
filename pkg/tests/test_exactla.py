"""Echelon forms, kernels, spectra: frozen examples plus randomized invariants."""
from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest

from rootgrade.errors import AmbientMismatch, NonCommuting, NotSquare
from rootgrade.exactla import (
    Matrix,
    Subspace,
    eigen_decompose,
    kernel,
    minimal_polynomial,
    poly_eval,
    poly_is_squarefree,
    rational_roots,
    rref,
    simultaneous_eigenspaces,
    solve,
    svec_from_dense,
)
from rootgrade.numfield import from_rational, one, zero, zeta


def M(dense, order=1):
    return Matrix.from_dense(dense, order)


def test_rref_hand_example():
    r, pivots = rref(M([[0, 2], [0, 4]]))
    assert pivots == [1]
    assert r.rows == 1
    assert r.entry(0, 1) == 1 and r.entry(0, 0) == 0


def test_rref_identity_and_zero():
    ident = Matrix.identity(3, 1)
    r, pivots = rref(ident)
    assert r == ident and pivots == [0, 1, 2]
    rz, pz = rref(Matrix.zero(2, 3, 1))
    assert rz.rows == 0 and pz == []


def test_rref_idempotent_randomized():
    rng = random.Random(11)
    for _ in range(50):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = M([[Q(rng.randint(-5, 5)) for _ in range(cols)] for _ in range(rows)])
        r1, p1 = rref(m)
        r2, p2 = rref(r1)
        assert r1 == r2 and p1 == p2


def test_kernel_examples():
    k = kernel(M([[1, 1]]))
    assert k.dim == 1
    assert k.basis[0] == {0: one(1), 1: from_rational(1, -1)}

    assert kernel(Matrix.identity(4, 1)).dim == 0


def test_kernel_annihilates_randomized():
    rng = random.Random(23)
    for _ in range(50):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 6)
        m = M([[Q(rng.randint(-4, 4)) for _ in range(cols)] for _ in range(rows)])
        k = kernel(m)
        r, pivots = rref(m)
        assert k.dim == cols - len(pivots)
        for row in k.basis:
            assert not m.apply(row)


def test_solve_examples():
    x = solve(M([[2]]), {0: from_rational(1, 3)})
    assert x is not None and x[0].as_rational() == Q(3, 2)

    # inconsistent: x + y = 1 and x + y = 2
    assert solve(M([[1, 1], [1, 1]]), {0: one(1), 1: from_rational(1, 2)}) is None

    # substituted back reproduces b exactly
    a = M([[1, 2, 0], [0, 1, 1]])
    b = {0: from_rational(1, 5), 1: from_rational(1, 7)}
    x = solve(a, b)
    assert x is not None
    xs = {i: v for i, v in enumerate(x) if v}
    assert a.apply(xs) == b


def test_minimal_polynomial_examples():
    # diag(1,1,2) → (x−1)(x−2) = 2 − 3x + x²
    p = minimal_polynomial(M([[1, 0, 0], [0, 1, 0], [0, 0, 2]]))
    assert [c.as_rational() for c in p] == [Q(2), Q(-3), Q(1)]
    assert poly_is_squarefree(p, 1)

    p0 = minimal_polynomial(Matrix.zero(3, 3, 1))
    assert [c.as_rational() for c in p0] == [Q(0), Q(1)]

    pn = minimal_polynomial(M([[0, 1], [0, 0]]))
    assert [c.as_rational() for c in pn] == [Q(0), Q(0), Q(1)]
    assert not poly_is_squarefree(pn, 1)


def test_minimal_polynomial_rejects_rectangles():
    with pytest.raises(NotSquare):
        minimal_polynomial(Matrix.zero(2, 3, 1))


def test_minimal_polynomial_annihilates_randomized():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(1, 5)
        m = M([[Q(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)])
        p = minimal_polynomial(m)
        assert p[-1] == 1
        # evaluate p at m on every basis vector
        for s in range(n):
            v = {s: one(1)}
            acc = {}
            power = dict(v)
            for c in p:
                if c:
                    for i, w in power.items():
                        acc[i] = acc.get(i, zero(1)) + c * w
                power = m.apply(power)
            assert not {i: x for i, x in acc.items() if x}


def test_eigen_decompose_examples():
    eig, complete = eigen_decompose(M([[0, 0, 0], [0, 0, 0], [0, 0, 5]]), [0, 5])
    assert complete
    dims = {lam.as_rational(): sp.dim for lam, sp in eig}
    assert dims == {Q(0): 2, Q(5): 1}

    eig, complete = eigen_decompose(M([[0, 0], [0, 7]]), [0])
    assert not complete
    assert len(eig) == 1 and eig[0][1].dim == 1

    # ad h in basis (e, h, f): [h,e] = 2e, [h,f] = −2f
    ad_h = M([[2, 0, 0], [0, 0, 0], [0, 0, -2]])
    eig, complete = eigen_decompose(ad_h, [-2, 0, 2])
    assert complete and [sp.dim for _, sp in eig] == [1, 1, 1]
    total = eig[0][1].sum(eig[1][1]).sum(eig[2][1])
    assert total.dim == 3  # pairwise independent


def test_simultaneous_eigenspaces_examples():
    d = M([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    blocks, complete = simultaneous_eigenspaces([d, d], [[0, 1], [0, 1]])
    assert complete
    labels = {tuple(x.as_rational() for x in lab): sp.dim for lab, sp in blocks}
    assert labels == {(Q(1), Q(1)): 2, (Q(0), Q(0)): 1}

    a = M([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    b = M([[0, 0, 0], [0, 1, 0], [0, 0, 1]])
    blocks, complete = simultaneous_eigenspaces([a, b], [[0, 1], [0, 1]])
    assert complete and len(blocks) == 3
    assert all(sp.dim == 1 for _, sp in blocks)

    blocks, complete = simultaneous_eigenspaces([], [], dim=4, order=1)
    assert complete and len(blocks) == 1
    assert blocks[0][0] == () and blocks[0][1].dim == 4


def test_simultaneous_rejects_noncommuting():
    a = M([[0, 1], [0, 0]])
    b = M([[0, 0], [1, 0]])
    with pytest.raises(NonCommuting):
        simultaneous_eigenspaces([a, b], [[0], [0]])


def test_subspace_lattice_ops():
    e1 = Subspace.from_vectors([svec_from_dense([1, 0, 0], 1)], 3, 1)
    e2 = Subspace.from_vectors([svec_from_dense([0, 1, 0], 1)], 3, 1)
    assert e1.sum(e2).dim == 2

    s12 = Subspace.from_vectors(
        [svec_from_dense([1, 0, 0], 1), svec_from_dense([0, 1, 0], 1)], 3, 1
    )
    s23 = Subspace.from_vectors(
        [svec_from_dense([0, 1, 0], 1), svec_from_dense([0, 0, 1], 1)], 3, 1
    )
    inter = s12.intersect(s23)
    assert inter.dim == 1 and inter.basis[0] == {1: one(1)}

    assert s12.contains_vector({})  # zero vector lies in every subspace
    assert s12.contains_vector(svec_from_dense([2, 3, 0], 1))
    assert not s12.contains_vector(svec_from_dense([0, 0, 1], 1))


def test_subspace_ambient_mismatch():
    a = Subspace.full(2, 1)
    b = Subspace.full(3, 1)
    with pytest.raises(AmbientMismatch):
        a.sum(b)


def test_subspace_canonical_equality():
    # two generating sets of the same plane give the identical echelon basis
    a = Subspace.from_vectors(
        [svec_from_dense([1, 1, 0], 1), svec_from_dense([0, 1, 1], 1)], 3, 1
    )
    b = Subspace.from_vectors(
        [svec_from_dense([1, 2, 1], 1), svec_from_dense([2, 3, 1], 1)], 3, 1
    )
    assert a == b


def test_subspace_coords_pivot_read():
    s = Subspace.from_vectors(
        [svec_from_dense([1, 0, 2], 1), svec_from_dense([0, 1, 3], 1)], 3, 1
    )
    v = svec_from_dense([2, 5, 19], 1)
    cs = s.coords(v)
    assert [c.as_rational() for c in cs] == [Q(2), Q(5)]
    assert s.from_coords(cs) == v


def test_cyclotomic_eigenvalues():
    # the 2x2 rotation by ζ₃ over ℚ(ζ₃): eigenvalues ζ₃ and ζ₃²
    w = zeta(3)
    rot = Matrix.from_dense([[0, -1], [1, -1]], 3)
    p = minimal_polynomial(rot)
    assert poly_is_squarefree(p, 3)
    assert not poly_eval(p, w)
    eig, complete = eigen_decompose(rot, [w, w * w])
    assert complete and len(eig) == 2


def test_rational_roots():
    # (x−1)(x−2) = 2 − 3x + x²
    p = [from_rational(1, 2), from_rational(1, -3), one(1)]
    assert rational_roots(p) == [Q(1), Q(2)]
    # x² − x/2 = x(x − 1/2)
    p2 = [zero(1), from_rational(1, Q(-1, 2)), one(1)]
    assert rational_roots(p2) == [Q(0), Q(1, 2)]
    # x² + 1 has none
    p3 = [one(1), zero(1), one(1)]
    assert rational_roots(p3) == []
    # non-rational coefficients are signalled with None
    assert rational_roots([zeta(3), one(3)]) is None


def test_invert_examples():
    from rootgrade.exactla import invert

    ident = Matrix.identity(3, 1)
    assert invert(ident) == ident
    m = M([[2, 1], [1, 1]])
    inv = invert(m)
    assert m @ inv == Matrix.identity(2, 1)
    assert inv @ m == Matrix.identity(2, 1)
    assert invert(M([[1, 2], [2, 4]])) is None
    with pytest.raises(NotSquare):
        invert(Matrix.zero(2, 3, 1))


def test_invert_randomized_roundtrip():
    from rootgrade.exactla import invert

    rng = random.Random(23)
    done = 0
    while done < 20:
        n = rng.randint(1, 5)
        m = M([[Q(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)])
        inv = invert(m)
        if inv is None:
            continue
        assert m @ inv == Matrix.identity(n, 1)
        done += 1
