"""Grading engine: verification, types, coarsening, refinement, universality."""

from __future__ import annotations

import pytest

from rootgrade.abgroup import FgAbelianGroup, GroupHom
from rootgrade.algcore import StructAlgebra, antisymmetrize
from rootgrade.errors import DimMismatch, DomainMismatch, NotAGrading
from rootgrade.grading import (
    Grading,
    RefinementReport,
    grading_type,
    induced_grading,
    is_refinement,
    is_special,
    neutral_component,
    require_valid,
    support,
    trivial_grading,
    universal_group_of,
    verify_grading,
)

Z = FgAbelianGroup(1, ())
Z2 = FgAbelianGroup(0, (2,))


def sl2():
    upper = {(0, 1): [(0, -2)], (0, 2): [(1, 1)], (1, 2): [(2, -2)]}
    return StructAlgebra(3, antisymmetrize(upper), labels=["e", "h", "f"], flags=("lie",))


def cartan_grading():
    # e ↦ 1, h ↦ 0, f ↦ −1
    return Grading(Z, (Z.element((1,)), Z.element((0,)), Z.element((-1,))))


def test_verify_grading_valid_and_violation():
    L = sl2()
    assert verify_grading(L, cartan_grading()).valid
    # deg(e) = 1, everything else 0: [e, f] = h forces degree 1 on h
    bad = Grading(Z, (Z.element((1,)), Z.element((0,)), Z.element((0,))))
    report = verify_grading(L, bad)
    assert not report.valid
    assert (0, 2, 1) in report.violations
    with pytest.raises(NotAGrading):
        require_valid(L, bad)
    with pytest.raises(DimMismatch):
        verify_grading(L, Grading(Z, (Z.zero(),)))


def test_grading_type_and_support():
    L = sl2()
    assert grading_type(L, cartan_grading()) == (3,)
    assert grading_type(L, trivial_grading(3)) == (0, 0, 1)
    degs = [d.sort_key()[0][0] for d in support(cartan_grading())]
    assert degs == [-1, 0, 1]


def test_neutral_component_and_special():
    L = sl2()
    neutral = neutral_component(L, cartan_grading())
    assert neutral.dim == 1 and neutral.contains_vector({1: L.basis_column(1)[1]})
    assert not is_special(L, cartan_grading())
    shifted = Grading(Z2, (Z2.element((), (1,)),) * 3)
    assert is_special(L, shifted)


def test_induced_grading_coarsens():
    L = sl2()
    to_z2 = GroupHom(Z, Z2, ((1,),))
    coarse = induced_grading(cartan_grading(), to_z2)
    assert verify_grading(L, coarse).valid
    assert grading_type(L, coarse) == (1, 1)  # {h} in 0̄, {e, f} in 1̄
    with pytest.raises(DomainMismatch):
        induced_grading(coarse, to_z2)


def test_is_refinement_cases():
    fine = cartan_grading()
    assert is_refinement(fine, fine) == RefinementReport(True, False)
    to_z2 = GroupHom(Z, Z2, ((1,),))
    coarse = induced_grading(fine, to_z2)
    assert is_refinement(fine, coarse) == RefinementReport(True, True)
    assert not is_refinement(coarse, fine).refines
    everything = trivial_grading(3)
    assert is_refinement(fine, everything) == RefinementReport(True, True)
    with pytest.raises(DimMismatch):
        is_refinement(fine, trivial_grading(2))


def test_universal_group_recovers_z_from_torsion_presentation():
    # the Cartan grading written over ℤ₁₀₀ still presents ℤ universally
    L = sl2()
    z100 = FgAbelianGroup(0, (100,))
    folded = Grading(
        z100,
        (z100.element((), (1,)), z100.element((), (0,)), z100.element((), (99,))),
    )
    assert verify_grading(L, folded).valid
    group, regraded = universal_group_of(L, folded)
    assert group.is_isomorphic(Z)
    assert verify_grading(L, regraded).valid
    assert grading_type(L, regraded) == (3,)
    e_deg, f_deg = regraded.degrees[0], regraded.degrees[2]
    assert (e_deg + f_deg).is_zero() and not e_deg.is_zero()


def test_universal_group_trivial_grading():
    L = sl2()
    group, regraded = universal_group_of(L, trivial_grading(3))
    assert group.is_trivial()
    assert all(d.is_zero() for d in regraded.degrees)


def test_universal_group_relabeling_invariance():
    # an injective relabeling (degree doubling into a bigger ℤ) changes nothing
    L = sl2()
    doubled = Grading(Z, (Z.element((2,)), Z.element((0,)), Z.element((-2,))))
    g1, r1 = universal_group_of(L, cartan_grading())
    g2, r2 = universal_group_of(L, doubled)
    assert g1.is_isomorphic(g2)
    assert [d.sort_key() for d in r1.degrees] == [d.sort_key() for d in r2.degrees]
