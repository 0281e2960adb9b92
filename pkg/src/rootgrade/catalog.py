"""Named registry of graded models, the analysis driver, and the summary table.

Every entry builds a split exceptional (or small orthogonal) Lie algebra
together with a distinguished grading, and records the invariants the build
is expected to reproduce: dimension, universal group, grading type, root
system of the induced weight decomposition, and the multiplicity-space
dimensions.  The expected blocks are measured values, never guesses; a
mismatch is reported, not repaired.

Heavy carriers (composition algebras, weighted Jordan algebras, the big
tensor products) are cached so that entries sharing a carrier build it once
per process.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

from .abgroup import FgAbelianGroup
from .algcore import StructAlgebra, antisymmetrize, derivations, multiply
from .constructions import (
    JordanAlgebra,
    albert_z33,
    graded_tits,
    hermitian_jordan,
    hermitian_jordan_slot_grading,
    hurwitz_cd,
    hyperbolic_jordan,
    zorn_octonions,
)
from .errors import BookkeepingMismatch, UnknownEntry
from .exactla import Matrix, SVec, Subspace, solve
from .grading import (
    Grading,
    grading_type,
    require_valid,
    trivial_grading,
    universal_group_of,
)
from .numfield import Scalar, from_rational
from . import rootpipe as rp

__all__ = [
    "REPORT_SCHEMA",
    "SubalgebraDesignation",
    "ExpectedInvariants",
    "CatalogEntry",
    "CATALOG",
    "catalog_names",
    "catalog_entry",
    "catalog_build",
    "analyze",
    "EntryCheck",
    "check_entry",
    "check_entries",
    "Table1Row",
    "TABLE1",
    "RowCheck",
    "table1_check",
    "CoordinateMatchReport",
    "match_recovered_coordinates",
]

REPORT_SCHEMA = "rootgrade-report/1"


# -- what a build hands to the pipeline -----------------------------------------


@dataclass(frozen=True)
class SubalgebraDesignation:
    """A grading plus the explicit basis indices of the canonical subalgebra.

    Needed when the grading group cannot separate the subalgebra from
    same-weight coordinate spaces (no torsion tells them apart); the indices
    say which basis vectors span it, everything else is still derived.
    """

    grading: Grading
    indices: tuple[int, ...]


@dataclass(frozen=True)
class _Coordinate:
    """Target coordinate algebra a recovered product should match."""

    name: str
    algebra: StructAlgebra
    unit: SVec
    zero_basis: tuple[SVec, ...]


@dataclass(frozen=True)
class _Built:
    """One constructed entry: the algebra, its grading data, match target."""

    algebra: StructAlgebra
    graded: Union[Grading, SubalgebraDesignation]
    coordinate: Optional[_Coordinate] = None


# -- shared carriers -------------------------------------------------------------

_HURWITZ_NAMES = {
    0: "ground field",
    1: "split binarions",
    2: "split quaternions",
    3: "split octonions",
}

_JORDAN_NAMES = {
    0: "symmetric 3x3 matrices",
    1: "hermitian 3x3 matrices over the split binarions",
    2: "hermitian 3x3 matrices over the split quaternions",
    3: "hermitian 3x3 matrices over the split octonions",
}


@lru_cache(maxsize=None)
def _hurwitz(level: int):
    return hurwitz_cd(level)


@lru_cache(maxsize=None)
def _zorn():
    return zorn_octonions()


@lru_cache(maxsize=None)
def _jordan(level: int) -> JordanAlgebra:
    return hermitian_jordan(_hurwitz(level)[0])


@lru_cache(maxsize=None)
def _weighted_jordan(level: int) -> tuple[JordanAlgebra, Grading]:
    """The hermitian 3x3 Jordan algebra regraded by a split Cartan.

    The doubling grading refines to the slot-and-coordinate grading, whose
    diagonalizable derivations contain a full Cartan of the derivation
    algebra; regrading by that Cartan turns the Jordan algebra into its
    weight decomposition, with the unit and the trace form carried along.
    """

    h, hg = _hurwitz(level)
    j = hermitian_jordan(h)
    slot = hermitian_jordan_slot_grading(j, hg)
    der = derivations(j.algebra, degrees=slot.degrees)
    der_grading = Grading(slot.group, tuple(der.degrees))
    cartan = rp.split_cartan(der.algebra, grading=der_grading)
    operators = []
    for vec in cartan.basis:
        acc: Optional[Matrix] = None
        for i, c in vec.items():
            term = der.maps[i].scale(c)
            acc = term if acc is None else acc + term
        assert acc is not None
        operators.append(acc)
    alg, grading, basis = rp.regrade_by_operators(j.algebra, operators)
    n, order = j.dim, j.algebra.order
    change = Matrix(
        n, n, [{c: col[r] for c, col in enumerate(basis) if col.get(r)} for r in range(n)], order
    )
    unit_coords = solve(change, j.unit)
    if unit_coords is None:
        raise BookkeepingMismatch("regraded basis does not span the Jordan algebra")
    unit = {i: v for i, v in enumerate(unit_coords) if v}
    weighted = JordanAlgebra(alg, unit, change.transpose() @ j.trace_form @ change)
    return weighted, grading


# -- entry builders ---------------------------------------------------------------


def _derivation_entry(carrier_alg: StructAlgebra, carrier_grading: Grading) -> _Built:
    der = derivations(carrier_alg, degrees=carrier_grading.degrees)
    return _Built(der.algebra, Grading(carrier_grading.group, tuple(der.degrees)))


def _build_g2_cartan() -> _Built:
    o, og = _zorn()
    return _derivation_entry(o.algebra, og)


def _build_g2_z2cubed() -> _Built:
    o, og = _hurwitz(3)
    return _derivation_entry(o.algebra, og)


def _build_f4_cartan() -> _Built:
    jw, jg = _weighted_jordan(3)
    return _derivation_entry(jw.algebra, jg)


def _build_f4_z3cubed() -> _Built:
    a, ag = albert_z33()
    return _derivation_entry(a.algebra, ag)


def _build_f4_z_z2cubed() -> _Built:
    o, og = _hurwitz(3)
    j, jg = hyperbolic_jordan()
    t, grading = graded_tits(o, og, j, jg)
    return _Built(t.algebra, grading)


def _build_f4_z2fifth() -> _Built:
    o, og = _hurwitz(3)
    j = _jordan(0)
    slot = hermitian_jordan_slot_grading(j, _hurwitz(0)[1])
    t, grading = graded_tits(o, og, j, slot)
    return _Built(t.algebra, grading)


def _f4row(level: int) -> _Built:
    h, hg = _hurwitz(level)
    jw, jg = _weighted_jordan(3)
    t, grading = graded_tits(h, hg, jw, jg)
    coordinate = None
    if level >= 1:
        coordinate = _Coordinate(_HURWITZ_NAMES[level], h.algebra, h.unit, t.h0_basis)
    return _Built(t.algebra, grading, coordinate)


def _build_e6_f4row() -> _Built:
    return _f4row(1)


def _build_e7_f4row() -> _Built:
    return _f4row(2)


def _build_e8_f4row() -> _Built:
    return _f4row(3)


def _build_e7_c3row() -> _Built:
    o, og = _hurwitz(3)
    jw, jg = _weighted_jordan(2)
    t, grading = graded_tits(o, og, jw, jg)
    return _Built(t.algebra, grading, _Coordinate(_HURWITZ_NAMES[3], o.algebra, o.unit, t.h0_basis))


def _build_e6_a2row() -> _Built:
    o, og = _hurwitz(3)
    jw, jg = _weighted_jordan(1)
    t, grading = graded_tits(o, og, jw, jg)
    return _Built(t.algebra, grading, _Coordinate(_HURWITZ_NAMES[3], o.algebra, o.unit, t.h0_basis))


def _g2row(level: int) -> _Built:
    """Weight-graded split octonions against an ungraded Jordan algebra.

    The grading group is free, so nothing separates the derivation block
    from coordinate lines at the same weight; the block is designated by its
    basis indices instead.
    """

    o, og = _zorn()
    j = _jordan(level)
    t, grading = graded_tits(o, og, j, trivial_grading(j.dim))
    designated = SubalgebraDesignation(grading, tuple(range(t.der_h_dim)))
    coordinate = _Coordinate(_JORDAN_NAMES[level], j.algebra, j.unit, t.j0_basis)
    return _Built(t.algebra, designated, coordinate)


def _build_f4_g2row() -> _Built:
    return _g2row(0)


def _build_e6_g2row() -> _Built:
    return _g2row(1)


def _build_e7_g2row() -> _Built:
    return _g2row(2)


def _build_e8_g2row() -> _Built:
    return _g2row(3)


def _cartan_refined(base_name: str) -> _Built:
    """Regrade a base entry by a split Cartan grown from its toral seed."""

    base = _built(base_name)
    alg = base.algebra
    assert isinstance(base.graded, Grading)
    _, canonical = universal_group_of(alg, base.graded)
    duals, _ = rp.weight_decomposition(alg, canonical)
    seed = Subspace.from_vectors(duals, alg.dim, alg.order)
    cartan = rp.split_cartan(alg, seed, grading=canonical)
    regraded, grading, _ = rp.regrade_by_cartan(alg, cartan, grading=canonical)
    return _Built(regraded, grading)


def _build_e6_cartan() -> _Built:
    return _cartan_refined("e6.f4row")


def _build_e7_cartan() -> _Built:
    return _cartan_refined("e7.f4row")


def _build_e8_cartan() -> _Built:
    return _cartan_refined("e8.f4row")


def _so5_built(vector_degrees: dict[int, tuple[int, ...]], torsion: tuple[int, ...]) -> _Built:
    """Antisymmetric 5x5 matrices graded by sign patterns on the columns.

    Basis M_ab (a < b) with M_ba = -M_ab, bracket
    [M_ij, M_kl] = d_jk M_il - d_ik M_jl - d_jl M_ik + d_il M_jk,
    and deg M_ab = deg(column a) + deg(column b).
    """

    pairs = [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]
    slot = {p: k for k, p in enumerate(pairs)}

    def signed(a: int, b: int) -> tuple[int, int]:
        if a == b:
            return -1, 0
        return (slot[(a, b)], 1) if a < b else (slot[(b, a)], -1)

    upper: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for x, (i, j) in enumerate(pairs):
        for y, (k, l) in enumerate(pairs):
            if y <= x:
                continue
            acc: dict[int, int] = {}
            for coef, present, a, b in (
                (1, j == k, i, l),
                (-1, i == k, j, l),
                (-1, j == l, i, k),
                (1, i == l, j, k),
            ):
                if not present:
                    continue
                idx, sign = signed(a, b)
                if idx >= 0:
                    acc[idx] = acc.get(idx, 0) + coef * sign
            terms = [(m, c) for m, c in sorted(acc.items()) if c]
            if terms:
                upper[(x, y)] = terms

    alg = StructAlgebra(
        len(pairs),
        antisymmetrize(upper),
        labels=[f"M{a}{b}" for a, b in pairs],
        flags=("lie",),
    )
    group = FgAbelianGroup(0, torsion)
    degrees = tuple(
        group.element(
            tor=tuple(
                (u + v) % n
                for u, v, n in zip(vector_degrees[a], vector_degrees[b], torsion)
            )
        )
        for a, b in pairs
    )
    return _Built(alg, Grading(group, degrees))


def _build_so5_z2cubed() -> _Built:
    degrees = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1), 4: (1, 1, 1), 5: (0, 0, 0)}
    return _so5_built(degrees, (2, 2, 2))


def _build_so5_z2fourth() -> _Built:
    degrees = {
        1: (1, 0, 0, 0),
        2: (0, 1, 0, 0),
        3: (0, 0, 1, 0),
        4: (0, 0, 0, 1),
        5: (0, 0, 0, 0),
    }
    return _so5_built(degrees, (2, 2, 2, 2))


def _build_f4_bc1() -> _Built:
    return _built("f4.z_z2cubed")


# -- the registry -----------------------------------------------------------------


@dataclass(frozen=True)
class ExpectedInvariants:
    """Golden block an entry must reproduce; every value is a measurement."""

    dim: int
    universal_group: str
    grading_type: tuple[int, ...]
    root_system: Optional[str]
    isotypic: Optional[tuple[int, Optional[int], Optional[int], int]]


@dataclass(frozen=True)
class CatalogEntry:
    """One named model: how to build it and what it must look like."""

    name: str
    summary: str
    builder: Callable[[], _Built]
    fine: bool
    expected: ExpectedInvariants
    table_row: Optional[str] = None


def _g2row_type(coordinate_dim: int) -> tuple[int, ...]:
    short = 1 + coordinate_dim - 1
    neutral = 2 + (coordinate_dim - 1) + _G2ROW_DERJ[coordinate_dim]
    out = [0] * neutral
    out[0] = 6
    out[short - 1] = 6
    out[neutral - 1] = 1
    return tuple(out)


_G2ROW_DERJ = {6: 3, 9: 8, 15: 21, 27: 52}


CATALOG: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry) -> None:
    CATALOG[entry.name] = entry


_register(
    CatalogEntry(
        "g2.cartan",
        "derivations of the weight-graded split octonions",
        _build_g2_cartan,
        fine=True,
        expected=ExpectedInvariants(14, "Z^2", (12, 1), "G2", (1, 0, None, 0)),
        table_row="G2/G2",
    )
)
_register(
    CatalogEntry(
        "g2.z2cubed",
        "derivations of the doubled split octonions with the doubling grading",
        _build_g2_z2cubed,
        fine=True,
        expected=ExpectedInvariants(14, "Z2^3", (0, 7), None, None),
    )
)
_register(
    CatalogEntry(
        "f4.cartan",
        "derivations of the weight-graded exceptional Jordan algebra",
        _build_f4_cartan,
        fine=True,
        expected=ExpectedInvariants(52, "Z^4", (48, 0, 0, 1), "F4", (1, 0, None, 0)),
        table_row="F4/F4",
    )
)
_register(
    CatalogEntry(
        "f4.z_z2cubed",
        "doubled split octonions paired with the rank-one hyperbolic Jordan algebra",
        _build_f4_z_z2cubed,
        fine=True,
        expected=ExpectedInvariants(52, "Z x Z2^3", (31, 0, 7), "BC1", (1, 7, None, 14)),
    )
)
_register(
    CatalogEntry(
        "f4.z2fifth",
        "doubled split octonions paired with the slot-graded symmetric 3x3 matrices",
        _build_f4_z2fifth,
        fine=True,
        expected=ExpectedInvariants(52, "Z2^5", (24, 0, 0, 7), None, None),
    )
)
_register(
    CatalogEntry(
        "f4.z3cubed",
        "derivations of the order-3 graded exceptional Jordan algebra",
        _build_f4_z3cubed,
        fine=True,
        expected=ExpectedInvariants(52, "Z3^3", (0, 26), None, None),
    )
)
_register(
    CatalogEntry(
        "e6.cartan",
        "the e6.f4row entry regraded by a grown split Cartan",
        _build_e6_cartan,
        fine=True,
        expected=ExpectedInvariants(
            78, "Z^6", (72, 0, 0, 0, 0, 1), "E6", (1, None, None, 0)
        ),
        table_row="E6/E6",
    )
)
_register(
    CatalogEntry(
        "e6.f4row",
        "split binarions paired with the weight-graded exceptional Jordan algebra",
        _build_e6_f4row,
        fine=True,
        expected=ExpectedInvariants(78, "Z^4 x Z2", (72, 1, 0, 1), "F4", (1, 1, None, 0)),
        table_row="E6/F4",
    )
)
_register(
    CatalogEntry(
        "e7.cartan",
        "the e7.f4row entry regraded by a grown split Cartan",
        _build_e7_cartan,
        fine=True,
        expected=ExpectedInvariants(
            133, "Z^7", (126, 0, 0, 0, 0, 0, 1), "E7", (1, None, None, 0)
        ),
        table_row="E7/E7",
    )
)
_register(
    CatalogEntry(
        "e7.f4row",
        "split quaternions paired with the weight-graded exceptional Jordan algebra",
        _build_e7_f4row,
        fine=True,
        expected=ExpectedInvariants(
            133, "Z^4 x Z2^2", (120, 0, 3, 1), "F4", (1, 3, None, 3)
        ),
        table_row="E7/F4",
    )
)
_register(
    CatalogEntry(
        "e7.c3row",
        "doubled split octonions paired with the weight-graded quaternionic hermitian matrices",
        _build_e7_c3row,
        fine=True,
        expected=ExpectedInvariants(
            133, "Z^3 x Z2^3", (102, 0, 1, 7), "C3", (1, 7, None, 14)
        ),
        table_row="E7/C3",
    )
)
_register(
    CatalogEntry(
        "e8.cartan",
        "the e8.f4row entry regraded by a grown split Cartan",
        _build_e8_cartan,
        fine=True,
        expected=ExpectedInvariants(
            248, "Z^8", (240, 0, 0, 0, 0, 0, 0, 1), "E8", (1, None, None, 0)
        ),
        table_row="E8/E8",
    )
)
_register(
    CatalogEntry(
        "e8.f4row",
        "doubled split octonions paired with the weight-graded exceptional Jordan algebra",
        _build_e8_f4row,
        fine=True,
        expected=ExpectedInvariants(
            248, "Z^4 x Z2^3", (216, 0, 0, 8), "F4", (1, 7, None, 14)
        ),
        table_row="E8/F4",
    )
)
_register(
    CatalogEntry(
        "e8.g2row",
        "weight-graded split octonions against the ungraded exceptional Jordan algebra",
        _build_e8_g2row,
        fine=False,
        expected=ExpectedInvariants(248, "Z^2", _g2row_type(27), "G2", (1, 26, None, 52)),
        table_row="E8/G2",
    )
)
_register(
    CatalogEntry(
        "e7.g2row",
        "weight-graded split octonions against the ungraded quaternionic hermitian matrices",
        _build_e7_g2row,
        fine=False,
        expected=ExpectedInvariants(133, "Z^2", _g2row_type(15), "G2", (1, 14, None, 21)),
        table_row="E7/G2",
    )
)
_register(
    CatalogEntry(
        "e6.g2row",
        "weight-graded split octonions against the ungraded binarion hermitian matrices",
        _build_e6_g2row,
        fine=False,
        expected=ExpectedInvariants(78, "Z^2", _g2row_type(9), "G2", (1, 8, None, 8)),
        table_row="E6/G2",
    )
)
_register(
    CatalogEntry(
        "f4.g2row",
        "weight-graded split octonions against the ungraded symmetric 3x3 matrices",
        _build_f4_g2row,
        fine=False,
        expected=ExpectedInvariants(52, "Z^2", _g2row_type(6), "G2", (1, 5, None, 3)),
        table_row="F4/G2",
    )
)
_register(
    CatalogEntry(
        "e6.a2row",
        "doubled split octonions paired with the weight-graded binarion hermitian matrices",
        _build_e6_a2row,
        fine=False,
        expected=ExpectedInvariants(
            78, "Z^2 x Z2^3", (48, 1, 0, 7), "A2", (8, None, None, 14)
        ),
        table_row="E6/A2",
    )
)
_register(
    CatalogEntry(
        "f4.bc1",
        "alias of f4.z_z2cubed, named for its nonreduced weight system",
        _build_f4_bc1,
        fine=True,
        expected=ExpectedInvariants(52, "Z x Z2^3", (31, 0, 7), "BC1", (1, 7, None, 14)),
    )
)
_register(
    CatalogEntry(
        "so5.remark_z2cubed",
        "antisymmetric 5x5 matrices graded by three column sign patterns",
        _build_so5_z2cubed,
        fine=False,
        expected=ExpectedInvariants(10, "Z2^3", (4, 3), None, None),
    )
)
_register(
    CatalogEntry(
        "so5.remark_z2fourth",
        "antisymmetric 5x5 matrices graded by four column sign patterns",
        _build_so5_z2fourth,
        fine=False,
        expected=ExpectedInvariants(10, "Z2^4", (10,), None, None),
    )
)


def catalog_names() -> list[str]:
    return list(CATALOG)


def catalog_entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        known = ", ".join(CATALOG)
        raise UnknownEntry(f"no catalog entry named {name!r}; known entries: {known}") from None


@lru_cache(maxsize=None)
def _built(name: str) -> _Built:
    return catalog_entry(name).builder()


def catalog_build(name: str) -> tuple[StructAlgebra, Union[Grading, SubalgebraDesignation]]:
    """Build a named entry: the algebra and its grading (or designation)."""

    built = _built(name)
    return built.algebra, built.graded


# -- the analysis driver ------------------------------------------------------------


@dataclass
class _PipelineRun:
    """Mid-pipeline objects kept for callers that need more than the report."""

    algebra: StructAlgebra
    canonical: Grading
    group: FgAbelianGroup
    datum: Optional[rp.RootDatum]
    sub: Optional[rp.GradingSubalgebra]
    iso: Optional[rp.IsotypicReport]
    report: dict


def _run_pipeline(
    alg: StructAlgebra,
    graded: Union[Grading, SubalgebraDesignation],
    *,
    sweep: int = rp.DEFAULT_SWEEP,
) -> _PipelineRun:
    indices: Optional[tuple[int, ...]] = None
    grading = graded
    if isinstance(graded, SubalgebraDesignation):
        grading = graded.grading
        indices = graded.indices

    timings: dict[str, float] = {}
    checks: dict[str, bool] = {}

    start = time.perf_counter()
    require_valid(alg, grading)
    timings["validate"] = time.perf_counter() - start
    checks["grading_valid"] = True

    start = time.perf_counter()
    group, canonical = universal_group_of(alg, grading)
    timings["universal"] = time.perf_counter() - start

    type_tuple = grading_type(alg, canonical)

    start = time.perf_counter()
    toral = rp.check_neutral_toral(alg, canonical, sweep=sweep)
    free_rank = rp.check_free_rank(alg, canonical)
    timings["conditions"] = time.perf_counter() - start
    checks["neutral_toral"] = toral.ok
    checks["free_rank_matches"] = free_rank.ok

    report: dict = {
        "schema": REPORT_SCHEMA,
        "grading_type": list(type_tuple),
        "universal_group": {
            "free_rank": group.free_rank,
            "torsion": list(group.torsion),
            "rendered": str(group),
        },
        "fine_necessary_conditions": {
            "neutral_toral": toral.ok,
            "free_rank_matches": free_rank.ok,
            "weights_match_coarsening": None,
        },
        "root_system": None,
        "isotypic": None,
        "coordinate_flags": None,
    }

    if group.free_rank == 0:
        report["note"] = "finite universal group; pipeline not applicable"
        report["checks"] = checks
        report["timings"] = timings
        return _PipelineRun(alg, canonical, group, None, None, None, report)

    start = time.perf_counter()
    duals, data = rp.weight_decomposition(alg, canonical)
    timings["weights"] = time.perf_counter() - start
    checks["weights_match_coarsening"] = True
    report["fine_necessary_conditions"]["weights_match_coarsening"] = True

    start = time.perf_counter()
    datum = rp.killing_weight_geometry(alg, duals, data)
    datum = rp.classify_root_system(datum)
    timings["geometry"] = time.perf_counter() - start
    assert datum.type_label is not None
    checks["root_system_recognized"] = True
    report["root_system"] = {
        "type": datum.type_label,
        "reduced": not datum.type_label.startswith("BC"),
        "rank": datum.rank,
    }

    start = time.perf_counter()
    sub = rp.grading_subalgebra(alg, canonical, datum, indices=indices)
    graded_report = rp.check_root_graded(alg, canonical, sub, datum)
    timings["subalgebra"] = time.perf_counter() - start
    checks["subalgebra_center_trivial"] = sub.center_trivial
    checks["subalgebra_killing_nondegenerate"] = sub.killing_nondegenerate
    checks["subalgebra_roots_match"] = graded_report.subalgebra_roots_match
    checks["weights_inside_system"] = graded_report.weights_inside_system
    checks["zero_space_saturated"] = graded_report.zero_space_saturated

    start = time.perf_counter()
    iso = rp.isotypic_dims(alg, sub, datum)
    iso = rp.coordinate_torsion_grading(alg, canonical, sub, datum, iso)
    timings["isotypic"] = time.perf_counter() - start
    checks["isotypic_dimensions_consistent"] = True
    assert iso.flags is not None
    checks["coordinate_flags_all"] = all(iso.flags.values())

    report["isotypic"] = {
        "dimA": iso.dims[0],
        "dimB": iso.dims[1],
        "dimC": iso.dims[2],
        "dimD": iso.dims[3],
    }
    report["coordinate_flags"] = dict(iso.flags)
    report["checks"] = checks
    report["timings"] = timings
    return _PipelineRun(alg, canonical, group, datum, sub, iso, report)


def analyze(
    alg: StructAlgebra,
    graded: Union[Grading, SubalgebraDesignation],
    *,
    sweep: int = rp.DEFAULT_SWEEP,
) -> dict:
    """Run the whole weight pipeline and return the report dictionary.

    The report is deterministic byte for byte except for the "timings"
    block.  Pipeline failures raise; nothing is swallowed into the report.
    """

    return _run_pipeline(alg, graded, sweep=sweep).report


@lru_cache(maxsize=None)
def _pipeline_by_name(name: str, sweep: int = rp.DEFAULT_SWEEP) -> _PipelineRun:
    built = _built(name)
    return _run_pipeline(built.algebra, built.graded, sweep=sweep)


def _analysis(name: str, sweep: int = rp.DEFAULT_SWEEP) -> dict:
    return _pipeline_by_name(name, sweep).report


# -- golden comparison ----------------------------------------------------------------


@dataclass(frozen=True)
class EntryCheck:
    """Result of comparing one entry's build against its expected block."""

    name: str
    ok: bool
    mismatches: tuple[str, ...]
    report: dict


def check_entry(name: str, *, sweep: int = rp.DEFAULT_SWEEP) -> EntryCheck:
    entry = catalog_entry(name)
    built = _built(name)
    report = _analysis(name, sweep)
    expected = entry.expected
    mismatches: list[str] = []

    if built.algebra.dim != expected.dim:
        mismatches.append(f"dim: expected {expected.dim}, got {built.algebra.dim}")
    got_type = tuple(report["grading_type"])
    if got_type != expected.grading_type:
        mismatches.append(
            f"grading_type: expected {expected.grading_type}, got {got_type}"
        )
    got_group = report["universal_group"]["rendered"]
    if got_group != expected.universal_group:
        mismatches.append(
            f"universal_group: expected {expected.universal_group}, got {got_group}"
        )
    got_system = report["root_system"]["type"] if report["root_system"] else None
    if got_system != expected.root_system:
        mismatches.append(
            f"root_system: expected {expected.root_system}, got {got_system}"
        )
    got_iso = None
    if report["isotypic"] is not None:
        iso = report["isotypic"]
        got_iso = (iso["dimA"], iso["dimB"], iso["dimC"], iso["dimD"])
    if got_iso != expected.isotypic:
        mismatches.append(f"isotypic: expected {expected.isotypic}, got {got_iso}")

    return EntryCheck(name, not mismatches, tuple(mismatches), report)


def check_entries(
    names: Optional[Sequence[str]] = None, *, sweep: int = rp.DEFAULT_SWEEP
) -> list[EntryCheck]:
    chosen = list(names) if names is not None else catalog_names()
    return [check_entry(name, sweep=sweep) for name in chosen]


# -- the summary table ------------------------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    """One row of the multiplicity table: ambient type over weight type."""

    label: str
    dims: tuple[int, Optional[int], Optional[int], int]
    entry: Optional[str]

    @property
    def constructible(self) -> bool:
        return self.entry is not None

    @property
    def status(self) -> str:
        return "constructible" if self.constructible else "not constructible"


TABLE1: tuple[Table1Row, ...] = (
    Table1Row("G2/G2", (1, 0, None, 0), "g2.cartan"),
    Table1Row("F4/G2", (1, 5, None, 3), "f4.g2row"),
    Table1Row("F4/F4", (1, 0, None, 0), "f4.cartan"),
    Table1Row("E6/A2", (8, None, None, 14), "e6.a2row"),
    Table1Row("E6/BC2", (5, 1, 2, 4), None),
    Table1Row("E6/G2", (1, 8, None, 8), "e6.g2row"),
    Table1Row("E6/F4", (1, 1, None, 0), "e6.f4row"),
    Table1Row("E6/E6", (1, 0, None, 0), "e6.cartan"),
    Table1Row("E7/BC2", (7, 1, 8, 9), None),
    Table1Row("E7/G2", (1, 14, None, 21), "e7.g2row"),
    Table1Row("E7/C3", (1, 7, None, 14), "e7.c3row"),
    Table1Row("E7/F4", (1, 3, None, 3), "e7.f4row"),
    Table1Row("E7/E7", (1, 0, None, 0), "e7.cartan"),
    Table1Row("E8/BC2", (11, 1, 20, 24), None),
    Table1Row("E8/G2", (1, 26, None, 52), "e8.g2row"),
    Table1Row("E8/F4", (1, 7, None, 14), "e8.f4row"),
    Table1Row("E8/E8", (1, 0, None, 0), "e8.cartan"),
)


@dataclass(frozen=True)
class RowCheck:
    """Comparison of one table row against the matching entry's pipeline."""

    row: Table1Row
    ok: Optional[bool]
    computed: Optional[tuple[int, Optional[int], Optional[int], int]]
    system_ok: Optional[bool]


def _dims_agree(
    computed: Sequence[Optional[int]], golden: Sequence[Optional[int]]
) -> bool:
    """A missing summand and a multiplicity-zero summand state the same fact."""

    return all((a or 0) == (b or 0) for a, b in zip(computed, golden))


def table1_check(*, sweep: int = rp.DEFAULT_SWEEP) -> list[RowCheck]:
    """Reproduce every constructible table row from its catalog entry."""

    out: list[RowCheck] = []
    for row in TABLE1:
        if row.entry is None:
            out.append(RowCheck(row, None, None, None))
            continue
        report = _analysis(row.entry, sweep)
        iso = report["isotypic"]
        computed = (iso["dimA"], iso["dimB"], iso["dimC"], iso["dimD"])
        wanted_system = row.label.split("/")[1]
        system_ok = (
            report["root_system"] is not None
            and report["root_system"]["type"] == wanted_system
        )
        ok = system_ok and _dims_agree(computed, row.dims)
        out.append(RowCheck(row, ok, computed, system_ok))
    return out


# -- matching a recovered coordinate product ----------------------------------------------


@dataclass(frozen=True)
class CoordinateMatchReport:
    """Exact comparison of a recovered product with its catalog target."""

    entry: str
    target: str
    dim: int
    scale: Scalar
    matched: bool
    witness: Optional[str] = None


def _dense(vec: SVec, n: int, order: int) -> list[Scalar]:
    zero = from_rational(order, 0)
    out = [zero] * n
    for i, v in vec.items():
        out[i] = v
    return out


def match_recovered_coordinates(
    name: str, *, sweep: int = rp.DEFAULT_SWEEP
) -> CoordinateMatchReport:
    """Match the transported product against the entry's coordinate algebra.

    The identification sends the recovered anchor to the target unit and the
    k-th remaining basis vector to s times the k-th trace-zero basis vector,
    for a single scale s solved from the first product with a trace-zero
    component (or as a rational square root of a unit coefficient when every
    product is a multiple of the unit).  Every product pair is then compared
    exactly; the first disagreement is reported as a witness.
    """

    built = _built(name)
    if built.coordinate is None:
        raise UnknownEntry(f"catalog entry {name!r} designates no coordinate algebra")
    run = _pipeline_by_name(name, sweep)
    if run.sub is None or run.datum is None:
        raise BookkeepingMismatch("the pipeline did not reach a weight decomposition")
    recovered = rp.recover_A_product(run.algebra, run.sub, run.datum)

    coordinate = built.coordinate
    target = coordinate.algebra
    n = target.dim
    order = target.order
    if recovered.dim != n or len(coordinate.zero_basis) + 1 != n:
        raise BookkeepingMismatch(
            f"recovered dimension {recovered.dim} does not fit the"
            f" {n}-dimensional target {coordinate.name!r}"
        )

    columns = [coordinate.unit, *coordinate.zero_basis]
    basis_matrix = Matrix(
        n,
        n,
        [{c: col[r] for c, col in enumerate(columns) if col.get(r)} for r in range(n)],
        order,
    )

    def coords(vec: SVec) -> list[Scalar]:
        sol = solve(basis_matrix, vec)
        if sol is None:
            raise BookkeepingMismatch("the unit and trace-zero basis do not span the target")
        return sol

    one = from_rational(order, 1)
    for z in coordinate.zero_basis:
        if _dense(multiply(target, coordinate.unit, z), n, order) != _dense(z, n, order):
            raise BookkeepingMismatch("the designated unit is not a unit of the target")

    pair_coords: dict[tuple[int, int], list[Scalar]] = {}
    for a in range(n - 1):
        for b in range(n - 1):
            pair_coords[(a, b)] = coords(
                multiply(target, coordinate.zero_basis[a], coordinate.zero_basis[b])
            )

    def recovered_coeffs(i: int, j: int) -> list[Scalar]:
        return _dense(multiply(recovered, {i: one}, {j: one}), n, order)

    scale: Optional[Scalar] = None
    for (a, b) in sorted(pair_coords):
        target_c = pair_coords[(a, b)]
        rec_c = recovered_coeffs(a + 1, b + 1)
        for m in range(1, n):
            if target_c[m]:
                scale = rec_c[m] / target_c[m]
                break
        if scale is not None:
            break

    if scale is None:
        # every trace-zero product is a multiple of the unit (the 2-dim case):
        # the unit coefficient determines the scale up to sign.
        tau = pair_coords[(0, 0)][0]
        c0 = recovered_coeffs(1, 1)[0]
        if not tau:
            return CoordinateMatchReport(
                name, coordinate.name, n, from_rational(order, 0), False,
                "target square has no unit coefficient to solve against",
            )
        ratio = c0 / tau
        if not ratio.is_rational():
            return CoordinateMatchReport(
                name, coordinate.name, n, from_rational(order, 0), False,
                "scale squared is not rational",
            )
        frac = ratio.as_rational()
        if frac <= 0:
            return CoordinateMatchReport(
                name, coordinate.name, n, from_rational(order, 0), False,
                f"scale squared is not positive: {frac}",
            )
        num_root = math.isqrt(frac.numerator)
        den_root = math.isqrt(frac.denominator)
        if num_root * num_root != frac.numerator or den_root * den_root != frac.denominator:
            return CoordinateMatchReport(
                name, coordinate.name, n, from_rational(order, 0), False,
                f"scale squared is not a rational square: {frac}",
            )
        scale = from_rational(order, Fraction(num_root, den_root))

    if not scale:
        return CoordinateMatchReport(
            name, coordinate.name, n, scale, False, "scale collapsed to zero"
        )

    scale_sq = scale * scale
    for (a, b), target_c in sorted(pair_coords.items()):
        rec_c = recovered_coeffs(a + 1, b + 1)
        if rec_c[0] != scale_sq * target_c[0]:
            return CoordinateMatchReport(
                name, coordinate.name, n, scale, False,
                f"unit coefficient of pair ({a}, {b}) disagrees",
            )
        for m in range(1, n):
            if rec_c[m] != scale * target_c[m]:
                return CoordinateMatchReport(
                    name, coordinate.name, n, scale, False,
                    f"coefficient {m} of pair ({a}, {b}) disagrees",
                )
    return CoordinateMatchReport(name, coordinate.name, n, scale, True)
