"""Group gradings on structure-constant algebras.

A grading is stored as one degree per basis index, so homogeneous components
are always spans of basis vectors.  Every construction in this package emits
its basis already split along the grading, which keeps verification a pure
structure-constant scan and makes component bookkeeping exact integer
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .abgroup import FgAbelianGroup, GroupElem, GroupHom
from .abgroup import universal_group as _present_universal
from .algcore import StructAlgebra
from .errors import DimMismatch, DomainMismatch, NotAGrading
from .exactla import Subspace, SVec
from .numfield import one as field_one


@dataclass(frozen=True)
class Grading:
    """A degree map basis index → group element; components are basis spans."""

    group: FgAbelianGroup
    degrees: tuple[GroupElem, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", tuple(self.degrees))
        for d in self.degrees:
            if d.group != self.group:
                raise DomainMismatch(f"degree {d} does not live in {self.group}")

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def components(self) -> list[tuple[GroupElem, tuple[int, ...]]]:
        """(degree, basis indices) pairs, ordered by degree sort key."""
        buckets: dict[GroupElem, list[int]] = {}
        for i, d in enumerate(self.degrees):
            buckets.setdefault(d, []).append(i)
        return [
            (d, tuple(buckets[d]))
            for d in sorted(buckets, key=lambda g: g.sort_key())
        ]


def trivial_grading(dim: int) -> Grading:
    """Everything in degree zero over the trivial group."""
    group = FgAbelianGroup(0, ())
    return Grading(group, tuple(group.zero() for _ in range(dim)))


@dataclass(frozen=True)
class GradingReport:
    valid: bool
    violations: tuple[tuple[int, int, int], ...]


def verify_grading(
    alg: StructAlgebra, grading: Grading, *, max_witnesses: int = 10
) -> GradingReport:
    """Scan every structure constant for deg(k) = deg(i) + deg(j)."""

    degrees = grading.degrees
    if len(degrees) != alg.dim:
        raise DimMismatch(
            f"{len(degrees)} degrees for an algebra of dimension {alg.dim}"
        )
    violations: list[tuple[int, int, int]] = []
    for (i, j), terms in sorted(alg.products.items()):
        want = degrees[i] + degrees[j]
        for k, _ in terms:
            if degrees[k] != want:
                violations.append((i, j, k))
                if len(violations) >= max_witnesses:
                    return GradingReport(False, tuple(violations))
    return GradingReport(not violations, tuple(violations))


def require_valid(alg: StructAlgebra, grading: Grading) -> Grading:
    """verify_grading or raise NotAGrading with the first witness."""

    report = verify_grading(alg, grading)
    if not report.valid:
        i, j, k = report.violations[0]
        raise NotAGrading(
            f"product ({i}, {j}) hits index {k} outside degree "
            f"{grading.degrees[i] + grading.degrees[j]}"
        )
    return grading


def grading_type(alg: StructAlgebra, grading: Grading) -> tuple[int, ...]:
    """nᵢ = number of homogeneous components of dimension i (1-based)."""

    if len(grading.degrees) != alg.dim:
        raise DimMismatch("grading does not fit the algebra")
    sizes = [len(idx) for _, idx in grading.components()]
    if not sizes:
        return ()
    counts = [0] * max(sizes)
    for s in sizes:
        counts[s - 1] += 1
    return tuple(counts)


def support(grading: Grading) -> list[GroupElem]:
    return [d for d, _ in grading.components()]


def neutral_component(alg: StructAlgebra, grading: Grading) -> Subspace:
    indices = [i for i, d in enumerate(grading.degrees) if d.is_zero()]
    e = field_one(alg.order)
    basis: list[SVec] = [{i: e} for i in indices]
    return Subspace(alg.dim, alg.order, basis, indices)


def is_special(alg: StructAlgebra, grading: Grading) -> bool:
    """Special gradings have no neutral component at all."""
    return not any(d.is_zero() for d in grading.degrees)


def induced_grading(grading: Grading, hom: GroupHom) -> Grading:
    """Push the degrees through a group homomorphism (coarsening)."""

    if hom.domain != grading.group:
        raise DomainMismatch(
            f"homomorphism domain {hom.domain} does not match {grading.group}"
        )
    return Grading(hom.codomain, tuple(hom(d) for d in grading.degrees))


@dataclass(frozen=True)
class RefinementReport:
    refines: bool
    proper: bool


def is_refinement(fine: Grading, coarse: Grading) -> RefinementReport:
    """Is every component of `fine` inside a component of `coarse`?

    Components are basis spans, so subspace containment is index-set
    containment; `proper` records that some coarse component strictly
    contains a fine one.
    """

    if fine.dim != coarse.dim:
        raise DimMismatch("gradings live on different algebras")
    coarse_of_fine: dict[GroupElem, set[GroupElem]] = {}
    for i, d in enumerate(fine.degrees):
        coarse_of_fine.setdefault(d, set()).add(coarse.degrees[i])
    if any(len(targets) > 1 for targets in coarse_of_fine.values()):
        return RefinementReport(False, False)
    coarse_sizes: dict[GroupElem, int] = {}
    for d in coarse.degrees:
        coarse_sizes[d] = coarse_sizes.get(d, 0) + 1
    fine_sizes: dict[GroupElem, int] = {}
    for d in fine.degrees:
        fine_sizes[d] = fine_sizes.get(d, 0) + 1
    proper = any(
        coarse_sizes[next(iter(targets))] > fine_sizes[d]
        for d, targets in coarse_of_fine.items()
    )
    return RefinementReport(True, proper)


def universal_group_of(
    alg: StructAlgebra, grading: Grading
) -> tuple[FgAbelianGroup, Grading]:
    """The group presented on the support by the nonzero-product relations.

    Every witness x_i x_j ≠ 0 forces deg(i) + deg(j) = deg(i·j) in any group
    realizing this decomposition; the quotient of the free group on the
    support by exactly those relations is universal.  The grading is returned
    re-expressed over it.
    """

    if len(grading.degrees) != alg.dim:
        raise DimMismatch("grading does not fit the algebra")
    degrees = grading.degrees
    labels = [d for d, _ in grading.components()]
    witnesses = sorted(
        {
            (degrees[i], degrees[j], degrees[i] + degrees[j])
            for (i, j), terms in alg.products.items()
            if terms
        },
        key=lambda w: tuple(x.sort_key() for x in w),
    )
    group, images = _present_universal(labels, witnesses)
    return group, Grading(group, tuple(images[d] for d in degrees))
