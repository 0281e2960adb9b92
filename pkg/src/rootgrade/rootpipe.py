"""Torus-driven structure analysis for graded Lie algebras.

Given a Lie algebra with a grading whose universal group has free rank m ≥ 1,
this module extracts the canonical toral basis dual to the free generators,
decomposes the algebra into simultaneous weight spaces, equips the nonzero
weights with the exact rational geometry induced by the Killing form,
recognizes the (possibly nonreduced) root system, carves out the anchoring
semisimple subalgebra, checks the root-graded axioms, measures the isotypic
multiplicity spaces, reads off their torsion gradings, and finally recovers
the product on the coordinate algebra by transporting weight spaces along
root directions.  A split Cartan constructor (`split_cartan`) grows a torus
by repeated sl2-completion for the entries that are born without one.

Everything is exact: eigenvalue searches sweep small integers first and fall
back to the rational roots of the characteristic polynomial; nothing is ever
computed numerically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .abgroup import FgAbelianGroup, GroupElem
from .algcore import (
    StructAlgebra,
    center,
    centralizer,
    killing_form,
    multiply,
    restrict_to_subalgebra,
)
from .errors import (
    BookkeepingMismatch,
    DegenerateNeutralForm,
    DimMismatch,
    NoCompletion,
    NoProgress,
    NotARootSystem,
    RankTooSmall,
    SweepExhausted,
    WeightMismatch,
)
from .exactla import (
    Matrix,
    SVec,
    Subspace,
    invert,
    kernel,
    solve,
    svec_add,
    svec_scale,
    svec_sub_scaled,
)
from .grading import Grading, neutral_component, require_valid, universal_group_of
from .numfield import Scalar, from_rational, one as field_one, zero as field_zero

DEFAULT_SWEEP = 6

#: completeness accounting for every eigen-decomposition the pipeline runs
_EIGEN_STATS = {"calls": 0, "complete": 0}


def eigen_stats() -> dict[str, int]:
    """Counters of eigen-decomposition attempts and complete outcomes."""
    return dict(_EIGEN_STATS)


def reset_eigen_stats() -> None:
    _EIGEN_STATS["calls"] = 0
    _EIGEN_STATS["complete"] = 0


# -- small exact-rational linear algebra (decoupled from the scalar field) ---


def _frac_solve(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Optional[list[Fraction]]:
    """One solution of the rational system, or None when inconsistent."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n]:
            return None
    out = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        out[c] = aug[i][n]
    return out


def _int_rank(rows: Sequence[Sequence[int]]) -> int:
    work = [[Fraction(v) for v in r] for r in rows if any(r)]
    rank = 0
    cols = len(work[0]) if work else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = 1 / work[rank][c]
        work[rank] = [v * inv for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


def _char_poly(rows: list[list[Fraction]]) -> list[Fraction]:
    """Coefficients [a₀, …, aₙ] of det(xI − M) by the trace-recursion method."""
    n = len(rows)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # m ← M·m + c_{n-k+1}·I, then c_{n-k} = −tr(M·m)/k
        if k == 1:
            prod = [row[:] for row in rows]
        else:
            prod = [
                [
                    sum(rows[i][t] * m[t][j] for t in range(n) if rows[i][t])
                    for j in range(n)
                ]
                for i in range(n)
            ]
        c = -sum(prod[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        for i in range(n):
            prod[i][i] += c
        m = prod
    return coeffs


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """All rational roots of the polynomial with the given coefficients."""
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // _gcd(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        return []
    low = 0
    while ints[low] == 0:
        low += 1
    roots = [Fraction(0)] if low else []
    lead, const = ints[-1], ints[low]

    def divisors(v: int) -> list[int]:
        v = abs(v)
        out = []
        d = 1
        while d * d <= v:
            if v % d == 0:
                out.append(d)
                out.append(v // d)
            d += 1
        return sorted(set(out))

    for p in divisors(const):
        for q in divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                if sum(c * cand**i for i, c in enumerate(ints)) == 0:
                    roots.append(cand)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) or 1


# -- exact eigen decompositions ----------------------------------------------


def _identity(n: int, order: int) -> Matrix:
    e = field_one(order)
    return Matrix(n, n, [{i: e} for i in range(n)], order)


def _scalar_matrix(value: Fraction, n: int, order: int) -> Matrix:
    s = from_rational(order, value)
    return Matrix(n, n, [{i: s} for i in range(n)], order)


def _matrix_rational(m: Matrix) -> Optional[list[list[Fraction]]]:
    rows = []
    for i in range(m.rows):
        row = [Fraction(0)] * m.cols
        for j, v in m.data[i].items():
            if not v.is_rational():
                return None
            row[j] = v.as_rational()
        rows.append(row)
    return rows


def eigen_split(
    m: Matrix, *, sweep: int = DEFAULT_SWEEP, charpoly_limit: int = 48
) -> Optional[list[tuple[Fraction, Subspace]]]:
    """Rational eigen decomposition of a square matrix, or None if incomplete.

    Integer candidates in [−sweep, sweep] are tried first (ordered by absolute
    value so the typical small weights resolve early); if they do not exhaust
    the space and the matrix is rational of moderate size, the rational roots
    of the characteristic polynomial are used to finish.  A None return means
    the operator is not diagonalizable with rational eigenvalues — or the
    search space was too large — and callers must fail loudly.
    """
    n = m.rows
    _EIGEN_STATS["calls"] += 1
    if n == 0:
        _EIGEN_STATS["complete"] += 1
        return []
    found: list[tuple[Fraction, Subspace]] = []
    total = 0
    tried: set[Fraction] = set()
    candidates = sorted(range(-sweep, sweep + 1), key=lambda v: (abs(v), v))
    for c in candidates:
        val = Fraction(c)
        tried.add(val)
        ker = kernel(m - _scalar_matrix(val, n, m.order)) if c else kernel(m)
        if ker.dim:
            found.append((val, ker))
            total += ker.dim
            if total == n:
                _EIGEN_STATS["complete"] += 1
                return sorted(found, key=lambda p: p[0])
    if n <= charpoly_limit:
        rational = _matrix_rational(m)
        if rational is not None:
            for val in _rational_roots(_char_poly(rational)):
                if val in tried:
                    continue
                ker = kernel(m - _scalar_matrix(val, n, m.order))
                if ker.dim:
                    found.append((val, ker))
                    total += ker.dim
                    if total == n:
                        _EIGEN_STATS["complete"] += 1
                        return sorted(found, key=lambda p: p[0])
    return None


def _ad_restriction(alg: StructAlgebra, x: SVec, space: Subspace) -> Matrix:
    """Matrix of ad(x) on an invariant subspace, in the echelon basis."""
    d = len(space.basis)
    rows: list[SVec] = [{} for _ in range(d)]
    for c, b in enumerate(space.basis):
        img = multiply(alg, x, b)
        for r, v in enumerate(space.coords(img)):
            if v:
                rows[r][c] = v
    return Matrix(d, d, rows, alg.order)


def _operator_restriction(mat: Matrix, space: Subspace) -> Matrix:
    """Matrix of a linear operator on an invariant subspace."""
    d = len(space.basis)
    rows: list[SVec] = [{} for _ in range(d)]
    for c, b in enumerate(space.basis):
        img = mat.apply(b)
        for r, v in enumerate(space.coords(img)):
            if v:
                rows[r][c] = v
    return Matrix(d, d, rows, space.order)


# -- reports and data carriers -------------------------------------------------


@dataclass(frozen=True)
class NeutralToralReport:
    """Outcome of the torality test on the neutral component."""

    neutral_dim: int
    abelian: bool
    noncommuting_pairs: tuple[tuple[int, int], ...]
    diagonalizable: bool
    failed_elements: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.abelian and self.diagonalizable


@dataclass(frozen=True)
class FreeRankReport:
    """dim of the neutral component against the universal group's free rank."""

    neutral_dim: int
    free_rank: int

    @property
    def ok(self) -> bool:
        return self.neutral_dim == self.free_rank


@dataclass(frozen=True)
class WeightDatum:
    """One simultaneous eigenvalue tuple of the toral basis with its space."""

    weight: tuple[int, ...]
    space: Subspace


@dataclass(frozen=True)
class RootDatum:
    """Weight decomposition with its Killing geometry and classification.

    `weights` covers the zero weight too; `roots` are the nonzero ones, and
    `gram`, `cartan_integers` and `coroot_elements` are aligned with their
    order.  The classification fields stay None until
    `classify_root_system` fills them.
    """

    weights: tuple[WeightDatum, ...]
    toral_basis: tuple[SVec, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    coroot_elements: tuple[SVec, ...]
    cartan_integers: Optional[tuple[tuple[int, ...], ...]] = None
    simple_roots: Optional[tuple[tuple[int, ...], ...]] = None
    type_label: Optional[str] = None
    irreducible: Optional[bool] = None

    @property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(w.weight for w in self.weights if any(w.weight))

    @property
    def rank(self) -> int:
        return _int_rank([list(r) for r in self.roots]) if self.roots else 0

    def space_of(self, weight: Sequence[int]) -> Optional[Subspace]:
        w = tuple(weight)
        for datum in self.weights:
            if datum.weight == w:
                return datum.space
        return None


@dataclass(frozen=True)
class GradingSubalgebra:
    """The subalgebra spanned by the components over the simple-root lattice."""

    indices: tuple[int, ...]
    space: Subspace
    algebra: StructAlgebra
    simple_roots: tuple[tuple[int, ...], ...]
    chosen_preimages: tuple[GroupElem, ...]
    group: FgAbelianGroup
    center_trivial: bool
    killing_nondegenerate: bool

    @property
    def ok(self) -> bool:
        return self.center_trivial and self.killing_nondegenerate

    def preimage(self, weight: Sequence[int]) -> Optional[GroupElem]:
        """The degree over the chosen simple-root preimages realizing a weight."""
        cols = [list(g.free) for g in self.chosen_preimages]
        m = len(cols[0]) if cols else 0
        rows = [[Fraction(cols[j][i]) for j in range(len(cols))] for i in range(m)]
        sol = _frac_solve(rows, [Fraction(v) for v in weight])
        if sol is None or any(c.denominator != 1 for c in sol):
            return None
        out = self.group.zero()
        for c, g in zip(sol, self.chosen_preimages):
            out = out + _scale_elem(g, int(c))
        return out


@dataclass(frozen=True)
class RootGradedReport:
    """The three axioms of a root-graded algebra, checked exactly."""

    subalgebra_type: str
    subalgebra_roots_match: bool
    weights_inside_system: bool
    zero_space_saturated: bool

    @property
    def ok(self) -> bool:
        return (
            self.subalgebra_roots_match
            and self.weights_inside_system
            and self.zero_space_saturated
        )


@dataclass(frozen=True)
class IsotypicReport:
    """Multiplicity-space dimensions and, once filled, their torsion data.

    `dims` is (dimA, dimB, dimC, dimD): the multiplicity of the adjoint
    module, of the small module (short-root / symmetric-square), of the
    natural module (doubled-rank nonreduced case only), and the centralizer
    dimension.  B and C are None where the decomposition has no such summand.
    """

    dims: tuple[int, Optional[int], Optional[int], int]
    highest_root: tuple[int, ...]
    highest_short: Optional[tuple[int, ...]]
    torsion_gradings: Optional[dict[str, dict[str, int]]] = None
    flags: Optional[dict[str, bool]] = None


# -- the canonical toral basis -------------------------------------------------


def _dual_toral_basis(
    alg: StructAlgebra, grading: Grading, neutral: Subspace
) -> Optional[list[SVec]]:
    """Solve for H₁…H_m in the neutral component with [Hᵢ, x] = nᵢ(x)·x.

    nᵢ(x) is the i-th free coordinate of the degree of the basis vector x.
    Returns None when the system is inconsistent (the grading is then not a
    weight decomposition over its own free part) — callers decide whether
    that is an error or merely a failed report line.
    """
    group = grading.group
    m = group.free_rank
    if m == 0:
        return []
    k = len(neutral.basis)
    if k == 0:
        return None
    order = alg.order
    ad_mats = [alg.ad(b) for b in neutral.basis]
    n = alg.dim
    row_keys: dict[tuple[int, int], int] = {}
    row_entries: list[SVec] = []

    def row_for(j: int, r: int) -> SVec:
        key = (j, r)
        if key not in row_keys:
            row_keys[key] = len(row_entries)
            row_entries.append({})
        return row_entries[row_keys[key]]

    for c, mat in enumerate(ad_mats):
        for r in range(n):
            for j, v in mat.data[r].items():
                row_for(j, r)[c] = v
    for j in range(n):
        row_for(j, j)
    duals: list[SVec] = []
    for i in range(m):
        rhs: SVec = {}
        for j in range(n):
            coeff = grading.degrees[j].free[i]
            if coeff:
                rhs[row_keys[(j, j)]] = from_rational(order, coeff)
        a = Matrix(len(row_entries), k, [dict(r) for r in row_entries], order)
        sol = solve(a, rhs)
        if sol is None:
            return None
        duals.append(neutral.from_coords(sol))
    if len(Subspace.from_vectors(duals, n, order).basis) != m:
        return None
    return duals


def check_neutral_toral(
    alg: StructAlgebra, grading: Grading, *, sweep: int = DEFAULT_SWEEP
) -> NeutralToralReport:
    """Is the neutral component an abelian algebra of diagonalizable adjoints?

    The fast path solves for the dual toral basis: when it exists and spans
    the neutral component, every neutral element acts diagonally on the
    homogeneous basis and no eigenvalue search is needed.  Otherwise each
    neutral basis element is decomposed component by component.
    """
    neutral = neutral_component(alg, grading)
    k = len(neutral.basis)
    bad_pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            if multiply(alg, neutral.basis[i], neutral.basis[j]):
                bad_pairs.append((i, j))
    abelian = not bad_pairs

    failed: list[int] = []
    duals = _dual_toral_basis(alg, grading, neutral) if abelian else None
    if duals is not None and len(duals) == k:
        diagonalizable = True
    else:
        comps = [
            Subspace.from_vectors(
                [{i: field_one(alg.order)} for i in idx], alg.dim, alg.order
            )
            for _, idx in grading.components()
        ]
        for b_idx in range(k):
            complete = True
            for comp in comps:
                if eigen_split(
                    _ad_restriction(alg, neutral.basis[b_idx], comp), sweep=sweep
                ) is None:
                    complete = False
                    break
            if not complete:
                failed.append(b_idx)
        diagonalizable = not failed
    return NeutralToralReport(k, abelian, tuple(bad_pairs), diagonalizable, tuple(failed))


def check_free_rank(alg: StructAlgebra, grading: Grading) -> FreeRankReport:
    """Compare dim of the neutral component with the universal free rank."""
    group, _ = universal_group_of(alg, grading)
    return FreeRankReport(len(neutral_component(alg, grading).basis), group.free_rank)


def weight_decomposition(
    alg: StructAlgebra, grading: Grading
) -> tuple[list[SVec], list[WeightDatum]]:
    """The toral basis dual to the free generators and its weight spaces.

    Solvability of the dual system is itself the verification: when every
    homogeneous basis vector is a simultaneous eigenvector with eigenvalue
    tuple equal to the free part of its degree, the simultaneous eigenspaces
    are exactly the components of the torsion-free coarsening.
    """
    group = grading.group
    if group.free_rank == 0:
        raise RankTooSmall("weight decomposition needs a free part in the grading group")
    neutral = neutral_component(alg, grading)
    duals = _dual_toral_basis(alg, grading, neutral)
    if duals is None:
        raise WeightMismatch(
            "no toral basis acts with the grading's free coordinates as eigenvalues"
        )
    one = field_one(alg.order)
    buckets: dict[tuple[int, ...], list[int]] = {}
    for j, d in enumerate(grading.degrees):
        buckets.setdefault(d.free, []).append(j)
    data = [
        WeightDatum(w, Subspace.from_vectors([{j: one} for j in idx], alg.dim, alg.order))
        for w, idx in sorted(buckets.items())
    ]
    return duals, data


# -- Killing geometry of the weights -------------------------------------------


def killing_weight_geometry(
    alg: StructAlgebra, toral: Sequence[SVec], data: Sequence[WeightDatum]
) -> RootDatum:
    """Equip the nonzero weights with the exact form (α|β) = κ(T_α, T_β).

    The toral basis acts diagonally on the homogeneous basis, so the Gram
    matrix of the Killing form on it is the integer sum Σ dim ℒ(w)·wᵢwⱼ; the
    representative T_α of a weight α solves G·c = α, and the coroot is
    H_α = (2/(α|α))·T_α.  Verified here: (α|α) ∈ ℚ_{>0} for all α and the
    trace identity (γ|γ) = Σ_w dim ℒ(w)·(w|γ)² for every root γ.
    """
    m = len(toral)
    gram_int = [
        [
            sum(len(d.space.basis) * d.weight[i] * d.weight[j] for d in data)
            for j in range(m)
        ]
        for i in range(m)
    ]
    if _int_rank(gram_int) != m:
        raise DegenerateNeutralForm("Killing form is singular on the toral subalgebra")
    rows = [[Fraction(v) for v in row] for row in gram_int]
    roots = [d.weight for d in data if any(d.weight)]
    reps: list[list[Fraction]] = []
    for alpha in roots:
        sol = _frac_solve(rows, [Fraction(v) for v in alpha])
        assert sol is not None
        reps.append(sol)
    pair = [
        [sum(Fraction(a) * c for a, c in zip(alpha, reps[jj])) for jj in range(len(roots))]
        for alpha in roots
    ]
    for i, alpha in enumerate(roots):
        if pair[i][i] <= 0:
            raise NotARootSystem(f"weight {alpha} has nonpositive square {pair[i][i]}")
    weight_list = [(d.weight, len(d.space.basis)) for d in data]
    for j, gamma in enumerate(roots):
        total = Fraction(0)
        for w, dim in weight_list:
            val = sum(Fraction(v) * c for v, c in zip(w, reps[j]))
            total += dim * val * val
        if total != pair[j][j]:
            raise BookkeepingMismatch(
                f"trace identity fails at {gamma}: {total} != {pair[j][j]}"
            )
    order = alg.order
    coroots: list[SVec] = []
    for j in range(len(roots)):
        scale = 2 / pair[j][j]
        h: SVec = {}
        for c, t in zip(reps[j], toral):
            if c:
                h = svec_add(h, svec_scale(t, from_rational(order, c * scale)))
        coroots.append(h)
    return RootDatum(
        weights=tuple(data),
        toral_basis=tuple(toral),
        gram=tuple(tuple(row) for row in pair),
        coroot_elements=tuple(coroots),
    )


# -- root-system recognition ---------------------------------------------------


def _component_label(
    roots: list[tuple[int, ...]],
    idx: list[int],
    gram: Sequence[Sequence[Fraction]],
) -> str:
    """Recognition of one irreducible piece by rank, count and length data."""
    members = [roots[i] for i in idx]
    member_set = set(members)
    count = len(members)
    rank = _int_rank([list(r) for r in members])
    doubled = any(tuple(2 * v for v in r) in member_set for r in members)
    if doubled:
        reduced = [
            r
            for r in members
            if not (
                all(v % 2 == 0 for v in r)
                and tuple(v // 2 for v in r) in member_set
            )
        ]
        if count == 2 * rank * rank + 2 * rank and len(reduced) == 2 * rank * rank:
            return f"BC{rank}"
        raise NotARootSystem(
            f"nonreduced component with rank {rank} and {count} roots is unrecognized"
        )
    lengths = sorted({gram[i][i] for i in idx})
    ratio = lengths[-1] / lengths[0]
    if ratio == 1:
        table = {
            (1, 2): "A1",
            (2, 6): "A2",
            (3, 12): "A3",
            (4, 20): "A4",
            (5, 30): "A5",
            (6, 42): "A6",
            (7, 56): "A7",
            (8, 72): "A8",
            (4, 24): "D4",
            (5, 40): "D5",
            (6, 60): "D6",
            (7, 84): "D7",
            (8, 112): "D8",
            (6, 72): "E6",
            (7, 126): "E7",
            (8, 240): "E8",
        }
        label = table.get((rank, count))
        if label:
            return label
    elif ratio == 2:
        if (rank, count) == (4, 48):
            return "F4"
        if count == 2 * rank * rank:
            if rank == 2:
                return "B2"
            shorts = sum(1 for i in idx if gram[i][i] == lengths[0])
            if shorts == 2 * rank:
                return f"B{rank}"
            if shorts == 2 * rank * (rank - 1):
                return f"C{rank}"
    elif ratio == 3 and (rank, count) == (2, 12):
        return "G2"
    raise NotARootSystem(
        f"component with rank {rank}, {count} roots, ratio {ratio} is unrecognized"
    )


def classify_root_system(datum: RootDatum) -> RootDatum:
    """Verify the root-system axioms and complete the classification fields.

    Checks every Cartan integer 2(β|α)/(α|α) for integrality and every
    reflection β − ⟨β|α⟩α for membership, detects a nonreduced system via
    doubled roots, selects the simple roots as the lexicographically positive
    roots that are not sums of two positive roots, and recognizes the type
    from rank, root count and length ratios (hard-coded through rank 8).
    """
    roots = list(datum.roots)
    if not roots:
        raise NotARootSystem("empty weight set has no root system")
    gram = datum.gram
    index = {r: i for i, r in enumerate(roots)}
    n = len(roots)
    cartan = [[0] * n for _ in range(n)]
    for i, alpha in enumerate(roots):
        for j, beta in enumerate(roots):
            val = 2 * gram[j][i] / gram[i][i]
            if val.denominator != 1:
                raise NotARootSystem(
                    f"Cartan number of {beta} against {alpha} is {val}, not an integer"
                )
            cartan[j][i] = int(val)
            reflected = tuple(b - int(val) * a for a, b in zip(alpha, beta))
            if reflected not in index:
                raise NotARootSystem(
                    f"reflection of {beta} along {alpha} gives {reflected}, not a root"
                )

    positive = [r for r in roots if next(v for v in r if v) > 0]
    pos_set = set(positive)
    simple = []
    for r in positive:
        if not any(
            tuple(a - b for a, b in zip(r, s)) in pos_set for s in positive if s != r
        ):
            simple.append(r)
    simple.sort()

    # connectivity of the non-orthogonality graph
    seen: dict[int, int] = {}
    comp_count = 0
    for start in range(n):
        if start in seen:
            continue
        stack = [start]
        seen[start] = comp_count
        while stack:
            i = stack.pop()
            for j in range(n):
                if j not in seen and gram[i][j] != 0:
                    seen[j] = comp_count
                    stack.append(j)
        comp_count += 1
    groups: dict[int, list[int]] = {}
    for i, c in seen.items():
        groups.setdefault(c, []).append(i)
    labels = sorted(
        _component_label(roots, idx, gram) for idx in groups.values()
    )
    return replace(
        datum,
        cartan_integers=tuple(tuple(row) for row in cartan),
        simple_roots=tuple(simple),
        type_label="+".join(labels),
        irreducible=comp_count == 1,
    )


# -- sl2 completion and Cartan construction ------------------------------------


def sl2_completion(
    alg: StructAlgebra,
    e: SVec,
    space: Optional[Subspace] = None,
    *,
    sweep: int = DEFAULT_SWEEP,
    verify_on: Optional[Sequence[Subspace]] = None,
) -> tuple[SVec, SVec, SVec]:
    """Complete a candidate nilpotent to a standard (e, h, f) triple.

    Solves the affine system [[e, f], e] = 2e for f in the given subspace
    (the whole algebra when omitted), sets h = [e, f] and verifies
    [h, f] = −2f, then checks that ad h decomposes each verification space
    (the whole algebra when omitted) with integer eigenvalues.
    """
    if not e:
        raise DimMismatch("cannot complete the zero element")
    order = alg.order
    if space is None:
        space = Subspace.full(alg.dim, alg.order)
    cols = space.basis
    rows: list[SVec] = [{} for _ in range(alg.dim)]
    for c, b in enumerate(cols):
        img = multiply(alg, multiply(alg, e, b), e)
        for r, v in img.items():
            rows[r][c] = v
    rhs = svec_scale(e, from_rational(order, 2))
    sol = solve(Matrix(alg.dim, len(cols), rows, order), rhs)
    if sol is None:
        raise NoCompletion("no partner solves [[e, f], e] = 2e in the given space")
    f: SVec = {}
    for c, b in zip(sol, cols):
        if c:
            f = svec_add(f, svec_scale(b, c))
    h = multiply(alg, e, f)
    two = from_rational(order, 2)
    if svec_add(multiply(alg, h, f), svec_scale(f, two)):
        raise NoCompletion("the solved partner fails [h, f] = −2f")
    targets = list(verify_on) if verify_on is not None else [Subspace.full(alg.dim, order)]
    for target in targets:
        split = eigen_split(_ad_restriction(alg, h, target), sweep=sweep)
        if split is None:
            raise SweepExhausted(
                f"ad h did not decompose a dim-{len(target.basis)} space within ±{sweep}"
            )
        if any(val.denominator != 1 for val, _ in split):
            raise NoCompletion("ad h has a non-integer eigenvalue")
    return e, h, f


@dataclass
class _TorusState:
    weights: tuple[Fraction, ...]
    space: Subspace
    free_part: Optional[tuple[int, ...]]


def _dense_coords(row: SVec, n: int, order: int) -> list[Scalar]:
    z = field_zero(order)
    return [row.get(i, z) for i in range(n)]


def _split_state(
    alg: StructAlgebra,
    parts: list[_TorusState],
    z: SVec,
    *,
    sweep: int,
) -> list[_TorusState]:
    out: list[_TorusState] = []
    for part in parts:
        d = len(part.space.basis)
        split = eigen_split(_ad_restriction(alg, z, part.space), sweep=sweep)
        if split is None:
            raise SweepExhausted(
                f"adjoined toral element did not decompose a dim-{d} space"
            )
        for val, small in split:
            vectors = [
                part.space.from_coords(_dense_coords(row, d, alg.order))
                for row in small.basis
            ]
            out.append(
                _TorusState(
                    part.weights + (val,),
                    Subspace.from_vectors(vectors, alg.dim, alg.order),
                    part.free_part,
                )
            )
    return out


def _normalize_spectrum(alg: StructAlgebra, z: SVec, parts: list[_TorusState], sweep: int):
    """Scale a diagonalizable element so its eigenvalues become integers."""
    splits = []
    values: list[Fraction] = []
    for part in parts:
        split = eigen_split(_ad_restriction(alg, z, part.space), sweep=sweep)
        if split is None:
            return None
        splits.append(split)
        values.extend(v for v, _ in split)
    if all(v == 0 for v in values):
        return z
    denom = 1
    for v in values:
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    numer = 0
    for v in values:
        numer = _gcd(numer, int(v * denom))
    return svec_scale(z, from_rational(alg.order, Fraction(denom, numer)))


def split_cartan(
    alg: StructAlgebra,
    seed: Optional[Subspace] = None,
    *,
    grading: Optional[Grading] = None,
    sweep: int = DEFAULT_SWEEP,
    max_rounds: int = 64,
) -> Subspace:
    """Grow a seed torus to a split Cartan subalgebra.

    Repeatedly decomposes the algebra under the current torus, looks for an
    sl2 triple headed by a vector of the torus' centralizer (vectors from
    weight spaces of nonzero free degree first, when a grading supplies
    them) and adjoins the semisimple member h.  When no triple completes —
    every candidate is already semisimple — a diagonalizable candidate is
    adjoined directly after rescaling its spectrum to integers.  Terminates
    when the centralizer coincides with the torus.

    The initial splitting uses the free-part coarsening of the grading, not
    its components: adjoined elements mix torsion degrees, so only the
    free-weight spaces stay invariant.  Seed elements must preserve those
    spaces as well (the dual toral basis of the grading always does).
    """
    order = alg.order
    one = field_one(order)
    if grading is not None:
        buckets: dict[tuple[int, ...], list[int]] = {}
        for j, d in enumerate(grading.degrees):
            buckets.setdefault(d.free, []).append(j)
        parts = [
            _TorusState(
                (),
                Subspace.from_vectors([{i: one} for i in idx], alg.dim, order),
                free,
            )
            for free, idx in sorted(buckets.items())
        ]
    else:
        parts = [_TorusState((), Subspace.full(alg.dim, order), None)]
    torus: list[SVec] = []

    def adjoin(z: SVec) -> None:
        nonlocal parts
        parts = _split_state(alg, parts, z, sweep=sweep)
        torus.append(z)

    if seed is not None:
        for s in seed.basis:
            adjoin(dict(s))

    for _ in range(max_rounds):
        zero_parts = [p for p in parts if all(w == 0 for w in p.weights)]
        cdim = sum(len(p.space.basis) for p in zero_parts)
        if cdim == len(torus):
            return Subspace.from_vectors(torus, alg.dim, order)
        torus_span = Subspace.from_vectors(torus, alg.dim, order)
        centre = Subspace.zero(alg.dim, order)
        for p in zero_parts:
            centre = centre.sum(p.space)
        # standard basis vectors inside the centralizer come first: they are
        # homogeneous, and the ones of nonzero degree are the natural heads
        # of sl2 triples; echelon vectors of the remaining parts come last
        candidates: list[tuple[int, SVec]] = []
        for i in range(alg.dim):
            v: SVec = {i: one}
            if not centre.contains_vector(v) or torus_span.contains_vector(v):
                continue
            prio = 1
            if grading is not None:
                d = grading.degrees[i]
                prio = 0 if (any(d.free) or any(d.tor)) else 1
            candidates.append((prio, v))
        for p in zero_parts:
            for b in p.space.basis:
                if torus_span.contains_vector(b):
                    continue
                candidates.append((2, dict(b)))
        candidates.sort(key=lambda t: t[0])
        progressed = False
        for _, e in candidates:
            try:
                _, h, _ = sl2_completion(
                    alg, e, centre, sweep=sweep, verify_on=[p.space for p in parts]
                )
            except (NoCompletion, SweepExhausted):
                continue
            if torus_span.contains_vector(h):
                continue
            adjoin(h)
            progressed = True
            break
        if progressed:
            continue
        for _, z in candidates:
            scaled = _normalize_spectrum(alg, z, parts, sweep)
            if scaled is None:
                continue
            adjoin(scaled)
            progressed = True
            break
        if not progressed:
            raise NoProgress(
                f"no candidate enlarges the torus (size {len(torus)}, centralizer {cdim})"
            )
    raise NoProgress(f"torus construction did not terminate in {max_rounds} rounds")


def regrade_by_cartan(
    alg: StructAlgebra,
    cartan: Subspace,
    *,
    grading: Optional[Grading] = None,
    sweep: int = DEFAULT_SWEEP,
) -> tuple[StructAlgebra, Grading, tuple[SVec, ...]]:
    """Rebase an algebra to a weight basis of a split Cartan subalgebra.

    Adjoint-action version of `regrade_by_operators`; the result is the
    canonical Cartan grading when the subspace is a split Cartan.
    """
    return regrade_by_operators(
        alg, [alg.ad(h) for h in cartan.basis], grading=grading, sweep=sweep
    )


def regrade_by_operators(
    alg: StructAlgebra,
    operators: Sequence[Matrix],
    *,
    grading: Optional[Grading] = None,
    sweep: int = DEFAULT_SWEEP,
) -> tuple[StructAlgebra, Grading, tuple[SVec, ...]]:
    """Rebase an algebra to a weight basis of commuting diagonalizable derivations.

    Decomposes the algebra under each operator in turn (seeding the split
    with the free-part weight spaces of a known grading, which the operators
    must preserve), rewrites the structure constants over the concatenated
    weight bases, and returns the canonical grading over the universal group
    of the integerized weights together with the new basis expressed in the
    old coordinates.
    """
    order = alg.order
    parts: list[tuple[tuple[Fraction, ...], Subspace]]
    if grading is not None:
        one = field_one(order)
        buckets: dict[tuple[int, ...], list[int]] = {}
        for j, d in enumerate(grading.degrees):
            buckets.setdefault(d.free, []).append(j)
        parts = [
            ((), Subspace.from_vectors([{j: one} for j in idx], alg.dim, order))
            for _, idx in sorted(buckets.items())
        ]
    else:
        parts = [((), Subspace.full(alg.dim, order))]
    for mat in operators:
        new_parts = []
        for weights, space in parts:
            split = eigen_split(_operator_restriction(mat, space), sweep=sweep)
            if split is None:
                raise SweepExhausted(
                    f"an operator did not decompose a dim-{len(space.basis)} space"
                )
            for val, small in split:
                vectors = [
                    space.from_coords(_dense_coords(row, len(space.basis), order))
                    for row in small.basis
                ]
                new_parts.append(
                    (weights + (val,), Subspace.from_vectors(vectors, alg.dim, order))
                )
        parts = new_parts
    merged: dict[tuple[Fraction, ...], Subspace] = {}
    for weights, space in parts:
        merged[weights] = merged.get(weights, Subspace.zero(alg.dim, order)).sum(space)
    r = len(operators)
    scale = [1] * r
    for weights in merged:
        for i, v in enumerate(weights):
            scale[i] = scale[i] * v.denominator // _gcd(scale[i], v.denominator)
    group = FgAbelianGroup(r, ())
    ordered = sorted(merged.items())
    basis_vectors: list[SVec] = []
    degrees: list[GroupElem] = []
    spans: list[tuple[tuple[Fraction, ...], Subspace]] = []
    for weights, space in ordered:
        deg = group.element(free=tuple(int(v * s) for v, s in zip(weights, scale)))
        spans.append((weights, space))
        for b in space.basis:
            basis_vectors.append(dict(b))
            degrees.append(deg)
    lookup = {w: s for w, s in spans}
    offsets: dict[tuple[Fraction, ...], int] = {}
    pos = 0
    for weights, space in ordered:
        offsets[weights] = pos
        pos += len(space.basis)
    table: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for a in range(len(basis_vectors)):
        wa = ordered[_span_index(ordered, a, offsets)][0]
        for b in range(len(basis_vectors)):
            prod = multiply(alg, basis_vectors[a], basis_vectors[b])
            if not prod:
                continue
            wb = ordered[_span_index(ordered, b, offsets)][0]
            target = tuple(x + y for x, y in zip(wa, wb))
            space = lookup.get(target)
            if space is None:
                raise BookkeepingMismatch(
                    "a product left the weight decomposition entirely"
                )
            coords = space.coords(prod)
            terms = [
                (offsets[target] + c, v) for c, v in enumerate(coords) if v
            ]
            if terms:
                table[(a, b)] = terms
    rebased = StructAlgebra(
        len(basis_vectors),
        table,
        labels=[f"w{i}" for i in range(len(basis_vectors))],
        flags=alg.flags,
        order=order,
    )
    raw = require_valid(rebased, Grading(group, tuple(degrees)))
    _, canonical = universal_group_of(rebased, raw)
    return rebased, canonical, tuple(basis_vectors)


def _span_index(
    ordered: list[tuple[tuple[Fraction, ...], Subspace]],
    basis_pos: int,
    offsets: dict[tuple[Fraction, ...], int],
) -> int:
    for i, (weights, space) in enumerate(ordered):
        off = offsets[weights]
        if off <= basis_pos < off + len(space.basis):
            return i
    raise IndexError(basis_pos)


# -- the grading subalgebra and the root-graded axioms --------------------------


def _scale_elem(g: GroupElem, n: int) -> GroupElem:
    return GroupElem(g.group, tuple(n * v for v in g.free), tuple(n * v for v in g.tor))


def grading_subalgebra(
    alg: StructAlgebra,
    grading: Grading,
    datum: RootDatum,
    *,
    indices: Optional[Sequence[int]] = None,
) -> GradingSubalgebra:
    """The subalgebra over the lattice of chosen simple-root preimages.

    For each simple root the preimage in the grading group is the support
    element with that free part whose torsion coordinates are
    lexicographically smallest; a degree belongs to the span when its free
    part decomposes integrally over the simple roots and its torsion part
    agrees with the matching combination of preimages.

    When the grading group cannot separate the subalgebra (no torsion
    distinguishes it from same-weight coordinate spaces), pass its basis
    indices explicitly; the preimage bookkeeping is still derived from the
    grading.
    """
    if datum.simple_roots is None:
        raise DimMismatch("classify the root datum before carving the subalgebra")
    support = [d for d, _ in grading.components()]
    chosen: list[GroupElem] = []
    for alpha in datum.simple_roots:
        matching = sorted((d.tor, d) for d in support if d.free == alpha)
        if not matching:
            raise BookkeepingMismatch(f"no support element realizes the root {alpha}")
        chosen.append(matching[0][1])
    if indices is not None:
        member_indices = sorted(indices)
    else:
        cols = [list(g.free) for g in chosen]
        m = len(cols[0])
        rows = [[Fraction(cols[j][i]) for j in range(len(cols))] for i in range(m)]
        member_indices = []
        for j, d in enumerate(grading.degrees):
            sol = _frac_solve(rows, [Fraction(v) for v in d.free])
            if sol is None or any(c.denominator != 1 for c in sol):
                continue
            target = grading.group.zero()
            for c, g in zip(sol, chosen):
                target = target + _scale_elem(g, int(c))
            if target == d:
                member_indices.append(j)
    one = field_one(alg.order)
    space = Subspace.from_vectors(
        [{j: one} for j in member_indices], alg.dim, alg.order
    )
    sub = restrict_to_subalgebra(
        alg,
        space,
        labels=[f"g{j}" for j in member_indices],
        flags=alg.flags,
    )
    centre_ok = len(center(sub).basis) == 0
    killing_ok = invert(killing_form(sub)) is not None
    return GradingSubalgebra(
        indices=tuple(member_indices),
        space=space,
        algebra=sub,
        simple_roots=tuple(datum.simple_roots),
        chosen_preimages=tuple(chosen),
        group=grading.group,
        center_trivial=centre_ok,
        killing_nondegenerate=killing_ok,
    )


def _reduced_part(roots: Sequence[tuple[int, ...]]) -> set[tuple[int, ...]]:
    root_set = set(roots)
    out = set()
    for r in root_set:
        if all(v % 2 == 0 for v in r) and tuple(v // 2 for v in r) in root_set:
            continue
        out.add(r)
    return out


def check_root_graded(
    alg: StructAlgebra,
    grading: Grading,
    sub: GradingSubalgebra,
    datum: RootDatum,
) -> RootGradedReport:
    """The three axioms: subalgebra roots, ambient weights, zero saturation.

    (i) the subalgebra's own root system (under its induced grading) equals
    the reduced part of the ambient weight system — and is of the doubled-rank
    orthogonal type when the ambient system is nonreduced; (ii) every ambient
    weight lies in the system or is zero; (iii) the zero space is exactly the
    span of the brackets of opposite weight spaces.
    """
    free_group = FgAbelianGroup(grading.group.free_rank, ())
    sub_degrees = tuple(
        free_group.element(free=grading.degrees[j].free) for j in sub.indices
    )
    sub_grading = require_valid(sub.algebra, Grading(free_group, sub_degrees))
    toral, data = weight_decomposition(sub.algebra, sub_grading)
    sub_datum = classify_root_system(
        killing_weight_geometry(sub.algebra, toral, data)
    )
    ambient_roots = set(datum.roots)
    reduced = _reduced_part(datum.roots)
    roots_match = set(sub_datum.roots) == reduced
    if ambient_roots != reduced:
        rank = sub_datum.rank
        expected = {f"B{rank}"} | ({"A1", "B1"} if rank == 1 else set())
        roots_match = roots_match and sub_datum.type_label in expected

    inside = all(
        (not any(d.weight)) or d.weight in ambient_roots for d in datum.weights
    )

    zero_space = datum.space_of(tuple([0] * grading.group.free_rank))
    spanned = Subspace.zero(alg.dim, alg.order)
    for alpha in datum.roots:
        neg = tuple(-v for v in alpha)
        plus = datum.space_of(alpha)
        minus = datum.space_of(neg)
        if plus is None or minus is None:
            continue
        brackets = [
            multiply(alg, x, y) for x in plus.basis for y in minus.basis
        ]
        brackets = [b for b in brackets if b]
        if brackets:
            spanned = spanned.sum(
                Subspace.from_vectors(brackets, alg.dim, alg.order)
            )
    saturated = (
        zero_space is not None
        and len(spanned.basis) == len(zero_space.basis)
        and zero_space.contains(spanned)
    )
    return RootGradedReport(
        subalgebra_type=sub_datum.type_label or "?",
        subalgebra_roots_match=roots_match,
        weights_inside_system=inside,
        zero_space_saturated=saturated,
    )


# -- isotypic dimensions and coordinate gradings --------------------------------


def _length_classes(
    datum: RootDatum,
) -> list[tuple[Fraction, list[tuple[int, ...]]]]:
    roots = datum.roots
    by_len: dict[Fraction, list[tuple[int, ...]]] = {}
    for i, r in enumerate(roots):
        by_len.setdefault(datum.gram[i][i], []).append(r)
    return sorted(by_len.items())


def _class_dim(datum: RootDatum, members: list[tuple[int, ...]]) -> tuple[int, tuple[int, ...]]:
    """Common weight-space dimension over a length class, and its top root."""
    dims = {len(datum.space_of(r).basis) for r in members}
    if len(dims) != 1:
        raise BookkeepingMismatch(
            "weight spaces are not equidimensional over a length class"
        )
    return dims.pop(), max(members)


def isotypic_dims(
    alg: StructAlgebra, sub: GradingSubalgebra, datum: RootDatum
) -> IsotypicReport:
    """Multiplicity-space dimensions of the decomposition over the subalgebra.

    Weight spaces over one length class share their dimension (checked); the
    multiplicities fall out of the small linear relations between those class
    dimensions, and the centralizer of the subalgebra accounts for the rest.
    The exact total-dimension identity is verified before returning.
    """
    if datum.type_label is None:
        raise DimMismatch("classify the root datum before measuring multiplicities")
    d_dim = len(centralizer(alg, sub.space).basis)
    classes = _length_classes(datum)
    label = datum.type_label
    nonreduced = label.startswith("BC")
    rank = datum.rank
    dims: tuple[int, Optional[int], Optional[int], int]
    if nonreduced:
        if rank == 1:
            short_dim, short_top = _class_dim(datum, classes[0][1])
            double_dim, _ = _class_dim(datum, classes[1][1])
            dim_b = double_dim
            dim_a = short_dim - dim_b
            dims = (dim_a, dim_b, None, d_dim)
            expected = 3 * dim_a + 5 * dim_b + d_dim
            highest, short = short_top, short_top
        else:
            short_dim, short_top = _class_dim(datum, classes[0][1])
            medium_dim, medium_top = _class_dim(datum, classes[1][1])
            double_dim, _ = _class_dim(datum, classes[2][1])
            dim_b = double_dim
            dim_a = medium_dim - dim_b
            dim_c = short_dim - dim_a - dim_b
            dims = (dim_a, dim_b, dim_c, d_dim)
            expected = (
                rank * (2 * rank + 1) * dim_a
                + rank * (2 * rank + 3) * dim_b
                + (2 * rank + 1) * dim_c
                + d_dim
            )
            highest, short = medium_top, short_top
    else:
        long_dim, long_top = _class_dim(datum, classes[-1][1])
        dim_a = long_dim
        g_dim = sub.algebra.dim
        if len(classes) == 1:
            dims = (dim_a, None, None, d_dim)
            expected = g_dim * dim_a + d_dim
            highest, short = long_top, None
        else:
            short_dim, short_top = _class_dim(datum, classes[0][1])
            dim_b = short_dim - dim_a
            dims = (dim_a, dim_b, None, d_dim)
            small_module = {
                "G2": 7,
                "F4": 26,
            }.get(label)
            if small_module is None and label.startswith("B"):
                small_module = 2 * rank + 1
            if small_module is None and label.startswith("C"):
                small_module = 2 * rank * rank - rank - 1
            if small_module is None:
                raise BookkeepingMismatch(
                    f"no small-module dimension known for type {label}"
                )
            expected = g_dim * dim_a + small_module * dim_b + d_dim
            highest, short = long_top, short_top
    if expected != alg.dim:
        raise BookkeepingMismatch(
            f"dimension identity fails: expected {expected}, algebra has {alg.dim}"
        )
    return IsotypicReport(
        dims=dims, highest_root=highest, highest_short=short
    )


def _torsion_elements(group: FgAbelianGroup) -> list[GroupElem]:
    tor_group = FgAbelianGroup(0, group.torsion)
    return [
        group.element(free=(0,) * group.free_rank, tor=t.tor)
        for t in tor_group.elements()
    ]


def coordinate_torsion_grading(
    alg: StructAlgebra,
    grading: Grading,
    sub: GradingSubalgebra,
    datum: RootDatum,
    report: IsotypicReport,
) -> IsotypicReport:
    """Read the torsion gradings of the multiplicity spaces off the components.

    The component at (preimage of a weight) + (torsion element h) realizes the
    degree-h piece of the corresponding multiplicity space; subtractions peel
    off the pieces that several spaces share.  Fills the histograms and the
    four flags: the adjoint multiplicity space has a one-dimensional neutral
    piece, the other multiplicity spaces have none, and the centralizer's
    torsion grading has no neutral piece either.
    """
    comp_dim = {d: len(idx) for d, idx in grading.components()}
    torsion = _torsion_elements(grading.group)
    label = datum.type_label or ""
    classes = _length_classes(datum)

    def hist_at(weight: tuple[int, ...]) -> dict[GroupElem, int]:
        base = sub.preimage(weight)
        if base is None:
            raise BookkeepingMismatch(f"weight {weight} has no preimage over the simple roots")
        return {h: comp_dim.get(base + h, 0) for h in torsion}

    hists: dict[str, dict[GroupElem, int]] = {}
    if label.startswith("BC"):
        if datum.rank == 1:
            short_h = hist_at(max(classes[0][1]))
            b_h = hist_at(max(classes[1][1]))
            a_h = {h: short_h[h] - b_h[h] for h in torsion}
            hists["A"], hists["B"] = a_h, b_h
        else:
            short_h = hist_at(max(classes[0][1]))
            medium_h = hist_at(max(classes[1][1]))
            b_h = hist_at(max(classes[2][1]))
            a_h = {h: medium_h[h] - b_h[h] for h in torsion}
            c_h = {h: short_h[h] - a_h[h] - b_h[h] for h in torsion}
            hists["A"], hists["B"], hists["C"] = a_h, b_h, c_h
    else:
        a_h = hist_at(max(classes[-1][1]))
        hists["A"] = a_h
        if len(classes) > 1:
            short_h = hist_at(max(classes[0][1]))
            hists["B"] = {h: short_h[h] - a_h[h] for h in torsion}

    zero = grading.group.zero()
    centre_space = centralizer(alg, sub.space)
    d_hist: dict[GroupElem, int] = {}
    one = field_one(alg.order)
    comp_spaces = {
        d: Subspace.from_vectors([{i: one} for i in idx], alg.dim, alg.order)
        for d, idx in grading.components()
    }
    total = 0
    for h in torsion:
        comp = comp_spaces.get(h)
        if comp is None:
            d_hist[h] = 0
            continue
        joined = centre_space.sum(comp)
        dim = len(centre_space.basis) + len(comp.basis) - len(joined.basis)
        d_hist[h] = dim
        total += dim
    if total != len(centre_space.basis):
        raise BookkeepingMismatch(
            "the centralizer is not graded by the torsion subgroup"
        )
    hists["D"] = d_hist

    flags = {
        "A0_is_line": hists["A"].get(zero, 0) == 1,
        "B0_zero": hists.get("B", {}).get(zero, 0) == 0,
        "C0_zero": hists.get("C", {}).get(zero, 0) == 0,
        "D_special": d_hist.get(zero, 0) == 0,
    }
    rendered = {
        name: {str(h): v for h, v in hist.items() if v}
        for name, hist in hists.items()
    }
    return replace(report, torsion_gradings=rendered, flags=flags)


# -- recovering the coordinate algebra product ----------------------------------


def recover_A_product(
    alg: StructAlgebra, sub: GradingSubalgebra, datum: RootDatum
) -> StructAlgebra:
    """Transport weight spaces along a root triangle to multiply coordinates.

    Uses three same-length roots δ₁, δ₂, δ₁+δ₂ (shortest length class when
    lengths differ, so the transported space carries the whole coordinate
    algebra).  Bases of the three spaces are matched through brackets with
    the subalgebra's root vectors, anchored at the one-dimensional subalgebra
    lines so the unit is the first basis vector, with the second factor's
    basis rescaled per vector until the anchor acts as a two-sided unit; the
    product of two coordinates is then the bracket of their realizations,
    read off in the matched basis.  The result is verified unital; the
    "commutative" flag is set when the product commutes on all basis pairs
    (it does whenever two root lengths are present, and cannot in general
    when the system is simply laced and the coordinates are octonions).
    """
    if datum.type_label is None or datum.simple_roots is None:
        raise DimMismatch("classify the root datum before recovering products")
    if datum.type_label.startswith("BC"):
        raise RankTooSmall("transport needs a reduced system")
    if datum.rank < 2:
        raise RankTooSmall("transport needs at least two independent root directions")
    classes = _length_classes(datum)
    members = set(classes[0][1])
    order = alg.order
    one = field_one(order)

    # the subalgebra's root vectors: its basis is made of ambient basis
    # vectors, so the one sitting inside a given weight space spans the
    # subalgebra's root line there
    g_lines: dict[tuple[int, ...], SVec] = {}
    for alpha in members | {tuple(-v for v in a) for a in members}:
        space = datum.space_of(alpha)
        if space is None:
            continue
        for j in sub.indices:
            vec = {j: one}
            if space.contains_vector(vec):
                g_lines[alpha] = vec
                break

    triangle = None
    for d1, d2 in itertools.permutations(sorted(members), 2):
        total = tuple(a + b for a, b in zip(d1, d2))
        if total in members and d1 in g_lines and d2 in g_lines and total in g_lines:
            neg = tuple(-v for v in d1)
            if neg in g_lines:
                triangle = (d1, d2, total)
                break
    if triangle is None:
        raise RankTooSmall("no transport triangle exists in the shortest length class")
    d1, d2, total = triangle

    v1 = datum.space_of(d1)
    v2 = datum.space_of(d2)
    v3 = datum.space_of(total)
    assert v1 is not None and v2 is not None and v3 is not None
    dim = len(v1.basis)
    if len(v2.basis) != dim or len(v3.basis) != dim:
        raise BookkeepingMismatch("transport spaces have mismatched dimensions")

    e1, e2, e12 = g_lines[d1], g_lines[d2], g_lines[total]
    e1neg = g_lines[tuple(-v for v in d1)]
    n_12 = _line_coefficient(alg, multiply(alg, e1, e2), e12)
    if n_12 is None or not n_12:
        raise BookkeepingMismatch("subalgebra root vectors do not bracket onto the triangle")
    x_basis = _anchored_basis(v1, e1, order)
    inv_n12 = _scalar_inverse(n_12, order)
    z_basis = [svec_scale(multiply(alg, x, e2), inv_n12) for x in x_basis]
    z_span = Subspace.from_vectors(z_basis, alg.dim, order)
    if len(z_span.basis) != dim:
        raise BookkeepingMismatch("transport along the second root is not bijective")
    n_back = _line_coefficient(alg, multiply(alg, e1neg, e12), e2)
    if n_back is None or not n_back:
        raise BookkeepingMismatch("backward transport vanishes on the subalgebra line")
    inv_back = _scalar_inverse(n_back, order)
    y_basis = [svec_scale(multiply(alg, e1neg, z), inv_back) for z in z_basis]
    y_span = Subspace.from_vectors(y_basis, alg.dim, order)
    if len(y_span.basis) != dim:
        raise BookkeepingMismatch("backward transport is not bijective")
    # the pairing into the target space acts with a different equivariant
    # constant on each isotypic summand, so the anchor is only a right unit
    # so far; rescale each y so the anchor's left action is the identity
    # (its image is proportional to the matching z by equivariance)
    for j in range(1, dim):
        image = svec_scale(multiply(alg, x_basis[0], y_basis[j]), inv_n12)
        t_j = _line_coefficient(alg, image, z_basis[j])
        if t_j is None or not t_j:
            raise BookkeepingMismatch("anchor action is not equivariant on the transport")
        y_basis[j] = svec_scale(y_basis[j], _scalar_inverse(t_j, order))

    z_matrix = Matrix(
        alg.dim, dim, _columns_to_rows(z_basis, alg.dim), order
    )
    table: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for i, x in enumerate(x_basis):
        for j, y in enumerate(y_basis):
            # [x_i, y_j] realizes N·(product) in the target space, with the
            # same N that normalized the forward transport
            prod = svec_scale(multiply(alg, x, y), inv_n12)
            coords = solve(z_matrix, prod)
            if coords is None:
                raise BookkeepingMismatch("a coordinate product left the target space")
            terms = [(kk, v) for kk, v in enumerate(coords) if v]
            if terms:
                table[(i, j)] = terms
    commutative = True
    for i in range(dim):
        for j in range(i + 1, dim):
            left: SVec = {k: v for k, v in table.get((i, j), []) if v}
            right: SVec = {k: v for k, v in table.get((j, i), []) if v}
            if svec_sub_scaled(left, one, right):
                commutative = False
                break
        if not commutative:
            break
    recovered = StructAlgebra(
        dim,
        table,
        labels=[f"a{i}" for i in range(dim)],
        flags=("commutative",) if commutative else ("none",),
        order=order,
    )
    for j in range(dim):
        if svec_sub_scaled(multiply(recovered, {0: one}, {j: one}), one, {j: one}):
            raise BookkeepingMismatch("recovered product is not unital at the anchor")
    return recovered


def _line_coefficient(alg: StructAlgebra, vec: SVec, line: SVec) -> Optional[Scalar]:
    """vec as a multiple of a nonzero vector, or None when not proportional."""
    pivot = next(iter(line))
    c = vec.get(pivot)
    if c is None:
        return None
    ratio = c * _scalar_inverse(line[pivot], alg.order)
    if svec_sub_scaled(vec, ratio, line):
        return None
    return ratio


def _scalar_inverse(s: Scalar, order: int) -> Scalar:
    sol = solve(Matrix(1, 1, [{0: s}], order), {0: field_one(order)})
    assert sol is not None, "inverting a zero scalar"
    return sol[0]


def _anchored_basis(space: Subspace, anchor: SVec, order: int) -> list[SVec]:
    out = [dict(anchor)]
    span = Subspace.from_vectors(out, space.ambient, order)
    for b in space.basis:
        if span.contains_vector(b):
            continue
        out.append(dict(b))
        span = Subspace.from_vectors(out, space.ambient, order)
    return out


def _columns_to_rows(cols: list[SVec], n: int) -> list[SVec]:
    rows: list[SVec] = [{} for _ in range(n)]
    for c, col in enumerate(cols):
        for r, v in col.items():
            rows[r][c] = v
    return rows
