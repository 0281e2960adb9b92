"""Structure-constant algebras and their Lie-theoretic functionals.

An algebra is stored as a sparse table of structure constants over one of the
supported cyclotomic fields.  On top of that single representation this module
provides the operators the rest of the package leans on: bilinear products of
coefficient columns, adjoint matrices, the Lie axioms as a checkable report,
the Killing form (with a degree-filtered fast path), center / derived algebra
/ centralizers, and derivation algebras computed as exact kernels of the
Leibniz system.

Conventions:

* columns are sparse ``{index: Scalar}`` dicts, matching ``exactla.SVec``;
* for anticommutative tables both orientations ``(i, j)`` and ``(j, i)`` are
  stored explicitly (see ``antisymmetrize``), so lookups never branch;
* degree sequences, when supplied, must support ``+``, ``-``, ``is_zero()``
  and ``sort_key()`` — ``abgroup.GroupElem`` does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DimMismatch, NotClosed, NotLie, OrderMismatch
from .exactla import (
    Matrix,
    Subspace,
    SVec,
    invert,
    kernel,
    solve,
    svec_add,
    svec_scale,
)
from .numfield import Scalar, from_rational
from .numfield import one as field_one
from .numfield import zero as field_zero

Terms = tuple[tuple[int, Scalar], ...]
Products = dict[tuple[int, int], Terms]

_KNOWN_FLAGS = frozenset({"lie", "jordan", "associative", "commutative", "none"})


def as_scalar(value: object, order: int) -> Scalar:
    """Lift ints/Fractions into the field; pass scalars through unchanged."""

    if isinstance(value, Scalar):
        if value.order != order:
            raise OrderMismatch(
                f"scalar of order {value.order} used in an order-{order} algebra"
            )
        return value
    return from_rational(order, value)


class StructAlgebra:
    """A finite-dimensional algebra given by structure constants.

    ``products[(i, j)]`` lists the nonzero coefficients of ``x_i · x_j`` in
    the basis; absent keys mean the product is zero.  ``flags`` records what
    the table claims to be (``check_lie`` verifies the claim on demand).
    """

    __slots__ = ("dim", "basis_labels", "products", "flags", "order", "_ad_cache")

    def __init__(
        self,
        dim: int,
        products: Mapping[tuple[int, int], Iterable[tuple[int, object]]],
        *,
        labels: Optional[Sequence[str]] = None,
        flags: Iterable[str] = ("none",),
        order: int = 3,
    ):
        if labels is None:
            labels = [f"b{r}" for r in range(dim)]
        if len(labels) != dim:
            raise DimMismatch(f"{len(labels)} labels for dimension {dim}")
        flag_set = frozenset(flags)
        if not flag_set <= _KNOWN_FLAGS:
            raise ValueError(f"unknown flags {sorted(flag_set - _KNOWN_FLAGS)}")
        table: Products = {}
        for (i, j), terms in products.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimMismatch(f"product index ({i}, {j}) outside dimension {dim}")
            acc: dict[int, Scalar] = {}
            for k, c in terms:
                if not 0 <= k < dim:
                    raise DimMismatch(f"product target {k} outside dimension {dim}")
                s = as_scalar(c, order)
                if k in acc:
                    s = acc[k] + s
                if s.is_zero():
                    acc.pop(k, None)
                else:
                    acc[k] = s
            if acc:
                table[(i, j)] = tuple(sorted(acc.items()))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "basis_labels", tuple(labels))
        object.__setattr__(self, "products", table)
        object.__setattr__(self, "flags", flag_set)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_ad_cache", {})

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("StructAlgebra is immutable")

    # -- basic access ------------------------------------------------------

    def basis_column(self, i: int) -> SVec:
        if not 0 <= i < self.dim:
            raise DimMismatch(f"basis index {i} outside dimension {self.dim}")
        return {i: field_one(self.order)}

    def basis_product(self, i: int, j: int) -> SVec:
        return dict(self.products.get((i, j), ()))

    def ad_basis(self, i: int) -> Matrix:
        """Matrix of x ↦ x_i·x (cached; the pipeline asks for these a lot)."""
        cached = self._ad_cache.get(i)
        if cached is None:
            rows: list[SVec] = [{} for _ in range(self.dim)]
            for j in range(self.dim):
                for k, c in self.products.get((i, j), ()):
                    rows[k][j] = c
            cached = Matrix(self.dim, self.dim, rows, self.order)
            self._ad_cache[i] = cached
        return cached

    def ad(self, x: SVec) -> Matrix:
        """Matrix of left multiplication y ↦ x·y."""
        rows: list[SVec] = [{} for _ in range(self.dim)]
        for i, xi in x.items():
            for j in range(self.dim):
                for k, c in self.products.get((i, j), ()):
                    v = rows[k].get(j)
                    v = xi * c if v is None else v + xi * c
                    if v.is_zero():
                        rows[k].pop(j, None)
                    else:
                        rows[k][j] = v
        return Matrix(self.dim, self.dim, rows, self.order)

    def __repr__(self) -> str:
        tags = ",".join(sorted(self.flags))
        return f"StructAlgebra(dim={self.dim}, flags={{{tags}}}, order={self.order})"


def antisymmetrize(
    upper: Mapping[tuple[int, int], Iterable[tuple[int, object]]], order: int = 3
) -> dict[tuple[int, int], list[tuple[int, Scalar]]]:
    """Complete a strictly-upper product table to both orientations.

    Construction code writes brackets once for i < j; this fills in
    ``(j, i) = -(i, j)`` so multiplication never needs a sign branch.
    """

    full: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for (i, j), terms in upper.items():
        if i >= j:
            raise ValueError(f"antisymmetrize expects i < j, got ({i}, {j})")
        fixed = [(k, as_scalar(c, order)) for k, c in terms]
        full[(i, j)] = fixed
        full[(j, i)] = [(k, -c) for k, c in fixed]
    return full


def multiply(alg: StructAlgebra, x: SVec, y: SVec) -> SVec:
    """Bilinear extension of the structure constants to sparse columns."""

    n = alg.dim
    for v in (x, y):
        for idx in v:
            if not 0 <= idx < n:
                raise DimMismatch(f"column index {idx} outside dimension {n}")
    prods = alg.products
    out: SVec = {}
    for i, xi in x.items():
        if xi.is_zero():
            continue
        for j, yj in y.items():
            terms = prods.get((i, j))
            if not terms:
                continue
            f = xi * yj
            for k, c in terms:
                v = out.get(k)
                v = f * c if v is None else v + f * c
                if v.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = v
    return out


# -- Lie axioms -------------------------------------------------------------


@dataclass(frozen=True)
class LieReport:
    """Outcome of the anticommutativity + Jacobi scan."""

    anticommutative: bool
    jacobi: bool
    witnesses: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return self.anticommutative and self.jacobi


def check_lie(alg: StructAlgebra, max_witnesses: int = 5) -> LieReport:
    """Scan every basis pair/triple for the Lie axioms.

    Triples where all three pairwise products vanish are skipped — their
    Jacobi sum is identically zero.  This keeps the 248-dimensional scans
    inside the time budget without weakening the check.
    """

    n = alg.dim
    prods = alg.products
    witnesses: list[tuple] = []

    anticomm = True
    for i in range(n):
        if prods.get((i, i)):
            anticomm = False
            if len(witnesses) < max_witnesses:
                witnesses.append(("anticommutativity", i, i))
    seen: set[tuple[int, int]] = set()
    for (i, j) in prods:
        a, b = (i, j) if i <= j else (j, i)
        if a == b or (a, b) in seen:
            continue
        seen.add((a, b))
        total: dict[int, Scalar] = dict(prods.get((a, b), ()))
        for k, c in prods.get((b, a), ()):
            v = total.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                total.pop(k, None)
            else:
                total[k] = v
        if total:
            anticomm = False
            if len(witnesses) < max_witnesses:
                witnesses.append(("anticommutativity", a, b))

    jacobi = True
    get = prods.get
    for i in range(n):
        for j in range(i + 1, n):
            p_ij = get((i, j))
            for k in range(j + 1, n):
                p_jk = get((j, k))
                p_ki = get((k, i))
                if not (p_ij or p_jk or p_ki):
                    continue
                acc: dict[int, Scalar] = {}
                for terms, col in ((p_ij, k), (p_jk, i), (p_ki, j)):
                    if not terms:
                        continue
                    for m, c in terms:
                        inner = get((m, col))
                        if not inner:
                            continue
                        for l, d in inner:
                            v = acc.get(l)
                            v = c * d if v is None else v + c * d
                            if v.is_zero():
                                acc.pop(l, None)
                            else:
                                acc[l] = v
                if acc:
                    jacobi = False
                    if len(witnesses) < max_witnesses:
                        witnesses.append(("jacobi", i, j, k))
                    else:
                        return LieReport(anticomm, jacobi, tuple(witnesses))
    return LieReport(anticomm, jacobi, tuple(witnesses))


def _require_lie(alg: StructAlgebra) -> None:
    if "lie" not in alg.flags:
        raise NotLie("operation requires an algebra flagged 'lie'")


# -- Killing form and semisimplicity ----------------------------------------


def killing_form(alg: StructAlgebra, degrees: Optional[Sequence] = None) -> Matrix:
    """Gram matrix κ(x_i, x_j) = trace(ad x_i ∘ ad x_j).

    When ``degrees`` tags each basis vector with a group element, pairs whose
    degrees do not cancel are skipped: homogeneous components pair to zero
    unless their degrees sum to the identity.  The full-scan and filtered
    paths agree (tested), the filter is purely a cost saving.
    """

    _require_lie(alg)
    n = alg.dim
    prods = alg.products
    if degrees is not None and len(degrees) != n:
        raise DimMismatch(f"{len(degrees)} degrees for dimension {n}")

    by_first: list[list[tuple[int, Terms]]] = [[] for _ in range(n)]
    lookup: dict[tuple[int, int], dict[int, Scalar]] = {}
    for (a, b), terms in prods.items():
        by_first[a].append((b, terms))
        lookup[(a, b)] = dict(terms)

    zero = field_zero(alg.order)
    rows: list[SVec] = [{} for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if degrees is not None and not (degrees[i] + degrees[j]).is_zero():
                continue
            s = zero
            for m, terms_jm in by_first[j]:
                for l, c in terms_jm:
                    back = lookup.get((i, l))
                    if back is None:
                        continue
                    d = back.get(m)
                    if d is not None:
                        s = s + c * d
            if not s.is_zero():
                rows[i][j] = s
                if i != j:
                    rows[j][i] = s
    return Matrix(n, n, rows, alg.order)


def is_semisimple(alg: StructAlgebra, gram: Optional[Matrix] = None) -> bool:
    """Cartan's criterion in characteristic zero: κ nondegenerate."""

    _require_lie(alg)
    if gram is None:
        gram = killing_form(alg)
    from .exactla import rref

    _, pivots = rref(gram)
    return len(pivots) == alg.dim


# -- distinguished subspaces -------------------------------------------------


def centralizer(alg: StructAlgebra, sub: Subspace) -> Subspace:
    """{x : [x, s] = 0 for every s in the subspace}, refined one s at a time."""

    n = alg.dim
    current = Subspace.full(n, alg.order)
    for s in sub.basis:
        if current.dim == 0:
            break
        images = [multiply(alg, s, b) for b in current.basis]
        stacked = Matrix(len(images), n, images, alg.order)
        coeffs = kernel(stacked.transpose())
        new_rows = []
        for t in coeffs.basis:
            vec: SVec = {}
            for r, f in t.items():
                vec = svec_add(vec, svec_scale(current.basis[r], f))
            new_rows.append(vec)
        current = Subspace.from_vectors(new_rows, n, alg.order)
    return current


def center(alg: StructAlgebra) -> Subspace:
    _require_lie(alg)
    return centralizer(alg, Subspace.full(alg.dim, alg.order))


def derived(alg: StructAlgebra) -> Subspace:
    """Span of all basis products, accumulated with an early full-rank exit."""

    _require_lie(alg)
    n = alg.dim
    space = Subspace.zero(n, alg.order)
    batch: list[SVec] = []
    for key in sorted(alg.products):
        i, j = key
        if i >= j:
            continue
        batch.append(dict(alg.products[key]))
        if len(batch) >= 256:
            space = space.sum(Subspace.from_vectors(batch, n, alg.order))
            batch = []
            if space.dim == n:
                return space
    if batch:
        space = space.sum(Subspace.from_vectors(batch, n, alg.order))
    return space


def restrict_to_subalgebra(
    alg: StructAlgebra,
    sub: Subspace,
    *,
    labels: Optional[Sequence[str]] = None,
    flags: Optional[Iterable[str]] = None,
) -> StructAlgebra:
    """Structure constants of a subspace that must be product-closed.

    Raises ``NotClosed`` when some product of basis vectors falls outside the
    subspace.  Coordinates are read off the echelon basis, so the result is
    deterministic given the subspace.
    """

    rows = sub.basis
    k = len(rows)
    table: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for a in range(k):
        for b in range(k):
            prod = multiply(alg, rows[a], rows[b])
            if not prod:
                continue
            if not sub.contains_vector(prod):
                raise NotClosed(f"product of basis vectors {a}, {b} leaves the subspace")
            coords = sub.coords(prod)
            terms = [(c, f) for c, f in enumerate(coords) if not f.is_zero()]
            if terms:
                table[(a, b)] = terms
    return StructAlgebra(
        k,
        table,
        labels=labels,
        flags=alg.flags if flags is None else flags,
        order=alg.order,
    )


def rebase(
    alg: StructAlgebra,
    basis: Sequence[SVec],
    *,
    labels: Optional[Sequence[str]] = None,
    flags: Optional[Iterable[str]] = None,
) -> StructAlgebra:
    """Transport the structure constants to a new ordered basis of the space.

    Unlike ``restrict_to_subalgebra`` the coordinates refer to the vectors
    exactly as given, so callers control the basis order (weight bases,
    chosen toral directions, …).  Raises ``DimMismatch`` unless the vectors
    form a basis.
    """

    n = alg.dim
    if len(basis) != n:
        raise DimMismatch(f"need {n} vectors to rebase, got {len(basis)}")
    cols = [dict(v) for v in basis]
    p_rows: list[SVec] = [{} for _ in range(n)]
    for c, vec in enumerate(cols):
        for r, val in vec.items():
            p_rows[r][c] = val
    inv = invert(Matrix(n, n, p_rows, alg.order))
    if inv is None:
        raise DimMismatch("proposed basis does not span the algebra")
    inv_cols: list[SVec] = [{} for _ in range(n)]
    for r in range(n):
        for c, val in inv.data[r].items():
            inv_cols[c][r] = val
    table: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for a in range(n):
        for b in range(n):
            prod = multiply(alg, cols[a], cols[b])
            if not prod:
                continue
            coords: SVec = {}
            for r, zr in prod.items():
                for k, w in inv_cols[r].items():
                    v = coords.get(k)
                    v = zr * w if v is None else v + zr * w
                    if v.is_zero():
                        coords.pop(k, None)
                    else:
                        coords[k] = v
            if coords:
                table[(a, b)] = sorted(coords.items())
    return StructAlgebra(
        n,
        table,
        labels=labels,
        flags=alg.flags if flags is None else flags,
        order=alg.order,
    )


# -- derivation algebras ------------------------------------------------------


@dataclass(frozen=True)
class LinMap:
    """A linear map between structure-constant algebras."""

    source: StructAlgebra
    target: StructAlgebra
    matrix: Matrix

    def __post_init__(self) -> None:
        if self.matrix.cols != self.source.dim or self.matrix.rows != self.target.dim:
            raise DimMismatch(
                f"matrix {self.matrix.rows}×{self.matrix.cols} does not map "
                f"dim {self.source.dim} into dim {self.target.dim}"
            )


@dataclass(frozen=True)
class DerivationAlgebra:
    """Der(A): a Lie algebra plus the concrete matrices of its basis.

    ``degrees`` is populated when the input algebra was graded; derivation
    basis element ``r`` is then homogeneous of degree ``degrees[r]`` for the
    grading of A, and the commutator table respects those degrees.  ``span``
    and ``change`` let ``coords`` express any derivation of A in this basis.
    """

    algebra: StructAlgebra
    maps: tuple[Matrix, ...]
    span: Subspace
    change: Matrix
    degrees: Optional[tuple] = None

    def coords(self, mat: Matrix) -> Optional[list[Scalar]]:
        """Coefficients of a map in the derivation basis (None if outside)."""
        return _map_coords(self.span, self.change, mat)


def _map_coords(span: Subspace, change: Matrix, mat: Matrix) -> Optional[list[Scalar]]:
    n = mat.cols
    flat: SVec = {}
    for r, row in enumerate(mat.data):
        for c, v in row.items():
            flat[r * n + c] = v
    if not span.contains_vector(flat):
        return None
    target = {c: v for c, v in enumerate(span.coords(flat)) if not v.is_zero()}
    return solve(change, target)


def _canonical_pairs(alg: StructAlgebra) -> list[tuple[int, int]]:
    """Ordered pairs whose Leibniz equations are not forced by symmetry."""

    n = alg.dim
    if "lie" in alg.flags:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if "jordan" in alg.flags:
        return [(i, j) for i in range(n) for j in range(i, n)]
    return [(i, j) for i in range(n) for j in range(n)]


def _leibniz_kernel(
    alg: StructAlgebra, unknowns: Sequence[tuple[int, int]]
) -> list[Matrix]:
    """Kernel of D(x_i x_j) = D(x_i)x_j + x_i D(x_j) over chosen D-entries.

    ``unknowns`` lists the admissible matrix positions (k, l) of D; all other
    entries are constrained to zero (used for homogeneous components).  Each
    kernel basis vector is returned as a dense-indexed sparse Matrix.
    """

    n = alg.dim
    col_of = {pos: c for c, pos in enumerate(unknowns)}
    prods = alg.products
    lookup = {key: dict(terms) for key, terms in prods.items()}

    rows: list[SVec] = []
    for (i, j) in _canonical_pairs(alg):
        eq: dict[int, dict[int, Scalar]] = {}

        def put(k: int, pos: tuple[int, int], c: Scalar) -> None:
            col = col_of.get(pos)
            if col is None:
                return
            comp = eq.setdefault(k, {})
            v = comp.get(col)
            v = c if v is None else v + c
            if v.is_zero():
                comp.pop(col, None)
            else:
                comp[col] = v

        for l, c in prods.get((i, j), ()):
            for k in range(n):
                put(k, (k, l), c)
        for m in range(n):
            # -D(x_i)x_j term: D contributes via unknown (m, i)
            inner = lookup.get((m, j))
            if inner:
                for k, d in inner.items():
                    put(k, (m, i), -d)
            # -x_i D(x_j) term: unknown (m, j)
            inner = lookup.get((i, m))
            if inner:
                for k, d in inner.items():
                    put(k, (m, j), -d)
        for comp in eq.values():
            if comp:
                rows.append(comp)

    system = Matrix(len(rows), len(unknowns), rows, alg.order)
    null = kernel(system)
    maps: list[Matrix] = []
    for coeffs in null.basis:
        mat_rows: list[SVec] = [{} for _ in range(n)]
        for col, f in coeffs.items():
            k, l = unknowns[col]
            mat_rows[k][l] = f
        maps.append(Matrix(n, n, mat_rows, alg.order))
    return maps


def derivations(
    alg: StructAlgebra, degrees: Optional[Sequence] = None
) -> DerivationAlgebra:
    """Der(A) with commutator structure constants in the kernel basis.

    With ``degrees`` the Leibniz system is solved degree by degree: every
    homogeneous component of a derivation is again a derivation, so the
    kernel splits into blocks indexed by candidate degrees (differences of
    support degrees), and Der(A) inherits a grading, which is returned.
    """

    n = alg.dim
    if degrees is None:
        all_unknowns = [(k, l) for k in range(n) for l in range(n)]
        maps = _leibniz_kernel(alg, all_unknowns)
        der_degrees: Optional[list] = None
    else:
        if len(degrees) != n:
            raise DimMismatch(f"{len(degrees)} degrees for dimension {n}")
        support = sorted({d for d in degrees}, key=lambda d: d.sort_key())
        candidates = sorted(
            {d2 - d1 for d1 in support for d2 in support}, key=lambda d: d.sort_key()
        )
        maps = []
        der_degrees = []
        for g in candidates:
            block = [
                (k, l)
                for l in range(n)
                for k in range(n)
                if degrees[k] == degrees[l] + g
            ]
            if not block:
                continue
            for mat in _leibniz_kernel(alg, block):
                maps.append(mat)
                der_degrees.append(g)

    dim_der = len(maps)
    vecs: list[SVec] = []
    for mat in maps:
        flat: SVec = {}
        for r, row in enumerate(mat.data):
            for c, v in row.items():
                flat[r * n + c] = v
        vecs.append(flat)
    span = Subspace.from_vectors(vecs, n * n, alg.order)
    assert span.dim == dim_der, "derivation basis must be independent"
    change = Matrix(dim_der, dim_der, [
        {c: v for c, v in enumerate(span.coords(vec)) if not v.is_zero()}
        for vec in vecs
    ], alg.order).transpose()

    table: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for a in range(dim_der):
        for b in range(a + 1, dim_der):
            comm = maps[a] @ maps[b] - maps[b] @ maps[a]
            coeffs = _map_coords(span, change, comm)
            assert coeffs is not None, "Der(A) must close under commutator"
            terms = [(r, f) for r, f in enumerate(coeffs) if not f.is_zero()]
            if terms:
                table[(a, b)] = terms
    der = StructAlgebra(
        dim_der,
        antisymmetrize(table, alg.order),
        labels=[f"D{r}" for r in range(dim_der)],
        flags=("lie",),
        order=alg.order,
    )
    return DerivationAlgebra(
        der, tuple(maps), span, change,
        None if der_degrees is None else tuple(der_degrees),
    )


def satisfies_leibniz(alg: StructAlgebra, mat: Matrix) -> bool:
    """True when the map satisfies the Leibniz rule on all basis pairs."""

    n = alg.dim
    for i in range(n):
        di = mat.apply({i: field_one(alg.order)})
        for j in range(n):
            prod = dict(alg.products.get((i, j), ()))
            lhs = mat.apply(prod)
            dj = mat.apply({j: field_one(alg.order)})
            rhs = svec_add(
                multiply(alg, di, {j: field_one(alg.order)}),
                multiply(alg, {i: field_one(alg.order)}, dj),
            )
            if svec_add(lhs, svec_scale(rhs, from_rational(alg.order, -1))):
                return False
    return True
